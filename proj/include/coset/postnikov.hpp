#ifndef COSET_POSTNIKOV_HPP
#define COSET_POSTNIKOV_HPP

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "coset/characters.hpp"
#include "coset/modarith.hpp"

namespace coset {

/// The truncated d-adic logarithm L_q(1+dx) as a polynomial over Z/qZ.
/// coeffs[k-1] is the reduction of (-1)^{k+1} d^k / k; beyond truncation_n
/// every exact coefficient reduces to 0 mod q.  All coefficients are
/// multiples of d.
struct TruncatedLog {
    int64_t d = 1;
    int64_t q = 1;
    std::vector<int64_t> coeffs;  // index k-1 holds the degree-k coefficient
    int truncation_n = 1;
};

/// Build L_q(1+dx) for odd d | q with q | d^infinity (same prime support).
TruncatedLog lq_build(int64_t d, const FactoredModulus& q);

/// Constructive truncation point in the p-adic case q = p^a, d = p: the
/// minimal M with k - a >= log(k) for all k >= M (k - log k is increasing).
int64_t log_gap_bound(int a);

/// Horner evaluation of the truncated polynomial at x, result in [0, q).
int64_t lq_eval(const TruncatedLog& lq, int64_t x);

/// The Postnikov invariant of a primitive character: the signed a_psi with
/// psi(1+dx) = e_q(a_psi L_q(1+dx)) for all x, and its signed reduction
/// b_psi mod d (present when d | q/d).  verified = the identity was checked
/// exhaustively over x mod q/d.
struct PostnikovData {
    DirichletCharacter psi;
    int64_t d = 1;
    int64_t a_psi = 0;   // in (-q/2d, q/2d), coprime to q/d
    std::optional<int64_t> b_psi;  // in (-d/2, d/2), b = a mod d
    bool verified = false;

    int64_t q() const { return psi.modulus(); }

    std::string to_json() const;
};

/// Solve for a_psi from the single point x = 1, then certify the Postnikov
/// identity exhaustively.  Requires psi primitive mod q and d | q with the
/// same prime support.  Pass a prebuilt log to share it across characters.
PostnikovData compute_postnikov(const DirichletCharacter& psi, int64_t d,
                                const TruncatedLog* lq = nullptr);

/// Solve-only path (no certificate): the signed a_psi from the single point
/// x = 1.  Cheap enough to rank every primitive character when selecting
/// scan samples; certify the chosen ones with compute_postnikov.
int64_t postnikov_solve(const DirichletCharacter& psi, const TruncatedLog& lq);

/// S_{q,d}(psi, k) = sum_{u mod q/d} psi(1+du) e_q(dku), brute force.
std::complex<double> s_qd_brute(const DirichletCharacter& psi, int64_t d, int64_t k);

/// Closed form of S_{q,d}.  Regime A (d | q, q | d^2): q/d or 0 by the
/// congruence k = -a_psi mod q/d.  Regime B (d^2 | q, q | d^3, gcd(q,3)=1):
/// 0 unless k = -a_psi mod d, else eps_q sqrt(q) e_q((2a)^{-1}(k+a)^2)
/// times the Jacobi symbol (-2a / (q/d^2)).
std::complex<double> s_qd_closed(const PostnikovData& data, int64_t k);

/// Heath-Brown's sum S(q; chi, h, n) = sum_m chi(m+h) conj(chi(m)) e(mn/q).
std::complex<double> hb_sum_brute(const DirichletCharacter& chi, int64_t h, int64_t n);

} // namespace coset

#endif
