#ifndef COSET_MODARITH_HPP
#define COSET_MODARITH_HPP

#include <complex>
#include <cstdint>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "coset/errors.hpp"

namespace coset {

using std::int64_t;

/// An odd positive integer together with its prime factorization.
/// Everything downstream (unit groups, Postnikov data, moment reports)
/// hangs q, d, q/d, q/d^2 and phi off this type.
struct FactoredModulus {
    int64_t value = 1;
    std::vector<std::pair<int64_t, int>> factors;  // (prime, exponent), primes increasing
    int64_t phi = 1;

    // Factor by trial division.  Rejects even input.
    static FactoredModulus from_value(int64_t v);
    // Build from pre-factored (prime, exponent) pairs; primes must be odd and distinct.
    static FactoredModulus from_factors(std::vector<std::pair<int64_t, int>> f);

    bool is_prime_power() const { return factors.size() == 1; }
    // The factored divisor d of *this given its value (d must divide value).
    FactoredModulus divisor(int64_t d) const;
};

/// p-adic valuation: largest e with p^e | n.  Requires n >= 1.
int nu_p(int64_t n, int64_t p);
int nu_p(const mpz_class& n, const mpz_class& p);

enum class PrecRelation { Prec, PreceqOnly, Neither };

/// The "same prime support, smaller valuations" partial orders:
/// Prec means a < b at every prime of b (strictly), PreceqOnly means <= but
/// not everywhere <, Neither means the supports differ or some valuation of a
/// exceeds b's.
PrecRelation prec_relation(int64_t a, int64_t b);

inline bool prec(int64_t a, int64_t b) { return prec_relation(a, b) == PrecRelation::Prec; }
inline bool preceq(int64_t a, int64_t b) {
    auto r = prec_relation(a, b);
    return r == PrecRelation::Prec || r == PrecRelation::PreceqOnly;
}

/// Multiplicative inverse mod m, result in [0, m).  Throws NotInvertible.
int64_t mod_inv(int64_t a, int64_t m);
mpz_class mod_inv(const mpz_class& a, const mpz_class& m);

int64_t mul_mod(int64_t a, int64_t b, int64_t m);
int64_t pow_mod(int64_t base, int64_t exp, int64_t m);

/// Jacobi symbol (B/r) for odd r >= 1; 0 iff gcd(B, r) > 1.
int jacobi(int64_t B, int64_t r);
int jacobi(const mpz_class& B, const mpz_class& r);

/// epsilon_r = 1 for r = 1 mod 4, i for r = 3 mod 4 (r odd).
std::complex<double> epsilon_r(int64_t r);

/// Closed-form quadratic Gauss sum sum_{u mod r} e_r(Au + Bu^2)
/// = e_r(-(4B)^{-1} A^2) (B/r) epsilon_r sqrt(r), for odd r, gcd(B,r)=1.
std::complex<double> quad_gauss_closed(int64_t A, int64_t B, int64_t r);

/// Literal sum, compensated summation, ascending u.  Oracle for the closed form.
std::complex<double> quad_gauss_brute(int64_t A, int64_t B, int64_t r);

/// theta(q) = sum over primes p | q of log(p)/(p-1).
double theta_q(const FactoredModulus& q);

/// Number of divisors and the sorted divisor list.
int64_t sigma0(int64_t n);
std::vector<int64_t> divisors(int64_t n);

/// Compensated (Kahan) complex accumulator; fixed insertion order gives
/// reproducible sums.
class KahanSum {
public:
    void add(std::complex<double> x) {
        const std::complex<double> y = x - comp_;
        const std::complex<double> t = sum_ + y;
        comp_ = (t - sum_) - y;
        sum_ = t;
    }
    std::complex<double> value() const { return sum_; }

private:
    std::complex<double> sum_{0.0, 0.0};
    std::complex<double> comp_{0.0, 0.0};
};

/// e(num/den) = exp(2*pi*i*num/den).
std::complex<double> unit_root(int64_t num, int64_t den);

} // namespace coset

#endif
