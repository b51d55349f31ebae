#ifndef COSET_LVALUE_HPP
#define COSET_LVALUE_HPP

#include <complex>
#include <cstdint>
#include <memory>
#include <vector>

#include "coset/characters.hpp"

namespace coset {

/// Complex gamma via Lanczos; accurate to ~1e-13 relative away from poles.
std::complex<double> complex_gamma(std::complex<double> z);

/// gamma(s) = pi^{-s/2} Gamma(s/2).  Throws PoleInput at s = 0, -2, -4, ...
std::complex<double> gamma_factor(std::complex<double> s);

/// Euler's constant and psi0(1/4) = -gamma - 3 log 2 - pi/2.
double euler_gamma();
double digamma_quarter();
/// Generic digamma (recurrence + asymptotic series); the independent source
/// for cross-checking the closed form above.
double digamma(double x);

/// The AFE cutoff V(x) = (1/2pi i) int_(c) (1/s) gamma(1/2+s)^2/gamma(1/2)^2
/// x^{-s} ds with G = 1, by trapezoidal quadrature on the vertical line.
/// abscissa = 0 picks c automatically from x.
double v_of_x(double x, double abscissa = 0.0);

/// V tabulated on a geometric grid with cubic interpolation in log x.
/// Below the grid the value saturates at the smallest-x entry; above it, 0.
class VTable {
public:
    static VTable build(int points = 4096, double x_min = 1e-8, double x_max = 1e2);

    double operator()(double x) const;

    double x_min() const { return x_min_; }
    double x_max() const { return x_max_; }
    int points() const { return static_cast<int>(values_.size()); }

private:
    double x_min_ = 0, x_max_ = 0;
    double log_min_ = 0, inv_step_ = 0;
    std::vector<double> values_;
};

/// Shared V table for the process; built on first use.
const VTable& shared_v_table();

/// Hurwitz zeta at s = 1/2 for 0 < a <= 1, Euler-Maclaurin with Bernoulli
/// corrections through B16.
double hurwitz_zeta_half(double a);

/// Per-modulus precompute: zeta(1/2, a/q) for a = 1..q plus the root-of-unity
/// table, reused across every character mod q.
class LCentralEvaluator {
public:
    explicit LCentralEvaluator(std::shared_ptr<const UnitGroup> group);

    /// L(1/2, chi) = q^{-1/2} sum_a chi(a) zeta(1/2, a/q).
    /// Throws PrincipalCharacter for the principal character.
    std::complex<double> l_central(const DirichletCharacter& chi) const;

    const UnitGroup& group() const { return *group_; }

private:
    std::shared_ptr<const UnitGroup> group_;
    std::vector<double> zeta_;                       // zeta_[a-1] = zeta(1/2, a/q)
    std::vector<std::complex<double>> roots_;        // e(j / order_lcm)
};

/// One-off convenience wrapper around LCentralEvaluator.
std::complex<double> l_central_hurwitz(const DirichletCharacter& chi);

/// Per-modulus AFE precompute: S[c] = sum over unit pairs m*nbar = c (mod q),
/// mn <= T, of V(mn/q)/sqrt(mn).  Every character mod q then costs O(q).
class AfeTable {
public:
    AfeTable(std::shared_ptr<const UnitGroup> group, const VTable& v, double cutoff_t);

    double cutoff() const { return cutoff_t_; }
    const UnitGroup& group() const { return *group_; }

    /// 2 sum_c chi(c) S[c] = L(1/2,chi) L(1/2,conj chi) for chi primitive even.
    double moment_term(const DirichletCharacter& chi) const;

private:
    std::shared_ptr<const UnitGroup> group_;
    double cutoff_t_;
    std::vector<double> s_;                          // indexed by residue c
    std::vector<std::complex<double>> roots_;
};

/// AFE route to |L(1/2, chi)|^2 for primitive even chi of conductor q > 1.
/// Throws NotPrimitiveEven otherwise.
double afe_moment_term(const DirichletCharacter& chi, const VTable& v, double cutoff_t);
double afe_moment_term(const DirichletCharacter& chi, const AfeTable& table);

/// Both sides of the Mellin identity
///   int_0^inf x^{-s} cos(2 pi k x) dx/sqrt(x)
///     = Gamma(1/2-s) (2 pi |k|)^{s-1/2} cos(pi/2 (1/2-s)),
/// lhs by oscillatory quadrature, rhs by the closed form.
struct MellinCheck { double lhs; double rhs; };
MellinCheck mellin_check(double s, int64_t k);

} // namespace coset

#endif
