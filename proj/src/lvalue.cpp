#include "coset/lvalue.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <numeric>

#include "coset/modarith.hpp"

namespace coset {

namespace {

constexpr double kPi = std::numbers::pi;

// Lanczos g = 7, n = 9 (Godfrey coefficients).
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,  676.5203681218851,   -1259.1392167224028,
    771.32342877765313,   -176.61502916214059, 12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

} // namespace

std::complex<double> complex_gamma(std::complex<double> z) {
    if (z.real() < 0.5) {
        // Reflection: Gamma(z) Gamma(1-z) = pi / sin(pi z).
        return kPi / (std::sin(kPi * z) * complex_gamma(1.0 - z));
    }
    z -= 1.0;
    std::complex<double> x = kLanczos[0];
    for (size_t i = 1; i < kLanczos.size(); ++i)
        x += kLanczos[i] / (z + static_cast<double>(i));
    const std::complex<double> t = z + 7.5;
    return std::sqrt(2.0 * kPi) * std::pow(t, z + 0.5) * std::exp(-t) * x;
}

std::complex<double> gamma_factor(std::complex<double> s) {
    const std::complex<double> half = s * 0.5;
    if (half.imag() == 0.0 && half.real() <= 0.0 &&
        half.real() == std::floor(half.real()))
        throw PoleInput("gamma_factor pole at s = " + std::to_string(s.real()));
    return std::pow(kPi, -half) * complex_gamma(half);
}

double euler_gamma() { return 0.5772156649015328606065120900824024; }

double digamma_quarter() {
    // psi(1/4) = -gamma - 3 log 2 - pi/2.
    return -euler_gamma() - 3.0 * std::log(2.0) - kPi / 2.0;
}

double digamma(double x) {
    double acc = 0.0;
    while (x < 8.0) { acc -= 1.0 / x; x += 1.0; }
    const double inv = 1.0 / x, inv2 = inv * inv;
    // Asymptotic series through the x^{-12} term.
    double series = std::log(x) - 0.5 * inv -
                    inv2 * (1.0 / 12 - inv2 * (1.0 / 120 - inv2 * (1.0 / 252 -
                            inv2 * (1.0 / 240 - inv2 * (1.0 / 132 - inv2 * 691.0 / 32760)))));
    return acc + series;
}

namespace {

double v_contour(double x, double c) {
    // (1/2pi) int dt of f(c+it); integrand is conjugate-symmetric in t, so
    // integrate t >= 0 and double the real part.
    const std::complex<double> g12 = gamma_factor(0.5);
    const double logx = std::log(x);
    auto integrand = [&](double t) {
        const std::complex<double> s{c, t};
        const std::complex<double> g = gamma_factor(0.5 + s) / g12;
        return g * g / s * std::exp(-s * logx);
    };
    const double h = std::min(0.0625, c / 8.0);
    // |gamma(1/4 + s/2)|^2 decays like exp(-pi t / 2): cross the underflow
    // point with margin.
    const double scale = std::abs(integrand(0.0));
    KahanSum acc;
    acc.add(0.5 * integrand(0.0));
    for (double t = h;; t += h) {
        const std::complex<double> f = integrand(t);
        acc.add(f);
        if (t > 12.0 && std::abs(f) < 1e-19 * (scale + 1.0)) break;
        if (t > 4000.0) throw QuadratureNotConverged("v_of_x contour did not decay");
    }
    return 2.0 * acc.value().real() * h / (2.0 * kPi);
}

} // namespace

double v_of_x(double x, double abscissa) {
    if (!(x > 0.0)) throw PreconditionViolated("v_of_x needs x > 0");
    double c = abscissa;
    if (c == 0.0) {
        if (x < 1.0)
            c = std::min(1.0, std::max(0.04, 1.0 / std::log(1.0 / x)));
        else
            c = 2.0 + std::log(x);
    }
    return v_contour(x, c);
}

VTable VTable::build(int points, double x_min, double x_max) {
    VTable t;
    t.x_min_ = x_min;
    t.x_max_ = x_max;
    t.log_min_ = std::log(x_min);
    const double log_max = std::log(x_max);
    t.inv_step_ = (points - 1) / (log_max - t.log_min_);
    t.values_.resize(static_cast<size_t>(points));
    for (int i = 0; i < points; ++i) {
        const double x = std::exp(t.log_min_ + i / t.inv_step_);
        t.values_[static_cast<size_t>(i)] = v_of_x(x);
    }
    return t;
}

double VTable::operator()(double x) const {
    if (x >= x_max_) return 0.0;
    if (x <= x_min_) return values_.front();
    const double u = (std::log(x) - log_min_) * inv_step_;
    const auto n = static_cast<std::ptrdiff_t>(values_.size());
    auto i = static_cast<std::ptrdiff_t>(u);
    if (i < 1) i = 1;
    if (i > n - 3) i = n - 3;
    const double f = u - static_cast<double>(i);
    // Catmull-Rom through the four surrounding samples.
    const double p0 = values_[static_cast<size_t>(i - 1)];
    const double p1 = values_[static_cast<size_t>(i)];
    const double p2 = values_[static_cast<size_t>(i + 1)];
    const double p3 = values_[static_cast<size_t>(i + 2)];
    return p1 + 0.5 * f * (p2 - p0 +
           f * (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3 +
           f * (3.0 * (p1 - p2) + p3 - p0)));
}

const VTable& shared_v_table() {
    static const VTable table = VTable::build();
    return table;
}

double hurwitz_zeta_half(double a) {
    if (!(a > 0.0) || a > 1.0)
        throw PreconditionViolated("hurwitz_zeta_half needs 0 < a <= 1");
    constexpr double s = 0.5;
    constexpr int n_direct = 28;
    // B_2, B_4, ..., B_16 over (2k)!.
    constexpr std::array<double, 8> b2k_over_fact = {
        1.0 / 12, -1.0 / 720, 1.0 / 30240, -1.0 / 1209600,
        1.0 / 47900160, -691.0 / 1307674368000.0, 1.0 / 74724249600.0,
        -3617.0 / 10670622842880000.0};
    double sum = 0.0;
    for (int n = 0; n < n_direct; ++n) sum += 1.0 / std::sqrt(n + a);
    const double na = n_direct + a;
    sum += -2.0 * std::sqrt(na);          // (N+a)^{1-s}/(s-1) at s = 1/2
    sum += 0.5 / std::sqrt(na);
    // Correction terms B_{2k}/(2k)! (s)_{2k-1} (N+a)^{-s-2k+1}.
    double poch = s;                      // (s)_1
    double power = std::pow(na, -s - 1.0);
    for (size_t k = 0; k < b2k_over_fact.size(); ++k) {
        sum += b2k_over_fact[k] * poch * power;
        poch *= (s + 2.0 * k + 1.0) * (s + 2.0 * k + 2.0);
        power /= na * na;
    }
    return sum;
}

LCentralEvaluator::LCentralEvaluator(std::shared_ptr<const UnitGroup> group)
    : group_(std::move(group)) {
    const int64_t q = group_->value();
    zeta_.resize(static_cast<size_t>(q));
    for (int64_t a = 1; a <= q; ++a)
        zeta_[static_cast<size_t>(a - 1)] =
            hurwitz_zeta_half(static_cast<double>(a) / static_cast<double>(q));
    const int64_t order = group_->order_lcm();
    roots_.resize(static_cast<size_t>(order));
    for (int64_t j = 0; j < order; ++j)
        roots_[static_cast<size_t>(j)] = unit_root(j, order);
}

std::complex<double> LCentralEvaluator::l_central(const DirichletCharacter& chi) const {
    if (chi.modulus() != group_->value())
        throw PreconditionViolated("character modulus does not match evaluator");
    if (chi.is_principal())
        throw PrincipalCharacter("l_central rejects the principal character");
    const int64_t q = group_->value();
    KahanSum acc;
    for (int64_t a = 1; a <= q; ++a) {
        const int64_t num = chi.phase_numerator(a);
        if (num < 0) continue;
        acc.add(roots_[static_cast<size_t>(num)] * zeta_[static_cast<size_t>(a - 1)]);
    }
    return acc.value() / std::sqrt(static_cast<double>(q));
}

std::complex<double> l_central_hurwitz(const DirichletCharacter& chi) {
    return LCentralEvaluator(chi.group_ptr()).l_central(chi);
}

AfeTable::AfeTable(std::shared_ptr<const UnitGroup> group, const VTable& v,
                   double cutoff_t)
    : group_(std::move(group)), cutoff_t_(cutoff_t) {
    const int64_t q = group_->value();
    if (cutoff_t_ < 60.0 * static_cast<double>(q))
        throw PreconditionViolated("AFE cutoff must be at least 60q");
    const auto big_t = static_cast<int64_t>(cutoff_t_);
    // Unit flags and inverses mod q, one extended-Euclid pass each.
    std::vector<int64_t> inv(static_cast<size_t>(q), -1);
    for (int64_t r = 1; r < q; ++r)
        if (std::gcd(r, q) == 1) inv[static_cast<size_t>(r)] = mod_inv(r, q);
    if (q == 1) inv.assign(1, 0);

    s_.assign(static_cast<size_t>(q), 0.0);
    const double qd = static_cast<double>(q);
    for (int64_t m = 1; m <= big_t; ++m) {
        if (inv[static_cast<size_t>(m % q)] < 0) continue;
        const int64_t m_mod = m % q;
        for (int64_t n = 1; n * m <= big_t; ++n) {
            const int64_t ninv = inv[static_cast<size_t>(n % q)];
            if (ninv < 0) continue;
            const double mn = static_cast<double>(m) * static_cast<double>(n);
            const double w = v(mn / qd);
            if (w == 0.0) {
                if (static_cast<double>(n) * static_cast<double>(m) / qd > v.x_max())
                    break;  // V vanishes for all larger n at this m
                continue;
            }
            s_[static_cast<size_t>(mul_mod(m_mod, ninv, q))] += w / std::sqrt(mn);
        }
    }
    const int64_t order = group_->order_lcm();
    roots_.resize(static_cast<size_t>(order));
    for (int64_t j = 0; j < order; ++j)
        roots_[static_cast<size_t>(j)] = unit_root(j, order);
}

double AfeTable::moment_term(const DirichletCharacter& chi) const {
    const int64_t q = group_->value();
    KahanSum acc;
    for (int64_t c = 1; c < q || (q == 1 && c == 1); ++c) {
        const double sc = s_[static_cast<size_t>(c % q)];
        if (sc == 0.0) continue;
        const int64_t num = chi.phase_numerator(c);
        if (num < 0) continue;
        acc.add(roots_[static_cast<size_t>(num)] * sc);
    }
    return 2.0 * acc.value().real();
}

double afe_moment_term(const DirichletCharacter& chi, const AfeTable& table) {
    if (!chi.is_primitive() || !chi.is_even() || chi.modulus() <= 1)
        throw NotPrimitiveEven("afe_moment_term requires a primitive even character");
    if (chi.modulus() != table.group().value())
        throw PreconditionViolated("character modulus does not match AFE table");
    return table.moment_term(chi);
}

double afe_moment_term(const DirichletCharacter& chi, const VTable& v, double cutoff_t) {
    return afe_moment_term(chi, AfeTable(chi.group_ptr(), v, cutoff_t));
}

namespace {

// Gauss-Legendre 16-point nodes/weights on [-1, 1].
constexpr std::array<double, 8> kGlNodes = {
    0.0950125098376374, 0.2816035507792589, 0.4580167776572274,
    0.6178762444026438, 0.7554044083550030, 0.8656312023878318,
    0.9445750230732326, 0.9894009349916499};
constexpr std::array<double, 8> kGlWeights = {
    0.1894506104550685, 0.1826034150449236, 0.1691565193950025,
    0.1495959888165767, 0.1246289712555339, 0.0951585116824928,
    0.0622535239386479, 0.0271524594117541};

template <typename F>
double gl16(F&& f, double a, double b) {
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double acc = 0.0;
    for (size_t i = 0; i < 8; ++i) {
        acc += kGlWeights[i] * (f(mid + half * kGlNodes[i]) + f(mid - half * kGlNodes[i]));
    }
    return acc * half;
}

// int_0^inf x^{-alpha} sin(2 pi K x) dx by: series on [0, x0], Gauss panels
// per half-period on [x0, X], then a two-term asymptotic tail.
double sine_integral(double alpha, double big_k, double x_end) {
    const double w = 2.0 * kPi * big_k;
    const double x0 = 0.05 / big_k;
    // Series: sin(wx) = sum (-1)^i (wx)^{2i+1}/(2i+1)!
    double head = 0.0, wpow = w, fact = 1.0;
    for (int i = 0; i < 24; ++i) {
        const double expo = 2.0 * i + 2.0 - alpha;
        const double term = wpow / fact * std::pow(x0, expo) / expo;
        head += (i % 2 == 0) ? term : -term;
        if (std::abs(term) < 1e-18 * (std::abs(head) + 1.0)) break;
        wpow *= w * w;
        fact *= (2.0 * i + 2.0) * (2.0 * i + 3.0);
    }
    auto f = [&](double x) { return std::pow(x, -alpha) * std::sin(w * x); };
    const double half_period = 0.5 / big_k;
    double x_panel = x0;
    // Align panel ends to half-period boundaries for stable alternating sums.
    double next = half_period * std::ceil(x0 / half_period + 1e-12);
    KahanSum acc;
    while (x_panel < x_end) {
        const double hi = std::min(next, x_end);
        if (hi > x_panel) acc.add({gl16(f, x_panel, hi), 0.0});
        x_panel = hi;
        next += half_period;
    }
    const double x_big = x_panel;
    // Tail: repeated integration by parts, error O(X^{-alpha-2}).
    const double tail =
        std::cos(w * x_big) * std::pow(x_big, -alpha) / w +
        alpha * std::sin(w * x_big) * std::pow(x_big, -alpha - 1.0) / (w * w);
    return head + acc.value().real() + tail;
}

} // namespace

MellinCheck mellin_check(double s, int64_t k) {
    if (!(s > -0.5 && s < 0.5) || k == 0)
        throw PreconditionViolated("mellin_check needs -1/2 < s < 1/2 and k != 0");
    const double big_k = std::abs(static_cast<double>(k));
    const double alpha = s + 1.5;
    // One integration by parts makes the integrand absolutely convergent.
    const double x_end = std::max(64.0, 512.0 / big_k);
    const double j1 = sine_integral(alpha, big_k, x_end);
    const double j2 = sine_integral(alpha, big_k, 2.0 * x_end);
    if (std::abs(j1 - j2) > 1e-7 * (std::abs(j1) + 1.0))
        throw QuadratureNotConverged("mellin_check oscillatory quadrature unstable");
    const double lhs = (s + 0.5) / (2.0 * kPi * big_k) * j2;
    const double rhs = std::exp(std::lgamma(0.5 - s)) *
                       std::pow(2.0 * kPi * big_k, s - 0.5) *
                       std::cos(kPi / 2.0 * (0.5 - s));
    return {lhs, rhs};
}

} // namespace coset
