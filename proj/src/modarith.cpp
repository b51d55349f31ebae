#include "coset/modarith.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

namespace coset {

FactoredModulus FactoredModulus::from_value(int64_t v) {
    if (v < 1)
        throw PreconditionViolated("modulus must be positive, got " + std::to_string(v));
    if (v % 2 == 0)
        throw EvenModulus("modulus must be odd, got " + std::to_string(v));
    FactoredModulus m;
    m.value = v;
    int64_t n = v;
    for (int64_t p = 3; p * p <= n; p += 2) {
        if (n % p == 0) {
            int e = 0;
            while (n % p == 0) { n /= p; ++e; }
            m.factors.emplace_back(p, e);
        }
    }
    if (n > 1) m.factors.emplace_back(n, 1);
    m.phi = 1;
    for (auto [p, e] : m.factors) {
        int64_t pe1 = 1;
        for (int i = 1; i < e; ++i) pe1 *= p;
        m.phi *= pe1 * (p - 1);
    }
    return m;
}

FactoredModulus FactoredModulus::from_factors(std::vector<std::pair<int64_t, int>> f) {
    std::sort(f.begin(), f.end());
    int64_t v = 1;
    for (size_t i = 0; i < f.size(); ++i) {
        auto [p, e] = f[i];
        if (p < 3 || p % 2 == 0)
            throw EvenModulus("prime factors must be odd, got " + std::to_string(p));
        if (e < 1)
            throw PreconditionViolated("exponent must be >= 1");
        if (i > 0 && f[i - 1].first == p)
            throw PreconditionViolated("duplicate prime " + std::to_string(p));
        for (int i2 = 0; i2 < e; ++i2) v *= p;
    }
    FactoredModulus m = from_value(v);
    return m;
}

FactoredModulus FactoredModulus::divisor(int64_t d) const {
    if (d < 1 || value % d != 0)
        throw PreconditionViolated(std::to_string(d) + " does not divide " + std::to_string(value));
    FactoredModulus m;
    m.value = d;
    m.phi = 1;
    for (auto [p, e] : factors) {
        int ed = nu_p(d, p);
        if (ed == 0) continue;
        m.factors.emplace_back(p, ed);
        int64_t pe1 = 1;
        for (int i = 1; i < ed; ++i) pe1 *= p;
        m.phi *= pe1 * (p - 1);
    }
    return m;
}

int nu_p(int64_t n, int64_t p) {
    int e = 0;
    while (n % p == 0) { n /= p; ++e; }
    return e;
}

int nu_p(const mpz_class& n, const mpz_class& p) {
    mpz_class m = n, r;
    int e = 0;
    for (;;) {
        mpz_class quo;
        mpz_fdiv_qr(quo.get_mpz_t(), r.get_mpz_t(), m.get_mpz_t(), p.get_mpz_t());
        if (r != 0) break;
        m = quo;
        ++e;
    }
    return e;
}

PrecRelation prec_relation(int64_t a, int64_t b) {
    // Recomputed from valuations only: factor b, compare supports and valuations.
    int64_t ra = a, rb = b;
    bool strict_everywhere = true;
    for (int64_t p = 2; p * p <= rb; ++p) {
        if (rb % p == 0) {
            int eb = 0, ea = 0;
            while (rb % p == 0) { rb /= p; ++eb; }
            while (ra % p == 0) { ra /= p; ++ea; }
            if (ea == 0 || ea > eb) return PrecRelation::Neither;
            if (ea == eb) strict_everywhere = false;
        }
    }
    if (rb > 1) {
        int ea = 0;
        while (ra % rb == 0) { ra /= rb; ++ea; }
        if (ea == 0 || ea > 1) return PrecRelation::Neither;
        if (ea == 1) strict_everywhere = false;
    }
    if (ra > 1) return PrecRelation::Neither;  // a has a prime not dividing b
    return strict_everywhere ? PrecRelation::Prec : PrecRelation::PreceqOnly;
}

int64_t mod_inv(int64_t a, int64_t m) {
    if (m < 1) throw PreconditionViolated("modulus must be positive");
    if (m == 1) return 0;
    int64_t r0 = m, r1 = ((a % m) + m) % m;
    int64_t t0 = 0, t1 = 1;
    while (r1 != 0) {
        int64_t q = r0 / r1;
        int64_t r2 = r0 - q * r1;
        int64_t t2 = t0 - q * t1;
        r0 = r1; r1 = r2;
        t0 = t1; t1 = t2;
    }
    if (r0 != 1)
        throw NotInvertible(std::to_string(a) + " not invertible mod " + std::to_string(m));
    return ((t0 % m) + m) % m;
}

mpz_class mod_inv(const mpz_class& a, const mpz_class& m) {
    mpz_class r;
    if (mpz_invert(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()) == 0)
        throw NotInvertible("big integer not invertible");
    return r;
}

int64_t mul_mod(int64_t a, int64_t b, int64_t m) {
    return static_cast<int64_t>(static_cast<__int128>(a) * b % m);
}

int64_t pow_mod(int64_t base, int64_t exp, int64_t m) {
    int64_t r = 1 % m;
    int64_t b = ((base % m) + m) % m;
    while (exp > 0) {
        if (exp & 1) r = mul_mod(r, b, m);
        b = mul_mod(b, b, m);
        exp >>= 1;
    }
    return r;
}

int jacobi(int64_t B, int64_t r) {
    if (r < 1 || r % 2 == 0)
        throw PreconditionViolated("Jacobi symbol needs odd positive r");
    int64_t a = ((B % r) + r) % r;
    int64_t n = r;
    int result = 1;
    while (a != 0) {
        while (a % 2 == 0) {
            a /= 2;
            int64_t nm8 = n % 8;
            if (nm8 == 3 || nm8 == 5) result = -result;
        }
        std::swap(a, n);
        if (a % 4 == 3 && n % 4 == 3) result = -result;
        a %= n;
    }
    return n == 1 ? result : 0;
}

int jacobi(const mpz_class& B, const mpz_class& r) {
    return mpz_jacobi(B.get_mpz_t(), r.get_mpz_t());
}

std::complex<double> epsilon_r(int64_t r) {
    if (r % 2 == 0) throw PreconditionViolated("epsilon_r needs odd r");
    return (((r % 4) + 4) % 4 == 1) ? std::complex<double>{1.0, 0.0}
                                    : std::complex<double>{0.0, 1.0};
}

std::complex<double> unit_root(int64_t num, int64_t den) {
    const double two_pi = 2.0 * std::numbers::pi;
    int64_t n = ((num % den) + den) % den;
    return std::polar(1.0, two_pi * static_cast<double>(n) / static_cast<double>(den));
}

std::complex<double> quad_gauss_closed(int64_t A, int64_t B, int64_t r) {
    if (r < 1 || r % 2 == 0)
        throw PreconditionViolated("quad_gauss_closed needs odd positive r");
    if (std::gcd(((B % r) + r) % r, r) != 1)
        throw BNotCoprime("gcd(B, r) > 1 in quad_gauss_closed");
    if (r == 1) return {1.0, 0.0};
    const int64_t inv4B = mod_inv(mul_mod(4 % r, ((B % r) + r) % r, r), r);
    const int64_t A2 = mul_mod(((A % r) + r) % r, ((A % r) + r) % r, r);
    const int64_t phase = (r - mul_mod(inv4B, A2, r)) % r;
    return unit_root(phase, r) * static_cast<double>(jacobi(B, r)) * epsilon_r(r) *
           std::sqrt(static_cast<double>(r));
}

std::complex<double> quad_gauss_brute(int64_t A, int64_t B, int64_t r) {
    if (r < 1 || r % 2 == 0)
        throw PreconditionViolated("quad_gauss_brute needs odd positive r");
    KahanSum acc;
    for (int64_t u = 0; u < r; ++u) {
        int64_t arg = (mul_mod(A, u, r) + mul_mod(B, mul_mod(u, u, r), r)) % r;
        acc.add(unit_root(arg, r));
    }
    return acc.value();
}

double theta_q(const FactoredModulus& q) {
    double s = 0.0;
    for (auto [p, e] : q.factors)
        s += std::log(static_cast<double>(p)) / static_cast<double>(p - 1);
    return s;
}

int64_t sigma0(int64_t n) {
    if (n < 1) throw PreconditionViolated("sigma0 needs n >= 1");
    int64_t count = 1;
    for (int64_t p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            int e = 0;
            while (n % p == 0) { n /= p; ++e; }
            count *= (e + 1);
        }
    }
    if (n > 1) count *= 2;
    return count;
}

std::vector<int64_t> divisors(int64_t n) {
    if (n < 1) throw PreconditionViolated("divisors needs n >= 1");
    std::vector<int64_t> ds;
    for (int64_t d = 1; d * d <= n; ++d) {
        if (n % d == 0) {
            ds.push_back(d);
            if (d != n / d) ds.push_back(n / d);
        }
    }
    std::sort(ds.begin(), ds.end());
    return ds;
}

} // namespace coset
