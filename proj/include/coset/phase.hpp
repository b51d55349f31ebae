#ifndef COSET_PHASE_HPP
#define COSET_PHASE_HPP

#include <compare>
#include <complex>
#include <cstdint>
#include <numeric>

#include "coset/errors.hpp"

namespace coset {

/// A rational number modulo 1, representing the root of unity e(num/den)
/// exactly.  Always normalized: 0 <= num < den, gcd(num, den) = 1
/// (num = 0 forces den = 1).  This is the value domain of Dirichlet
/// characters; doubles enter only at the final summation.
struct ExactPhase {
    std::int64_t num = 0;
    std::int64_t den = 1;

    static ExactPhase of(std::int64_t n, std::int64_t d) {
        if (d <= 0) throw PreconditionViolated("ExactPhase denominator must be positive");
        n = ((n % d) + d) % d;
        const std::int64_t g = std::gcd(n, d);
        ExactPhase p;
        p.num = n / g;
        p.den = d / g;
        return p;
    }

    static ExactPhase zero() { return {}; }

    ExactPhase operator+(const ExactPhase& o) const {
        // num/den + o.num/o.den mod 1; denominators stay bounded by lcm.
        const std::int64_t g = std::gcd(den, o.den);
        const std::int64_t l = den / g * o.den;
        return of(num * (l / den) + o.num * (l / o.den), l);
    }

    ExactPhase operator-() const { return of(-num, den); }
    ExactPhase operator-(const ExactPhase& o) const { return *this + (-o); }

    ExactPhase times(std::int64_t k) const {
        const std::int64_t kk = ((k % den) + den) % den;
        const std::int64_t g = std::gcd(kk, den);
        // (num * kk) mod den without overflow: num, kk < den <= ~2^31 in practice,
        // but guard with 128-bit anyway.
        const std::int64_t prod =
            static_cast<std::int64_t>(static_cast<__int128>(num) * kk % den);
        (void)g;
        return of(prod, den);
    }

    bool operator==(const ExactPhase&) const = default;

    bool is_zero() const { return num == 0; }

    std::complex<double> to_complex() const {
        return std::polar(1.0, 2.0 * 3.141592653589793238462643383279502884 *
                                   static_cast<double>(num) / static_cast<double>(den));
    }
};

} // namespace coset

#endif
