#include "coset/postnikov.hpp"

#include <cmath>
#include <numeric>

#include "json.hpp"

namespace coset {

namespace {

void require_shared_support(int64_t d, const FactoredModulus& q) {
    if (d < 1 || d % 2 == 0 || q.value % d != 0)
        throw PreconditionViolated("need odd d | q");
    for (auto [p, e] : q.factors)
        if (d % p != 0)
            throw PreconditionViolated("d and q must share all prime factors");
}

} // namespace

TruncatedLog lq_build(int64_t d, const FactoredModulus& q) {
    require_shared_support(d, q);
    const int64_t qn = q.value;

    // Coefficient k vanishes mod q once k*nu_p(d) - nu_p(k) >= nu_p(q) at every
    // p | q.  nu_p(k) <= log2(k), so the condition holds for all k with
    // k - log2(k) >= max nu_p(q); scan up to that point.
    int max_eq = 0;
    for (auto [p, e] : q.factors) max_eq = std::max(max_eq, nu_p(qn, p));
    int64_t scan_end = 2;
    while (static_cast<double>(scan_end) - std::log2(static_cast<double>(scan_end)) <
           static_cast<double>(max_eq))
        ++scan_end;

    auto vanishes = [&](int64_t k) {
        for (auto [p, e] : q.factors)
            if (static_cast<int64_t>(nu_p(d, p)) * k - nu_p(k, p) < nu_p(qn, p))
                return false;
        return true;
    };
    int64_t trunc = 1;
    for (int64_t k = 1; k <= scan_end; ++k)
        if (!vanishes(k)) trunc = k + 1;

    TruncatedLog lq;
    lq.d = d;
    lq.q = qn;
    lq.truncation_n = static_cast<int>(trunc);
    lq.coeffs.reserve(static_cast<size_t>(trunc));
    const mpz_class dz = d;
    mpz_class dpow = 1;
    for (int64_t k = 1; k <= trunc; ++k) {
        dpow *= dz;
        // Split k = k_q * k' with k_q | q^inf; d^k / k_q is an exact integer.
        int64_t kq = 1, kprime = k;
        for (auto [p, e] : q.factors)
            while (kprime % p == 0) { kprime /= p; kq *= p; }
        mpz_class t = dpow / kq;
        mpz_class tm = t % qn;
        int64_t c = mul_mod(tm.get_si(), mod_inv(kprime, qn), qn);
        if (k % 2 == 0) c = (qn - c) % qn;
        lq.coeffs.push_back(c);
    }
    return lq;
}

int64_t log_gap_bound(int a) {
    int64_t m = 1;
    while (static_cast<double>(m) - static_cast<double>(a) <
           std::log(static_cast<double>(m)))
        ++m;
    return m;
}

int64_t lq_eval(const TruncatedLog& lq, int64_t x) {
    const int64_t q = lq.q;
    const int64_t xr = ((x % q) + q) % q;
    int64_t acc = 0;
    for (auto it = lq.coeffs.rbegin(); it != lq.coeffs.rend(); ++it)
        acc = (mul_mod(acc, xr, q) + *it) % q;
    return mul_mod(acc, xr, q);
}

int64_t postnikov_solve(const DirichletCharacter& psi, const TruncatedLog& lq) {
    const int64_t q = lq.q, d = lq.d, qd = q / d;
    // Solve at x = 1: psi(1+d) = e(t/q), and L_q(1+d) = d*u with u a unit
    // mod q/d, so t/d = a * u (mod q/d).
    const auto r = psi.eval_phase((1 + d) % q);
    if (!r) throw std::logic_error("1+d must be a unit mod q");
    if (q % r->den != 0) throw std::logic_error("phase denominator does not divide q");
    const int64_t t = mul_mod(r->num, q / r->den, q);
    const int64_t l1 = lq_eval(lq, 1);
    if (l1 % d != 0 || t % d != 0)
        throw std::logic_error("L_q(1+d) and the phase must be multiples of d");
    const int64_t u = (l1 / d) % qd;
    int64_t a = mul_mod((t / d) % qd, mod_inv(u, qd), qd);
    if (a > qd / 2) a -= qd;
    return a;
}

PostnikovData compute_postnikov(const DirichletCharacter& psi, int64_t d,
                                const TruncatedLog* lq_in) {
    const FactoredModulus& qf = psi.group().modulus();
    const int64_t q = qf.value;
    require_shared_support(d, qf);
    if (!psi.is_primitive())
        throw NotPrimitive("compute_postnikov requires a primitive character");

    TruncatedLog local;
    if (!lq_in) { local = lq_build(d, qf); lq_in = &local; }
    const TruncatedLog& lq = *lq_in;
    if (lq.d != d || lq.q != q)
        throw PreconditionViolated("TruncatedLog built for different (d, q)");

    const int64_t qd = q / d;
    const int64_t a = postnikov_solve(psi, lq);
    const int64_t au = ((a % qd) + qd) % qd;

    // Exhaustive certificate: exact equality of psi(1+dx) and e_q(a L(x)).
    const int64_t big_l = psi.group().order_lcm();
    for (int64_t x = 0; x < qd; ++x) {
        const int64_t lhs_num = psi.phase_numerator((1 + mul_mod(d, x, q)) % q);
        if (lhs_num < 0) throw std::logic_error("1+dx must be a unit mod q");
        const int64_t rhs_num = mul_mod(au, lq_eval(lq, x), q);
        // lhs_num / big_l == rhs_num / q, both in [0, 1)
        if (static_cast<__int128>(lhs_num) * q != static_cast<__int128>(rhs_num) * big_l)
            throw VerificationFailed("Postnikov identity failed at x = " +
                                     std::to_string(x));
    }

    if (std::gcd(au, qd) != 1)
        throw VerificationFailed("a_psi not coprime to q/d for primitive psi");

    PostnikovData data{psi, d, a, std::nullopt, true};
    if (qd % d == 0) {
        int64_t b = ((a % d) + d) % d;
        if (b > d / 2) b -= d;
        data.b_psi = b;
    }
    return data;
}

std::complex<double> s_qd_brute(const DirichletCharacter& psi, int64_t d, int64_t k) {
    const FactoredModulus& qf = psi.group().modulus();
    require_shared_support(d, qf);
    const int64_t q = qf.value;
    const int64_t qd = q / d;
    const int64_t big_l = psi.group().order_lcm();
    const int64_t kr = ((k % q) + q) % q;
    KahanSum acc;
    for (int64_t u = 0; u < qd; ++u) {
        const int64_t num = psi.phase_numerator((1 + mul_mod(d, u, q)) % q);
        const int64_t e = mul_mod(mul_mod(d, kr, q), u, q);
        acc.add(unit_root(num, big_l) * unit_root(e, q));
    }
    return acc.value();
}

std::complex<double> s_qd_closed(const PostnikovData& data, int64_t k) {
    const int64_t q = data.q();
    const int64_t d = data.d;
    const int64_t a = data.a_psi;
    const int64_t qd = q / d;

    if ((d * d) % q == 0) {
        // Regime A: q | d^2.
        const int64_t res = (((k + a) % qd) + qd) % qd;
        return res == 0 ? std::complex<double>{static_cast<double>(qd), 0.0}
                        : std::complex<double>{0.0, 0.0};
    }
    if (q % (d * d) == 0 && (d * d * d) % q == 0 && q % 3 != 0) {
        // Regime B: d^2 | q | d^3, (q,3) = 1.
        if ((((k + a) % d) + d) % d != 0) return {0.0, 0.0};
        const int64_t aa = ((a % q) + q) % q;
        const int64_t inv2a = mod_inv(mul_mod(2, aa, q), q);
        const int64_t ka = (((k + a) % q) + q) % q;
        const int64_t arg = mul_mod(inv2a, mul_mod(ka, ka, q), q);
        const int64_t m2a = ((-2 * a) % q + q) % q;
        const int j = jacobi(m2a, q / (d * d));
        return epsilon_r(q) * std::sqrt(static_cast<double>(q)) *
               unit_root(arg, q) * static_cast<double>(j);
    }
    throw RegimeUnsupported("s_qd_closed: neither q | d^2 nor (d^2 | q | d^3, (q,3)=1)");
}

std::complex<double> hb_sum_brute(const DirichletCharacter& chi, int64_t h, int64_t n) {
    const int64_t q = chi.modulus();
    const int64_t big_l = chi.group().order_lcm();
    const int64_t hr = ((h % q) + q) % q;
    const int64_t nr = ((n % q) + q) % q;
    KahanSum acc;
    for (int64_t m = 0; m < q; ++m) {
        const int64_t p1 = chi.phase_numerator((m + hr) % q);
        if (p1 < 0) continue;
        const int64_t p2 = chi.phase_numerator(m);
        if (p2 < 0) continue;
        const int64_t diff = ((p1 - p2) % big_l + big_l) % big_l;
        acc.add(unit_root(diff, big_l) * unit_root(mul_mod(m, nr, q), q));
    }
    return acc.value();
}

std::string PostnikovData::to_json() const {
    nlohmann::json j;
    j["q"] = q();
    j["d"] = d;
    j["psi_exponents"] = psi.exponents();
    j["a_psi"] = a_psi;
    if (b_psi) j["b_psi"] = *b_psi; else j["b_psi"] = nullptr;
    j["verified"] = verified;
    return j.dump();
}

} // namespace coset
