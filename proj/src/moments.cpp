#include "coset/moments.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <numeric>
#include <sstream>

#include "json.hpp"

namespace coset {

namespace {

constexpr double kPi = std::numbers::pi;

std::string fmt_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

std::string join_index(const std::vector<int64_t>& v) {
    std::string s;
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) s += ';';
        s += std::to_string(v[i]);
    }
    return s;
}

} // namespace

std::string to_string(Method m) { return m == Method::Hurwitz ? "hurwitz" : "afe"; }

std::string to_string(Regime r) {
    switch (r) {
        case Regime::Thm1: return "Thm1";
        case Regime::Thm2: return "Thm2";
        default: return "Thm3-only";
    }
}

std::shared_ptr<const LCentralEvaluator> MomentContext::l_evaluator(
    const std::shared_ptr<const UnitGroup>& g) {
    std::lock_guard<std::mutex> lock(mutex_);
    auto& slot = l_evaluators_[g->value()];
    if (!slot) slot = std::make_shared<LCentralEvaluator>(g);
    return slot;
}

std::shared_ptr<const AfeTable> MomentContext::afe_table(
    const std::shared_ptr<const UnitGroup>& g, double cutoff_t) {
    std::lock_guard<std::mutex> lock(mutex_);
    if (!afe_ || afe_->group().value() != g->value() || afe_->cutoff() < cutoff_t)
        afe_ = std::make_shared<AfeTable>(g, *v_, cutoff_t);
    return afe_;
}

double coset_moment(const DirichletCharacter& psi, int64_t d, Parity parity,
                    Method method, MomentContext& ctx) {
    const int64_t q = psi.modulus();
    if (q % d != 0 || d < 1 || d >= q)
        throw RegimeViolation("coset_moment needs d | q with d < q");
    if (parity == Parity::Even && !prec(d, q))
        throw RegimeViolation("even-parity coset moment needs d strictly below q");
    if (!psi.is_primitive())
        throw RegimeViolation("coset_moment needs primitive psi");

    auto dgroup = unit_group(psi.group().modulus().divisor(d));
    const auto coset = enumerate_characters(dgroup, parity);

    // Per-character values collected in enumeration order, reduced in that
    // fixed order: byte-reproducible for a given config.
    std::vector<double> terms;
    terms.reserve(coset.size());
    for (const auto& chi : coset) {
        const auto prod = coset_character(chi, psi);
        double term;
        if (prod.is_primitive()) {
            if (method == Method::Hurwitz) {
                const auto l = ctx.l_evaluator(psi.group_ptr())->l_central(prod);
                term = std::norm(l);
            } else {
                const auto afe = ctx.afe_table(psi.group_ptr(),
                                               60.0 * static_cast<double>(q));
                term = afe_moment_term(prod, *afe);
            }
        } else {
            // Possible only in the Thm3-only regime: evaluate the inducing
            // primitive character at its own conductor.
            const auto prim = primitivize(prod);
            if (prim.is_principal())
                throw RegimeViolation("principal coset member encountered");
            const auto l = ctx.l_evaluator(prim.group_ptr())->l_central(prim);
            term = std::norm(l);
        }
        terms.push_back(term);
    }
    KahanSum acc;
    for (double t : terms) acc.add({t, 0.0});
    return acc.value().real();
}

double gambit_rhs(const DirichletCharacter& psi, int64_t d, double truncation_t,
                  const VTable& v) {
    const int64_t q = psi.modulus();
    if (!prec(d, q)) throw RegimeViolation("gambit_rhs needs d strictly below q");
    if (!psi.is_primitive() || !psi.is_even())
        throw RegimeViolation("gambit_rhs needs primitive even psi");
    const int64_t big_l = psi.group().order_lcm();
    const auto big_t = static_cast<int64_t>(truncation_t);
    const double qd = static_cast<double>(q);

    KahanSum acc;
    for (int64_t m = 1; m <= big_t; ++m) {
        const int64_t pm = psi.phase_numerator(m);
        if (pm < 0) continue;
        const int64_t m_mod_d = m % d;
        for (int64_t n = 1; n * m <= big_t; ++n) {
            const int64_t nd = n % d;
            const bool plus = (nd == m_mod_d);
            const bool minus = ((nd + m_mod_d) % d == 0);
            if (!plus && !minus) continue;
            const int64_t pn = psi.phase_numerator(n);
            if (pn < 0) continue;
            const double mn = static_cast<double>(m) * static_cast<double>(n);
            const double w = v(mn / qd);
            if (w == 0.0) {
                if (mn / qd > v.x_max()) break;
                continue;
            }
            const double count = (plus ? 1.0 : 0.0) + (minus ? 1.0 : 0.0);
            const int64_t diff = ((pm - pn) % big_l + big_l) % big_l;
            acc.add(unit_root(diff, big_l) * (count * w / std::sqrt(mn)));
        }
    }
    return static_cast<double>(psi.group().modulus().divisor(d).phi) *
           acc.value().real();
}

double main_D(const FactoredModulus& q, int64_t d) {
    if (q.value % d != 0) throw PreconditionViolated("main_D needs d | q");
    const double phid = static_cast<double>(q.divisor(d).phi);
    const double phiq_over_q = static_cast<double>(q.phi) / static_cast<double>(q.value);
    const double bracket = std::log(static_cast<double>(q.value)) + 2.0 * euler_gamma() +
                           digamma_quarter() - std::log(kPi) + 2.0 * theta_q(q);
    return 0.5 * phid * phiq_over_q * bracket;
}

DiagCheck diag_lemma_check(const FactoredModulus& q, const VTable& v) {
    const int64_t qn = q.value;
    const auto n_max = static_cast<int64_t>(
        std::ceil(std::sqrt(v.x_max() * static_cast<double>(qn))));
    KahanSum acc;
    for (int64_t n = 1; n <= n_max; ++n) {
        if (std::gcd(n, qn) != 1) continue;
        const double x = static_cast<double>(n) * static_cast<double>(n) /
                         static_cast<double>(qn);
        acc.add({v(x) / static_cast<double>(n), 0.0});
    }
    // gamma'/gamma(1/2) = -log(pi)/2 + psi0(1/4)/2.
    const double gamma_log_deriv = -0.5 * std::log(kPi) + 0.5 * digamma_quarter();
    const double rhs = static_cast<double>(q.phi) / static_cast<double>(qn) *
                       (0.5 * std::log(static_cast<double>(qn)) + euler_gamma() +
                        gamma_log_deriv + theta_q(q));
    return {acc.value().real(), rhs};
}

double main_A(const PostnikovData& pd) {
    const int64_t q = pd.q();
    const int64_t d = pd.d;
    if (!(prec(d, q) && preceq(q, d * d)))
        throw RegimeViolation("main_A needs d < q <= d^2");
    const double phid = static_cast<double>(
        pd.psi.group().modulus().divisor(d).phi);
    const int64_t abs_a = std::llabs(pd.a_psi);
    return phid / static_cast<double>(d) * std::sqrt(static_cast<double>(q)) *
           static_cast<double>(sigma0(abs_a)) / std::sqrt(static_cast<double>(abs_a));
}

double main_Aprime(const PostnikovData& pd) {
    const int64_t q = pd.q();
    const int64_t d = pd.d;
    if (!(preceq(d * d, q) && preceq(q, d * d * d)) || q % 3 == 0)
        throw RegimeViolation("main_Aprime needs d^2 <= q <= d^3 with (q,3) = 1");
    if (!pd.b_psi)
        throw RegimeViolation("main_Aprime needs b_psi (d | q/d)");
    const int64_t a = pd.a_psi;
    const int64_t b = *pd.b_psi;
    const int64_t abs_b = std::llabs(b);
    // Exact reduction mod q before any floating conversion.
    const int64_t aa = ((a % q) + q) % q;
    const int64_t inv2a = mod_inv(mul_mod(2, aa, q), q);
    const int64_t diff = (((a - b) % q) + q) % q;
    const int64_t arg = mul_mod(inv2a, mul_mod(diff, diff, q), q);
    const double angle = 2.0 * kPi * static_cast<double>(arg) / static_cast<double>(q);
    const double trig = (q % 4 == 1) ? std::cos(angle) : std::sin(angle);
    const double phid = static_cast<double>(pd.psi.group().modulus().divisor(d).phi);
    const int jac = jacobi(mul_mod(2, aa, q), q);
    return static_cast<double>(jac) * phid * static_cast<double>(sigma0(abs_b)) /
           std::sqrt(static_cast<double>(abs_b)) * trig;
}

MomentReport theorem_report(const DirichletCharacter& psi, int64_t d, Method method,
                            MomentContext& ctx) {
    const auto t0 = std::chrono::steady_clock::now();
    const FactoredModulus& qf = psi.group().modulus();
    const int64_t q = qf.value;
    if (q % d != 0) throw RegimeViolation("theorem_report needs d | q");

    MomentReport rep;
    rep.q = q;
    rep.d = d;
    rep.psi_index = psi.exponents();
    rep.method = method;

    const bool thm1 = prec(d, q) && preceq(q, d * d);
    const bool thm2 = preceq(d * d, q) && preceq(q, d * d * d) && q % 3 != 0;
    const double dd = static_cast<double>(d);
    const double qd = static_cast<double>(q);

    if (thm1 || thm2) {
        const auto pd = compute_postnikov(psi, d);
        rep.a_psi = pd.a_psi;
        rep.b_psi = pd.b_psi;
        const int64_t aa = ((pd.a_psi % q) + q) % q;
        rep.jacobi_statement = jacobi(mul_mod(2, aa, q), q);
        const int64_t qdd = q / std::gcd(q, d * d);
        rep.jacobi_derivation =
            qdd >= 1 && qdd % 2 == 1 ? jacobi(((-2 * pd.a_psi) % qdd + qdd) % qdd, qdd) : 0;
        rep.m = coset_moment(psi, d, Parity::Even, method, ctx);
        rep.main_d = main_D(qf, d);
        if (thm1) {
            rep.regime = Regime::Thm1;
            rep.a_or_aprime = main_A(pd);
            rep.predicted_scale = std::pow(qd, -0.125) * dd;
        } else {
            rep.regime = Regime::Thm2;
            rep.a_or_aprime = main_Aprime(pd);
            rep.predicted_scale = std::pow(dd, -0.25) * std::sqrt(qd);
        }
        rep.residual = rep.m - rep.main_d - rep.a_or_aprime;
        rep.ratio = std::abs(rep.residual) / rep.predicted_scale;
    } else {
        rep.regime = Regime::Thm3Only;
        rep.m = coset_moment(psi, d, Parity::All, method, ctx);
        rep.main_d = 0.0;
        rep.a_or_aprime = 0.0;
        rep.predicted_scale = dd + std::sqrt(qd / dd);
        rep.residual = rep.m;
        rep.ratio = rep.m / rep.predicted_scale;
        // a_psi is still well defined (and cheap) when the supports match.
        bool shared = true;
        for (auto [p, e] : qf.factors) shared = shared && (d % p == 0);
        if (shared && d > 1) {
            const auto pd = compute_postnikov(psi, d);
            rep.a_psi = pd.a_psi;
            rep.b_psi = pd.b_psi;
        }
    }
    rep.seconds = std::chrono::duration<double>(
                      std::chrono::steady_clock::now() - t0).count();
    return rep;
}

MomentReport envelope_report(const DirichletCharacter& psi, int64_t d, Method method,
                             MomentContext& ctx) {
    const auto t0 = std::chrono::steady_clock::now();
    const FactoredModulus& qf = psi.group().modulus();
    const int64_t q = qf.value;
    if (q % d != 0) throw RegimeViolation("envelope_report needs d | q");

    MomentReport rep;
    rep.q = q;
    rep.d = d;
    rep.psi_index = psi.exponents();
    rep.method = method;
    rep.regime = Regime::Thm3Only;
    rep.m = coset_moment(psi, d, Parity::All, method, ctx);
    rep.predicted_scale = static_cast<double>(d) +
                          std::sqrt(static_cast<double>(q) / static_cast<double>(d));
    rep.residual = rep.m;
    rep.ratio = rep.m / rep.predicted_scale;
    bool shared = true;
    for (auto [p, e] : qf.factors) shared = shared && (d % p == 0);
    if (shared && d > 1) {
        const auto pd = compute_postnikov(psi, d);
        rep.a_psi = pd.a_psi;
        rep.b_psi = pd.b_psi;
    }
    rep.seconds = std::chrono::duration<double>(
                      std::chrono::steady_clock::now() - t0).count();
    return rep;
}

AprimePhase aprime_phase(const mpz_class& q, const mpz_class& d, const mpz_class& a_psi) {
    AprimePhase out;
    out.q = q;
    out.d = d;
    out.a_psi = a_psi;
    if (q % 2 == 0 || q % 3 == 0)
        throw RegimeViolation("aprime_phase needs odd q with (q,3) = 1");
    const mpz_class d2 = d * d, d3 = d2 * d;
    if (q % d2 != 0 || d3 % q != 0)
        throw RegimeViolation("aprime_phase needs d^2 | q | d^3");

    // Signed reduction of a mod d into (-d/2, d/2).
    mpz_class b = ((a_psi % d) + d) % d;
    if (b * 2 > d) b -= d;
    out.b_psi = b;

    const mpz_class aa = ((a_psi % q) + q) % q;
    const mpz_class inv2a = mod_inv(mpz_class(2 * aa % q), q);
    const mpz_class diff = ((a_psi - b) % q + q) % q;
    out.trig_numerator = inv2a * diff % q * diff % q;
    out.cosine_case = mpz_class(q % 4) == 1;

    // Reduce the fraction exactly, then convert; the angle itself is tiny in
    // the interesting cases and must not round through a huge numerator.
    mpq_class frac(out.trig_numerator, q);
    frac.canonicalize();
    const double x = frac.get_d();
    const double angle = 2.0 * kPi * x;
    out.trig_value = out.cosine_case ? std::cos(angle) : std::sin(angle);

    out.jacobi_2a_q = jacobi(mpz_class(2 * aa % q), q);
    if (mpz_class(abs(b)).fits_slong_p() && b != 0) {
        const int64_t ab = mpz_class(abs(b)).get_si();
        out.sigma0_b = sigma0(ab);
        out.aprime_over_phi_d = static_cast<double>(out.jacobi_2a_q) *
                                static_cast<double>(*out.sigma0_b) /
                                std::sqrt(static_cast<double>(ab)) * out.trig_value;
    }
    return out;
}

std::string MomentReport::to_json() const {
    nlohmann::json j;
    j["q"] = q;
    j["d"] = d;
    j["psi_index"] = psi_index;
    j["a_psi"] = a_psi;
    if (b_psi) j["b_psi"] = *b_psi; else j["b_psi"] = nullptr;
    j["regime"] = to_string(regime);
    j["M"] = m;
    j["D"] = main_d;
    j["A_or_Aprime"] = a_or_aprime;
    j["residual"] = residual;
    j["predicted_scale"] = predicted_scale;
    j["ratio"] = ratio;
    j["jacobi_statement"] = jacobi_statement;
    j["jacobi_derivation"] = jacobi_derivation;
    j["method"] = to_string(method);
    j["seconds"] = seconds;
    return j.dump();
}

std::string MomentReport::csv_header() {
    return "# v1: q,d,psi_index,a_psi,b_psi,regime,M,D,A_or_Aprime,residual,"
           "predicted_scale,ratio,method,seconds";
}

std::string MomentReport::to_csv_row() const {
    std::ostringstream os;
    os << q << ',' << d << ',' << join_index(psi_index) << ',' << a_psi << ','
       << (b_psi ? std::to_string(*b_psi) : std::string())
       << ',' << to_string(regime) << ',' << fmt_double(m) << ',' << fmt_double(main_d)
       << ',' << fmt_double(a_or_aprime) << ',' << fmt_double(residual) << ','
       << fmt_double(predicted_scale) << ',' << fmt_double(ratio) << ','
       << to_string(method) << ',' << fmt_double(seconds);
    return os.str();
}

} // namespace coset
