#include "doctest.h"

#include <cmath>

#include "coset/moments.hpp"

using namespace coset;

namespace {

DirichletCharacter first_primitive_even(const std::shared_ptr<const UnitGroup>& g) {
    for (const auto& psi : enumerate_characters(g, Parity::Even))
        if (psi.is_primitive()) return psi;
    throw std::logic_error("no primitive even character");
}

} // namespace

TEST_CASE("main_D closed form") {
    auto q = FactoredModulus::from_value(625);
    const double pi = std::acos(-1.0);
    double expect = (20.0 / 2) * (500.0 / 625) *
                    (std::log(625.0) + 2 * euler_gamma() + digamma_quarter() -
                     std::log(pi) + 2 * std::log(5.0) / 4);
    CHECK(main_D(q, 25) == doctest::Approx(expect).epsilon(1e-14));
    // scales linearly in phi(d)
    CHECK(main_D(q, 125) == doctest::Approx(expect * 5).epsilon(1e-14));
}

TEST_CASE("main_A and main_Aprime special cases") {
    // a_psi = 1: A = phi(d)/d sqrt(q)
    auto g = unit_group(FactoredModulus::from_value(625));
    const auto lq = lq_build(25, g->modulus());
    for (const auto& psi : enumerate_characters(g, Parity::Even)) {
        if (!psi.is_primitive()) continue;
        auto pd = compute_postnikov(psi, 25, &lq);
        double a = std::abs(static_cast<double>(pd.a_psi));
        double expect = (20.0 / 25) * 25.0 *
                        static_cast<double>(sigma0(pd.a_psi < 0 ? -pd.a_psi : pd.a_psi)) /
                        std::sqrt(a);
        CHECK(main_A(pd) == doctest::Approx(expect).epsilon(1e-12));
    }
    // b = a: trig argument is 0, so A' = (2a/q) phi(d) sigma0(|a|)/sqrt(|a|) * cos0
    auto g2 = unit_group(FactoredModulus::from_value(3125));
    const auto lq2 = lq_build(25, g2->modulus());
    int seen = 0;
    for (const auto& psi : enumerate_characters(g2, Parity::Even)) {
        if (!psi.is_primitive() || seen >= 3) continue;
        auto pd = compute_postnikov(psi, 25, &lq2);
        REQUIRE(pd.b_psi);
        if (*pd.b_psi != pd.a_psi) continue;
        ++seen;
        int64_t aa = ((pd.a_psi % 3125) + 3125) % 3125;
        double expect = jacobi(mul_mod(2, aa, 3125), 3125) * 20.0 *
                        static_cast<double>(sigma0(std::abs(pd.a_psi))) /
                        std::sqrt(std::abs(static_cast<double>(pd.a_psi)));
        CHECK(main_Aprime(pd) == doctest::Approx(expect).epsilon(1e-12));
    }
    CHECK(seen == 3);
}

TEST_CASE("coset moment: d = 1 gives |L(1/2, psi)|^2, conjugation invariance") {
    auto g = unit_group(FactoredModulus::from_value(343));
    auto psi = first_primitive_even(g);
    MomentContext ctx;
    double m = coset_moment(psi, 1, Parity::All, Method::Hurwitz, ctx);
    CHECK(m == doctest::Approx(std::norm(l_central_hurwitz(psi))).epsilon(1e-12));
    // conjugating psi permutes the coset
    double m7 = coset_moment(psi, 7, Parity::Even, Method::Hurwitz, ctx);
    double m7bar = coset_moment(psi.conjugate(), 7, Parity::Even, Method::Hurwitz, ctx);
    CHECK(m7 == doctest::Approx(m7bar).epsilon(1e-10));
    // the two L-value routes agree on the whole coset sum
    double m7afe = coset_moment(psi, 7, Parity::Even, Method::Afe, ctx);
    CHECK(m7 == doctest::Approx(m7afe).epsilon(1e-7));
}

TEST_CASE("coset moment guards") {
    auto g = unit_group(FactoredModulus::from_value(343));
    auto psi = first_primitive_even(g);
    MomentContext ctx;
    CHECK_THROWS_AS(coset_moment(psi, 5, Parity::All, Method::Hurwitz, ctx),
                    RegimeViolation);
    CHECK_THROWS_AS(coset_moment(psi, 343, Parity::Even, Method::Hurwitz, ctx),
                    RegimeViolation);
    DirichletCharacter imprimitive(g, {7});
    CHECK_THROWS_AS(coset_moment(imprimitive, 7, Parity::Even, Method::Hurwitz, ctx),
                    RegimeViolation);
}

TEST_CASE("diag lemma both sides") {
    auto r = diag_lemma_check(FactoredModulus::from_value(625));
    CHECK(r.lhs == doctest::Approx(1.279333946).epsilon(1e-8));   // frozen oracle value
    CHECK(r.rhs == doctest::Approx(1.209887407).epsilon(1e-8));
}

TEST_CASE("theorem_report regime selection") {
    MomentContext ctx;
    auto g625 = unit_group(FactoredModulus::from_value(625));
    auto rep1 = theorem_report(first_primitive_even(g625), 25, Method::Hurwitz, ctx);
    CHECK(rep1.regime == Regime::Thm1);  // q = d^2 satisfies both; Thm1 preferred
    CHECK(rep1.residual == doctest::Approx(rep1.m - rep1.main_d - rep1.a_or_aprime));

    auto g3125 = unit_group(FactoredModulus::from_value(3125));
    auto rep2 = theorem_report(first_primitive_even(g3125), 25, Method::Hurwitz, ctx);
    CHECK(rep2.regime == Regime::Thm2);
    CHECK(rep2.predicted_scale ==
          doctest::Approx(std::pow(25.0, -0.25) * std::sqrt(3125.0)));

    auto rep3 = theorem_report(first_primitive_even(g3125), 5, Method::Hurwitz, ctx);
    CHECK(rep3.regime == Regime::Thm3Only);  // (p^5, p): q exceeds d^3
    auto rep3e = envelope_report(first_primitive_even(g3125), 5, Method::Hurwitz, ctx);
    CHECK(rep3e.regime == Regime::Thm3Only);
    CHECK(rep3e.predicted_scale == doctest::Approx(5.0 + std::sqrt(3125.0 / 5.0)));
}

TEST_CASE("csv row format is stable") {
    MomentContext ctx;
    auto g = unit_group(FactoredModulus::from_value(625));
    auto rep = theorem_report(first_primitive_even(g), 25, Method::Hurwitz, ctx);
    rep.seconds = 0;
    auto row1 = rep.to_csv_row();
    auto row2 = rep.to_csv_row();
    CHECK(row1 == row2);
    CHECK(MomentReport::csv_header().front() == '#');
    CHECK(row1.find("Thm1") != std::string::npos);
}

TEST_CASE("exact A' phase for the giant modulus") {
    mpz_class p7_116, p7_239, p7_232;
    mpz_pow_ui(p7_116.get_mpz_t(), mpz_class(7).get_mpz_t(), 116);
    mpz_pow_ui(p7_239.get_mpz_t(), mpz_class(7).get_mpz_t(), 239);
    mpz_pow_ui(p7_232.get_mpz_t(), mpz_class(7).get_mpz_t(), 232);
    auto ph = aprime_phase(p7_239, p7_116, 1 + 2 * p7_116);
    CHECK(ph.b_psi == 1);
    CHECK(ph.trig_numerator == 2 * p7_232);
    CHECK_FALSE(ph.cosine_case);  // 7^239 = 3 mod 4
    const double pi = std::acos(-1.0);
    double expect = std::sin(4 * pi / std::pow(7.0, 7.0));
    CHECK(ph.trig_value == doctest::Approx(expect).epsilon(1e-15));
}

TEST_CASE("gambit identity at desk scale") {
    auto g = unit_group(FactoredModulus::from_value(243));
    MomentContext ctx;
    int checked = 0;
    for (const auto& psi : enumerate_characters(g, Parity::Even)) {
        if (!psi.is_primitive() || checked >= 3) continue;
        ++checked;
        double lhs = coset_moment(psi, 27, Parity::Even, Method::Hurwitz, ctx);
        double rhs = gambit_rhs(psi, 27, 60.0 * 243.0);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-6));
    }
    CHECK(checked == 3);
}
