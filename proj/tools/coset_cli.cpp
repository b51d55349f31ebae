#include <algorithm>
#include <atomic>
#include <cinttypes>
#include <functional>
#include <numeric>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "coset/moments.hpp"

using namespace coset;

namespace {

// ---------------------------------------------------------------------------
// Big-integer expression parser for modulus specs like "7^239" or
// "1+2*7^116".  Grammar: expr := term (('+'|'-') term)*;
// term := factor ('*' factor)*; factor := base ('^' uint)?;
// base := uint | '(' expr ')' | '-' factor.
// ---------------------------------------------------------------------------
class ExprParser {
public:
    explicit ExprParser(const std::string& s) : s_(s) {}

    mpz_class parse() {
        auto v = expr();
        skip_ws();
        if (pos_ != s_.size()) fail("trailing characters");
        return v;
    }

private:
    mpz_class expr() {
        auto v = term();
        for (;;) {
            skip_ws();
            if (match('+')) v += term();
            else if (match('-')) v -= term();
            else return v;
        }
    }
    mpz_class term() {
        auto v = factor();
        for (;;) {
            skip_ws();
            if (match('*')) v *= factor();
            else return v;
        }
    }
    mpz_class factor() {
        auto v = base();
        skip_ws();
        if (match('^')) {
            auto e = base();
            if (e < 0 || e > 1000000) fail("exponent out of range");
            mpz_class r;
            mpz_pow_ui(r.get_mpz_t(), v.get_mpz_t(), e.get_ui());
            return r;
        }
        return v;
    }
    mpz_class base() {
        skip_ws();
        if (match('(')) {
            auto v = expr();
            skip_ws();
            if (!match(')')) fail("expected ')'");
            return v;
        }
        if (match('-')) return -factor();
        size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])))
            ++pos_;
        if (pos_ == start) fail("expected a number");
        return mpz_class(s_.substr(start, pos_ - start));
    }
    bool match(char c) {
        if (pos_ < s_.size() && s_[pos_] == c) { ++pos_; return true; }
        return false;
    }
    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_])))
            ++pos_;
    }
    [[noreturn]] void fail(const std::string& why) {
        throw CLI::ValidationError("expression '" + s_ + "': " + why);
    }

    std::string s_;
    size_t pos_ = 0;
};

mpz_class parse_expr(const std::string& s) { return ExprParser(s).parse(); }

int64_t parse_small(const std::string& s, const char* what) {
    mpz_class v = parse_expr(s);
    if (!v.fits_slong_p() || v <= 0)
        throw CLI::ValidationError(std::string(what) + " out of range: " + s);
    return v.get_si();
}

constexpr int64_t kMaxLValueModulus = 200'000;

int thread_count(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("COSET_MOMENT_THREADS")) {
        int n = std::atoi(env);
        if (n > 0) return n;
    }
    return 1;
}

// Ordered parallel map: results land at their job index, output stays
// deterministic regardless of scheduling.
template <typename Job>
void run_jobs(const std::vector<Job>& jobs, int threads) {
    std::atomic<size_t> next{0};
    auto worker = [&] {
        for (;;) {
            size_t i = next.fetch_add(1);
            if (i >= jobs.size()) return;
            jobs[i]();
        }
    };
    if (threads <= 1 || jobs.size() <= 1) { worker(); return; }
    std::vector<std::thread> pool;
    int n = std::min<int>(threads, static_cast<int>(jobs.size()));
    pool.reserve(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
}

std::ostream& open_output(const std::string& path, std::ofstream& file) {
    if (path.empty()) return std::cout;
    file.open(path);
    if (!file) throw CLI::ValidationError("cannot open output file " + path);
    return file;
}

// ---------------------------------------------------------------------------
// psi selection
// ---------------------------------------------------------------------------
struct PsiSelector {
    enum Kind { AllPrimitiveEven, Index, TargetA } kind = AllPrimitiveEven;
    std::vector<int64_t> index;
    int64_t target_a = 1;
};

PsiSelector parse_selector(const std::vector<std::string>& tokens) {
    PsiSelector sel;
    if (tokens.empty() || tokens[0] == "all-primitive-even") return sel;
    auto split_args = [&](const std::string& head) -> std::string {
        auto eq = tokens[0].find('=');
        if (eq != std::string::npos) return tokens[0].substr(eq + 1);
        if (tokens.size() > 1) return tokens[1];
        throw CLI::ValidationError("--psi " + head + " needs a value");
    };
    if (tokens[0].rfind("index", 0) == 0) {
        sel.kind = PsiSelector::Index;
        std::string rest = split_args("index");
        std::replace(rest.begin(), rest.end(), ';', ',');
        std::stringstream ss(rest);
        std::string piece;
        while (std::getline(ss, piece, ','))
            if (!piece.empty()) sel.index.push_back(std::stoll(piece));
        if (sel.index.empty()) throw CLI::ValidationError("--psi index needs exponents");
        return sel;
    }
    if (tokens[0].rfind("target-a", 0) == 0) {
        sel.kind = PsiSelector::TargetA;
        sel.target_a = std::stoll(split_args("target-a"));
        return sel;
    }
    throw CLI::ValidationError("unknown --psi selector '" + tokens[0] + "'");
}

// Scan-sample selection: solve a_psi for every primitive even character
// (cheap), prefer a_psi = 1, then smallest |a_psi|, optionally force one
// case with b_psi != a_psi into the sample.
std::vector<DirichletCharacter> select_scan_psis(
    const std::shared_ptr<const UnitGroup>& g, int64_t d, size_t count,
    bool want_b_neq_a) {
    const auto lq = lq_build(d, g->modulus());
    auto all = enumerate_characters(g, Parity::Even);
    struct Cand { size_t idx; int64_t a; };
    std::vector<Cand> cands;
    for (size_t i = 0; i < all.size(); ++i) {
        if (!all[i].is_primitive()) continue;
        cands.push_back({i, postnikov_solve(all[i], lq)});
    }
    std::stable_sort(cands.begin(), cands.end(), [](const Cand& x, const Cand& y) {
        auto key = [](const Cand& c) {
            return std::pair<int64_t, int64_t>(std::llabs(c.a) == 1 ? 0 : 1,
                                               std::llabs(c.a));
        };
        return key(x) < key(y);
    });
    std::vector<DirichletCharacter> out;
    std::vector<int64_t> seen_a;
    auto b_of = [&](int64_t a) {
        int64_t b = ((a % d) + d) % d;
        if (b > d / 2) b -= d;
        return b;
    };
    bool have_b_neq_a = false;
    for (const auto& c : cands) {
        if (out.size() >= count) break;
        if (std::find(seen_a.begin(), seen_a.end(), c.a) != seen_a.end()) continue;
        out.push_back(all[c.idx]);
        seen_a.push_back(c.a);
        if (b_of(c.a) != c.a) have_b_neq_a = true;
    }
    if (want_b_neq_a && !have_b_neq_a) {
        for (const auto& c : cands) {
            if (b_of(c.a) != c.a) {
                out.push_back(all[c.idx]);
                break;
            }
        }
    }
    return out;
}

void write_reports(std::vector<MomentReport> reports, const std::string& format,
                   std::ostream& os) {
    if (format == "json") {
        os << "[\n";
        for (size_t i = 0; i < reports.size(); ++i)
            os << reports[i].to_json() << (i + 1 < reports.size() ? ",\n" : "\n");
        os << "]\n";
        return;
    }
    os << MomentReport::csv_header() << "\n";
    for (auto& r : reports) {
        r.seconds = 0;  // timing is run-dependent; CSV output must be reproducible
        os << r.to_csv_row() << "\n";
    }
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------
struct Tally {
    int pass = 0, fail = 0;
    void note(bool ok, const std::string& label, double worst = -1) {
        (ok ? pass : fail)++;
        std::printf("%s %s\n", ok ? "pass" : "FAIL", label.c_str());
        (void)worst;
    }
    int finish(const char* scope) const {
        std::printf("%s: %d pass, %d fail\n", scope, pass, fail);
        return fail == 0 ? 0 : 1;
    }
};

int verify_postnikov(int64_t q, int64_t d) {
    auto g = unit_group(FactoredModulus::from_value(q));
    const auto lq = lq_build(d, g->modulus());
    Tally t;
    for (const auto& psi : enumerate_characters(g, Parity::Even)) {
        if (!psi.is_primitive()) continue;
        std::ostringstream label;
        label << "postnikov q=" << q << " d=" << d << " psi=[";
        for (size_t i = 0; i < psi.exponents().size(); ++i)
            label << (i ? ";" : "") << psi.exponents()[i];
        label << "]";
        try {
            auto pd = compute_postnikov(psi, d, &lq);
            label << " a=" << pd.a_psi;
            t.note(pd.verified, label.str());
        } catch (const VerificationFailed& e) {
            t.note(false, label.str() + " (" + e.what() + ")");
        }
    }
    return t.finish("postnikov");
}

int verify_gauss(int64_t r_max) {
    std::mt19937 rng(12345);
    Tally t;
    for (int64_t r = 3; r <= r_max; r += 2) {
        double worst = 0;
        std::uniform_int_distribution<int64_t> dist(0, r - 1);
        for (int trial = 0; trial < 100; ++trial) {
            int64_t a = dist(rng);
            int64_t b = dist(rng);
            if (std::gcd(b, r) != 1) b = 1;
            worst = std::max(worst,
                             std::abs(quad_gauss_closed(a, b, r) - quad_gauss_brute(a, b, r)));
        }
        if (worst > 1e-9 * std::sqrt(static_cast<double>(r)))
            t.note(false, "gauss r=" + std::to_string(r) +
                          " worst=" + std::to_string(worst));
        else
            t.pass++;
    }
    std::printf("pass gauss r<=% " PRId64 " (100 random (A,B) per r)\n", r_max);
    return t.finish("gauss");
}

int verify_sqd(int64_t q, int64_t d) {
    auto g = unit_group(FactoredModulus::from_value(q));
    const auto lq = lq_build(d, g->modulus());
    const int64_t qd = q / d;
    Tally t;
    for (const auto& psi : enumerate_characters(g, Parity::Even)) {
        if (!psi.is_primitive()) continue;
        auto pd = compute_postnikov(psi, d, &lq);
        double worst = 0;
        const int64_t a_mod = ((-pd.a_psi) % qd + qd) % qd;
        for (int64_t k = 0; k <= std::min<int64_t>(qd - 1, 24); ++k)
            worst = std::max(worst, std::abs(s_qd_closed(pd, k) - s_qd_brute(psi, d, k)));
        worst = std::max(worst,
                         std::abs(s_qd_closed(pd, a_mod) - s_qd_brute(psi, d, a_mod)));
        std::ostringstream label;
        label << "sqd q=" << q << " d=" << d << " a=" << pd.a_psi << " worst=" << worst;
        t.note(worst <= 1e-9 * std::sqrt(static_cast<double>(q)), label.str());
    }
    return t.finish("sqd");
}

int verify_afe_oracle(int64_t q_max, int sample_above, int64_t sample_q_max) {
    MomentContext ctx;
    Tally t;
    for (int64_t q = 3; q <= q_max; q += 2) {
        auto g = unit_group(FactoredModulus::from_value(q));
        double worst = 0;
        int n = 0;
        std::shared_ptr<const AfeTable> afe;
        auto ev = ctx.l_evaluator(g);
        for (const auto& chi : enumerate_characters(g, Parity::Even)) {
            if (chi.is_principal() || !chi.is_primitive()) continue;
            if (!afe) afe = ctx.afe_table(g, 60.0 * static_cast<double>(q));
            double lhs = afe_moment_term(chi, *afe);
            double rhs = std::norm(ev->l_central(chi));
            worst = std::max(worst, std::abs(lhs - rhs));
            ++n;
        }
        if (n == 0) continue;
        if (worst > 1e-6)
            t.note(false, "afe-oracle q=" + std::to_string(q) +
                          " worst=" + std::to_string(worst));
        else
            t.pass++;
    }
    std::printf("pass afe-oracle exhaustive q<=%" PRId64 "\n", q_max);
    if (sample_above > 0) {
        std::mt19937 rng(777);
        int taken = 0;
        double worst = 0;
        while (taken < sample_above) {
            std::uniform_int_distribution<int64_t> qdist(q_max + 1, sample_q_max);
            int64_t q = qdist(rng) | 1;
            if (q <= q_max || q > sample_q_max) continue;
            auto g = unit_group(FactoredModulus::from_value(q));
            auto chars = enumerate_characters(g, Parity::Even);
            std::vector<size_t> prim;
            for (size_t i = 0; i < chars.size(); ++i)
                if (!chars[i].is_principal() && chars[i].is_primitive()) prim.push_back(i);
            if (prim.empty()) continue;
            auto afe = ctx.afe_table(g, 60.0 * static_cast<double>(q));
            auto ev = ctx.l_evaluator(g);
            std::uniform_int_distribution<size_t> cdist(0, prim.size() - 1);
            // up to 20 characters per sampled modulus keeps table builds bounded
            for (int j = 0; j < 20 && taken < sample_above; ++j, ++taken) {
                const auto& chi = chars[prim[cdist(rng)]];
                double diff = std::abs(afe_moment_term(chi, *afe) -
                                       std::norm(ev->l_central(chi)));
                worst = std::max(worst, diff);
            }
        }
        bool ok = worst <= 1e-5;
        std::printf("%s afe-oracle sample n=%d worst=%.3g\n",
                    ok ? "pass" : "FAIL", sample_above, worst);
        if (!ok) t.fail++;
        else t.pass++;
    }
    return t.finish("afe-oracle");
}

int verify_gambit(int64_t q, int64_t d) {
    auto g = unit_group(FactoredModulus::from_value(q));
    MomentContext ctx;
    const double big_t = 60.0 * static_cast<double>(q);
    Tally t;
    for (const auto& psi : enumerate_characters(g, Parity::Even)) {
        if (!psi.is_primitive()) continue;
        double lhs = coset_moment(psi, d, Parity::Even, Method::Hurwitz, ctx);
        double rhs = gambit_rhs(psi, d, big_t, ctx.v_table());
        std::ostringstream label;
        label << "gambit q=" << q << " d=" << d << " lhs=" << lhs << " rhs=" << rhs;
        t.note(std::abs(lhs - rhs) <= 1e-5, label.str());
    }
    return t.finish("gambit");
}

int verify_diag(int64_t q) {
    auto r = diag_lemma_check(FactoredModulus::from_value(q));
    double bound = 10.0 / std::sqrt(static_cast<double>(q));
    bool ok = std::abs(r.lhs - r.rhs) <= bound;
    std::printf("%s diag q=%" PRId64 " lhs=%.9f rhs=%.9f |diff|=%.3g bound=%.3g\n",
                ok ? "pass" : "FAIL", q, r.lhs, r.rhs, std::abs(r.lhs - r.rhs), bound);
    return ok ? 0 : 1;
}

int verify_mellin() {
    Tally t;
    for (double s : {-0.35, -0.2, 0.0, 0.15, 0.3}) {
        for (int64_t k : {1, 2, 3, 5, 9}) {
            auto r = mellin_check(s, k);
            std::ostringstream label;
            label << "mellin s=" << s << " k=" << k
                  << " lhs=" << r.lhs << " rhs=" << r.rhs;
            t.note(std::abs(r.lhs - r.rhs) <= 1e-6 * std::max(1.0, std::abs(r.rhs)),
                   label.str());
        }
    }
    return t.finish("mellin");
}

// ---------------------------------------------------------------------------
// moment / scan
// ---------------------------------------------------------------------------
struct MomentOpts {
    std::string q_spec, d_spec;
    int64_t prime = 0;
    int q_exp = 0, d_exp = 0;
    std::vector<std::string> psi_tokens;
    std::string method = "hurwitz";
    std::string out = "csv";
    std::string output_path;
    std::string a_psi_spec;
    bool phase_only = false;
    int threads = 0;
};

std::vector<Method> parse_methods(const std::string& m) {
    if (m == "hurwitz") return {Method::Hurwitz};
    if (m == "afe") return {Method::Afe};
    if (m == "both") return {Method::Hurwitz, Method::Afe};
    throw CLI::ValidationError("--method must be hurwitz, afe or both");
}

int cmd_moment(const MomentOpts& o) {
    mpz_class qz, dz;
    if (!o.q_spec.empty()) qz = parse_expr(o.q_spec);
    else if (o.prime > 0 && o.q_exp > 0)
        mpz_pow_ui(qz.get_mpz_t(), mpz_class(o.prime).get_mpz_t(),
                   static_cast<unsigned long>(o.q_exp));
    else throw CLI::ValidationError("need --q or --prime/--q-exp");
    if (!o.d_spec.empty()) dz = parse_expr(o.d_spec);
    else if (o.prime > 0 && o.d_exp > 0)
        mpz_pow_ui(dz.get_mpz_t(), mpz_class(o.prime).get_mpz_t(),
                   static_cast<unsigned long>(o.d_exp));
    else throw CLI::ValidationError("need --d or --prime/--d-exp");
    if (qz <= 0 || dz <= 0 || qz % 2 == 0)
        throw CLI::ValidationError("modulus must be positive and odd");

    std::ofstream file;
    std::ostream& os = open_output(o.output_path, file);

    if (o.phase_only) {
        if (o.a_psi_spec.empty())
            throw CLI::ValidationError("--phase-only requires --a-psi <expression>");
        auto ph = aprime_phase(qz, dz, parse_expr(o.a_psi_spec));
        nlohmann::ordered_json j;
        j["q"] = ph.q.get_str();
        j["d"] = ph.d.get_str();
        j["a_psi"] = ph.a_psi.get_str();
        j["b_psi"] = ph.b_psi.get_str();
        j["trig_numerator"] = ph.trig_numerator.get_str();
        j["cosine_case"] = ph.cosine_case;
        j["trig_value"] = ph.trig_value;
        j["jacobi_2a_q"] = ph.jacobi_2a_q;
        if (ph.sigma0_b) j["sigma0_b"] = *ph.sigma0_b;
        j["aprime_over_phi_d"] = ph.aprime_over_phi_d;
        os << j.dump(2) << "\n";
        return 0;
    }

    if (!qz.fits_slong_p() || qz > kMaxLValueModulus)
        throw CLI::ValidationError("q > 2e5 requires --phase-only");
    const int64_t q = qz.get_si();
    if (!dz.fits_slong_p() || qz % dz != 0)
        throw CLI::ValidationError("d must divide q");
    const int64_t d = dz.get_si();

    auto g = unit_group(FactoredModulus::from_value(q));
    PsiSelector sel = parse_selector(o.psi_tokens);
    std::vector<DirichletCharacter> psis;
    if (sel.kind == PsiSelector::Index) {
        if (sel.index.size() != g->components().size())
            throw CLI::ValidationError("--psi index needs one exponent per component");
        psis.emplace_back(g, sel.index);
        if (!psis.back().is_primitive())
            throw CLI::ValidationError("selected psi is not primitive");
    } else if (sel.kind == PsiSelector::TargetA) {
        const auto lq = lq_build(d, g->modulus());
        std::optional<DirichletCharacter> best;
        int64_t best_gap = 0;
        for (const auto& psi : enumerate_characters(g, Parity::Even)) {
            if (!psi.is_primitive()) continue;
            int64_t gap = std::llabs(postnikov_solve(psi, lq) - sel.target_a);
            if (!best || gap < best_gap) { best = psi; best_gap = gap; }
            if (gap == 0) break;
        }
        if (!best) throw CLI::ValidationError("no primitive even psi mod q");
        if (best_gap != 0)
            std::fprintf(stderr, "note: no psi with a_psi=%" PRId64
                                 "; using nearest (|a-target|=%" PRId64 ")\n",
                         sel.target_a, best_gap);
        psis.push_back(*best);
    } else {
        for (const auto& psi : enumerate_characters(g, Parity::Even))
            if (psi.is_primitive()) psis.push_back(psi);
    }

    const auto methods = parse_methods(o.method);
    MomentContext ctx;
    std::vector<MomentReport> reports(psis.size() * methods.size());
    std::vector<std::function<void()>> jobs;
    for (size_t i = 0; i < psis.size(); ++i)
        for (size_t m = 0; m < methods.size(); ++m)
            jobs.push_back([&, i, m] {
                reports[i * methods.size() + m] =
                    theorem_report(psis[i], d, methods[m], ctx);
            });
    run_jobs(jobs, thread_count(o.threads));
    write_reports(std::move(reports), o.out, os);
    return 0;
}

struct ScanOpts {
    std::string family;
    std::vector<int64_t> primes;
    std::string q_spec, d_spec;
    std::string method = "hurwitz";
    std::string output_path;
    int threads = 0;
};

int cmd_scan(const ScanOpts& o) {
    std::vector<std::pair<int64_t, int64_t>> grid;  // (q, d)
    bool envelope = false;
    bool want_b_neq_a = false;
    auto pw = [](int64_t p, int e) {
        int64_t r = 1;
        while (e--) r *= p;
        return r;
    };
    if (o.family == "thm1") {
        for (int64_t p : o.primes) grid.emplace_back(pw(p, 4), pw(p, 2));
    } else if (o.family == "thm2") {
        want_b_neq_a = true;
        for (int64_t p : o.primes) grid.emplace_back(pw(p, 5), pw(p, 2));
    } else if (o.family == "thm3") {
        envelope = true;
        if (!o.q_spec.empty()) {
            int64_t q = parse_small(o.q_spec, "--q");
            int64_t d = parse_small(o.d_spec.empty() ? "1" : o.d_spec, "--d");
            grid.emplace_back(q, d);
        } else {
            for (int64_t p : o.primes) {
                grid.emplace_back(pw(p, 5), p);
                grid.emplace_back(pw(p, 5), pw(p, 2));
                grid.emplace_back(pw(p, 4), p);
            }
        }
    } else {
        throw CLI::ValidationError("--family must be thm1, thm2 or thm3");
    }
    if (grid.empty()) throw CLI::ValidationError("empty scan grid (need --primes)");
    for (auto [q, d] : grid)
        if (q > kMaxLValueModulus || q % 2 == 0 || d < 1 || q % d != 0)
            throw CLI::ValidationError("invalid scan pair q=" + std::to_string(q) +
                                       " d=" + std::to_string(d));

    const auto methods = parse_methods(o.method);
    MomentContext ctx;
    std::vector<MomentReport> reports;
    for (auto [q, d] : grid) {
        auto g = unit_group(FactoredModulus::from_value(q));
        auto psis = select_scan_psis(g, d, envelope ? 3 : 5, want_b_neq_a);
        std::vector<MomentReport> rows(psis.size() * methods.size());
        std::vector<std::function<void()>> jobs;
        for (size_t i = 0; i < psis.size(); ++i)
            for (size_t m = 0; m < methods.size(); ++m)
                jobs.push_back([&, i, m, d = d] {
                    rows[i * methods.size() + m] =
                        envelope ? envelope_report(psis[i], d, methods[m], ctx)
                                 : theorem_report(psis[i], d, methods[m], ctx);
                });
        run_jobs(jobs, thread_count(o.threads));
        for (auto& r : rows) reports.push_back(std::move(r));
    }
    std::ofstream file;
    std::ostream& os = open_output(o.output_path, file);
    write_reports(std::move(reports), "csv", os);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"coset: prime-power coset second moments of central L-values"};
    app.require_subcommand(1);

    // verify
    auto* verify = app.add_subcommand("verify", "run a lemma-level check suite");
    std::string scope;
    int64_t vq = 0, vd = 0, r_max = 999, q_max = 2000, sample_q_max = 20000;
    int sample = 0;
    verify->add_option("scope", scope,
                       "postnikov | gauss | sqd | afe-oracle | gambit | diag | mellin")
        ->required();
    verify->add_option("--q", vq, "modulus");
    verify->add_option("--d", vd, "coset modulus");
    verify->add_option("--r-max", r_max, "largest odd Gauss-sum modulus");
    verify->add_option("--q-max", q_max, "largest modulus for exhaustive afe-oracle");
    verify->add_option("--sample", sample, "extra sampled characters above --q-max");
    verify->add_option("--sample-q-max", sample_q_max, "modulus cap for the sample");

    // moment
    auto* moment = app.add_subcommand("moment", "moment report(s) for selected psi");
    MomentOpts mo;
    moment->add_option("--q", mo.q_spec, "modulus (integer expression, e.g. 7^5)");
    moment->add_option("--d", mo.d_spec, "coset modulus (integer expression)");
    moment->add_option("--prime", mo.prime, "prime p for --q-exp/--d-exp");
    moment->add_option("--q-exp", mo.q_exp, "q = p^this");
    moment->add_option("--d-exp", mo.d_exp, "d = p^this");
    moment->add_option("--psi", mo.psi_tokens,
                       "all-primitive-even | index <e1,e2,...> | target-a <a>")
        ->expected(1, 2);
    moment->add_option("--method", mo.method, "hurwitz | afe | both");
    moment->add_option("--out", mo.out, "csv | json");
    moment->add_option("--output", mo.output_path, "output file (default stdout)");
    moment->add_flag("--phase-only", mo.phase_only,
                     "exact A' phase data only; allows arbitrarily large q");
    moment->add_option("--a-psi", mo.a_psi_spec,
                       "a_psi for --phase-only (expression, e.g. 1+2*7^116)");
    moment->add_option("--threads", mo.threads, "worker threads");

    // scan
    auto* scan = app.add_subcommand("scan", "residual-trend table for a family");
    ScanOpts so;
    scan->add_option("--family", so.family, "thm1 | thm2 | thm3")->required();
    scan->add_option("--primes", so.primes, "comma-separated primes")->delimiter(',');
    scan->add_option("--q", so.q_spec, "explicit q for --family thm3");
    scan->add_option("--d", so.d_spec, "explicit d for --family thm3");
    scan->add_option("--method", so.method, "hurwitz | afe | both");
    scan->add_option("--output", so.output_path, "output file (default stdout)");
    scan->add_option("--threads", so.threads, "worker threads");

    try {
        app.parse(argc, argv);
        if (verify->parsed()) {
            if (scope == "postnikov") {
                if (vq <= 0 || vd <= 0) throw CLI::ValidationError("need --q and --d");
                return verify_postnikov(vq, vd);
            }
            if (scope == "gauss") return verify_gauss(r_max);
            if (scope == "sqd") {
                if (vq <= 0 || vd <= 0) throw CLI::ValidationError("need --q and --d");
                return verify_sqd(vq, vd);
            }
            if (scope == "afe-oracle") return verify_afe_oracle(q_max, sample, sample_q_max);
            if (scope == "gambit") {
                if (vq <= 0 || vd <= 0) throw CLI::ValidationError("need --q and --d");
                return verify_gambit(vq, vd);
            }
            if (scope == "diag") {
                if (vq <= 0) throw CLI::ValidationError("need --q");
                return verify_diag(vq);
            }
            if (scope == "mellin") return verify_mellin();
            throw CLI::ValidationError("unknown verify scope '" + scope + "'");
        }
        if (moment->parsed()) return cmd_moment(mo);
        if (scan->parsed()) return cmd_scan(so);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 2;
}
