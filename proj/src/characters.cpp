#include "coset/characters.hpp"

#include <algorithm>
#include <numeric>

#include "json.hpp"

namespace coset {

namespace {

// Distinct prime factors of n (n <= ~10^7 here, trial division is fine).
std::vector<int64_t> prime_factors(int64_t n) {
    std::vector<int64_t> ps;
    for (int64_t p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            ps.push_back(p);
            while (n % p == 0) n /= p;
        }
    }
    if (n > 1) ps.push_back(n);
    return ps;
}

int64_t find_generator(int64_t pp, int64_t order) {
    const auto order_primes = prime_factors(order);
    for (int64_t g = 2; g < pp; ++g) {
        if (std::gcd(g, pp) != 1) continue;
        bool ok = true;
        for (int64_t r : order_primes) {
            if (pow_mod(g, order / r, pp) == 1) { ok = false; break; }
        }
        if (ok) return g;
    }
    throw std::logic_error("no generator found for " + std::to_string(pp));
}

} // namespace

std::shared_ptr<const UnitGroup> UnitGroup::build(const FactoredModulus& q) {
    if (q.value % 2 == 0) throw EvenModulus("unit group requires odd modulus");
    if (q.value > kMaxModulus)
        throw ModulusTooLarge("modulus " + std::to_string(q.value) +
                              " exceeds dlog table budget");
    auto g = std::make_shared<UnitGroup>();
    g->modulus_ = q;
    for (auto [p, e] : q.factors) {
        Component c;
        c.prime = p;
        c.exponent = e;
        c.prime_power = 1;
        for (int i = 0; i < e; ++i) c.prime_power *= p;
        c.order = c.prime_power / p * (p - 1);
        c.generator = find_generator(c.prime_power, c.order);
        c.dlog.assign(static_cast<size_t>(c.prime_power), kNonUnit);
        int64_t x = 1;
        for (int64_t k = 0; k < c.order; ++k) {
            c.dlog[static_cast<size_t>(x)] = static_cast<std::uint32_t>(k);
            x = mul_mod(x, c.generator, c.prime_power);
        }
        g->order_lcm_ = std::lcm(g->order_lcm_, c.order);
        g->components_.push_back(std::move(c));
    }
    return g;
}

bool UnitGroup::is_unit(int64_t m) const {
    for (const auto& c : components_) {
        const int64_t r = ((m % c.prime_power) + c.prime_power) % c.prime_power;
        if (c.dlog[static_cast<size_t>(r)] == kNonUnit) return false;
    }
    return true;
}

std::shared_ptr<const UnitGroup> unit_group(const FactoredModulus& q) {
    return UnitGroup::build(q);
}

DirichletCharacter::DirichletCharacter(std::shared_ptr<const UnitGroup> group,
                                       std::vector<int64_t> exponents)
    : group_(std::move(group)), exponents_(std::move(exponents)) {
    const auto& cs = group_->components();
    if (exponents_.size() != cs.size())
        throw PreconditionViolated("exponent vector length mismatch");
    for (size_t i = 0; i < cs.size(); ++i)
        exponents_[i] = ((exponents_[i] % cs[i].order) + cs[i].order) % cs[i].order;
}

std::optional<ExactPhase> DirichletCharacter::eval_phase(int64_t m) const {
    ExactPhase phase;
    const auto& cs = group_->components();
    for (size_t i = 0; i < cs.size(); ++i) {
        const auto& c = cs[i];
        const int64_t r = ((m % c.prime_power) + c.prime_power) % c.prime_power;
        const std::uint32_t lg = c.dlog[static_cast<size_t>(r)];
        if (lg == UnitGroup::kNonUnit) return std::nullopt;
        phase = phase + ExactPhase::of(exponents_[i], c.order).times(lg);
    }
    return phase;
}

std::complex<double> DirichletCharacter::eval(int64_t m) const {
    const auto p = eval_phase(m);
    return p ? p->to_complex() : std::complex<double>{0.0, 0.0};
}

int64_t DirichletCharacter::phase_numerator(int64_t m) const {
    const int64_t L = group_->order_lcm();
    int64_t acc = 0;
    const auto& cs = group_->components();
    for (size_t i = 0; i < cs.size(); ++i) {
        const auto& c = cs[i];
        const int64_t r = ((m % c.prime_power) + c.prime_power) % c.prime_power;
        const std::uint32_t lg = c.dlog[static_cast<size_t>(r)];
        if (lg == UnitGroup::kNonUnit) return -1;
        const int64_t term = static_cast<int64_t>(
            static_cast<__int128>(exponents_[i]) * lg % c.order);
        acc = (acc + static_cast<int64_t>(
                         static_cast<__int128>(term) * (L / c.order) % L)) % L;
    }
    return acc;
}

bool DirichletCharacter::is_even() const {
    const auto p = eval_phase(group_->value() - 1);
    return p && p->is_zero();
}

bool DirichletCharacter::is_principal() const {
    return std::all_of(exponents_.begin(), exponents_.end(),
                       [](int64_t e) { return e == 0; });
}

int64_t DirichletCharacter::conductor() const {
    // Per component (Z/p^e Z)* cyclic of order n = p^{e-1}(p-1): a character of
    // order o > 1 has p-part of conductor p^{nu_p(o)+1}; o = 1 contributes 1.
    int64_t cond = 1;
    const auto& cs = group_->components();
    for (size_t i = 0; i < cs.size(); ++i) {
        const auto& c = cs[i];
        const int64_t o = c.order / std::gcd(c.order, exponents_[i]);
        if (o == 1) continue;
        int64_t ppart = c.prime;
        int64_t rest = o;
        while (rest % c.prime == 0) { rest /= c.prime; ppart *= c.prime; }
        cond *= ppart;
    }
    return cond;
}

int64_t DirichletCharacter::order() const {
    int64_t o = 1;
    const auto& cs = group_->components();
    for (size_t i = 0; i < cs.size(); ++i)
        o = std::lcm(o, cs[i].order / std::gcd(cs[i].order, exponents_[i]));
    return o;
}

DirichletCharacter DirichletCharacter::conjugate() const {
    std::vector<int64_t> neg(exponents_.size());
    for (size_t i = 0; i < neg.size(); ++i) neg[i] = -exponents_[i];
    return DirichletCharacter(group_, std::move(neg));
}

DirichletCharacter DirichletCharacter::operator*(const DirichletCharacter& other) const {
    if (group_->value() != other.group_->value())
        throw PreconditionViolated("character product requires matching moduli");
    std::vector<int64_t> sum(exponents_.size());
    for (size_t i = 0; i < sum.size(); ++i) sum[i] = exponents_[i] + other.exponents_[i];
    return DirichletCharacter(group_, std::move(sum));
}

std::vector<DirichletCharacter> enumerate_characters(
    const std::shared_ptr<const UnitGroup>& group, Parity parity) {
    const auto& cs = group->components();
    std::vector<DirichletCharacter> out;
    std::vector<int64_t> exps(cs.size(), 0);
    for (;;) {
        DirichletCharacter chi(group, exps);
        if (parity == Parity::All || chi.is_even()) out.push_back(std::move(chi));
        // odometer, last component fastest
        int i = static_cast<int>(cs.size()) - 1;
        for (; i >= 0; --i) {
            if (++exps[static_cast<size_t>(i)] < cs[static_cast<size_t>(i)].order) break;
            exps[static_cast<size_t>(i)] = 0;
        }
        if (i < 0) break;
    }
    return out;
}

namespace {

// CRT lift of component i's generator to a residue mod q (1 mod the others).
int64_t component_generator_mod_q(const UnitGroup& g, size_t i) {
    const int64_t q = g.value();
    const auto& cs = g.components();
    int64_t x = 0;
    // Solve x = gen_i mod pp_i, x = 1 mod pp_j (j != i).
    const int64_t ppi = cs[i].prime_power;
    const int64_t rest = q / ppi;
    // x = gen_i * rest * inv(rest, ppi) + 1 * ppi * inv(ppi, rest)
    x = mul_mod(mul_mod(cs[i].generator % q, rest % q, q),
                mod_inv(rest % ppi, ppi) % q, q);
    if (rest > 1)
        x = (x + mul_mod(ppi % q, mod_inv(ppi % rest, rest) % q, q)) % q;
    return x;
}

} // namespace

DirichletCharacter lift_character(const DirichletCharacter& chi,
                                  const std::shared_ptr<const UnitGroup>& to) {
    const int64_t d = chi.modulus();
    const int64_t q = to->value();
    if (q % d != 0)
        throw LiftMismatch("cannot lift mod " + std::to_string(d) + " to mod " +
                           std::to_string(q));
    const auto& cs = to->components();
    std::vector<int64_t> exps(cs.size(), 0);
    for (size_t i = 0; i < cs.size(); ++i) {
        const int64_t gi = component_generator_mod_q(*to, i);
        const auto phase = chi.eval_phase(gi % d);
        if (!phase)
            throw std::logic_error("unit mod q not a unit mod d | q");
        if (cs[i].order % phase->den != 0)
            throw std::logic_error("lifted phase order does not divide component order");
        exps[i] = static_cast<int64_t>(
            static_cast<__int128>(phase->num) * (cs[i].order / phase->den) % cs[i].order);
    }
    return DirichletCharacter(to, std::move(exps));
}

DirichletCharacter coset_character(const DirichletCharacter& chi,
                                   const DirichletCharacter& psi) {
    return lift_character(chi, psi.group_ptr()) * psi;
}

DirichletCharacter primitivize(const DirichletCharacter& chi) {
    const int64_t cond = chi.conductor();
    if (cond == chi.modulus()) return chi;
    auto small = unit_group(FactoredModulus::from_value(cond));
    const int64_t q = chi.modulus();
    const auto& cs = small->components();
    std::vector<int64_t> exps(cs.size(), 0);
    for (size_t i = 0; i < cs.size(); ++i) {
        int64_t gi = component_generator_mod_q(*small, i);
        // Lift gi mod cond to a residue coprime to q.
        int64_t lifted = gi;
        while (std::gcd(lifted, q) != 1) lifted += cond;
        const auto phase = chi.eval_phase(lifted);
        if (!phase || cs[i].order % phase->den != 0)
            throw std::logic_error("primitivize: inconsistent phase");
        exps[i] = static_cast<int64_t>(
            static_cast<__int128>(phase->num) * (cs[i].order / phase->den) % cs[i].order);
    }
    return DirichletCharacter(std::move(small), std::move(exps));
}

std::string DirichletCharacter::to_json() const {
    nlohmann::json j;
    j["modulus"] = group_->value();
    j["exponents"] = exponents_;
    return j.dump();
}

DirichletCharacter DirichletCharacter::from_json(const std::string& json) {
    const auto j = nlohmann::json::parse(json);
    auto group = unit_group(FactoredModulus::from_value(j.at("modulus").get<int64_t>()));
    return DirichletCharacter(std::move(group),
                              j.at("exponents").get<std::vector<int64_t>>());
}

} // namespace coset
