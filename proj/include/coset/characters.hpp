#ifndef COSET_CHARACTERS_HPP
#define COSET_CHARACTERS_HPP

#include <complex>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "coset/modarith.hpp"
#include "coset/phase.hpp"

namespace coset {

/// (Z/qZ)* for odd q, decomposed by CRT into cyclic components (Z/p^e Z)*.
/// Each component stores the smallest generator and a full discrete-log
/// table, so character evaluation is a table lookup.  Immutable once built.
class UnitGroup {
public:
    struct Component {
        int64_t prime_power;     // p^e
        int64_t prime;
        int exponent;
        int64_t generator;       // smallest generator of (Z/p^e Z)*
        int64_t order;           // p^{e-1}(p-1)
        std::vector<std::uint32_t> dlog;  // index m -> log_g(m); kNonUnit off units
    };
    static constexpr std::uint32_t kNonUnit = 0xffffffffu;
    static constexpr int64_t kMaxModulus = 10'000'000;

    static std::shared_ptr<const UnitGroup> build(const FactoredModulus& q);

    const FactoredModulus& modulus() const { return modulus_; }
    int64_t value() const { return modulus_.value; }
    int64_t phi() const { return modulus_.phi; }
    const std::vector<Component>& components() const { return components_; }
    // lcm of the component orders (the group exponent).
    int64_t order_lcm() const { return order_lcm_; }

    bool is_unit(int64_t m) const;

private:
    FactoredModulus modulus_;
    std::vector<Component> components_;
    int64_t order_lcm_ = 1;
};

enum class Parity { All, Even };

/// A Dirichlet character mod q, stored as one exponent per cyclic component
/// against the group's fixed generators.  A value type; evaluation is exact.
class DirichletCharacter {
public:
    DirichletCharacter(std::shared_ptr<const UnitGroup> group,
                       std::vector<int64_t> exponents);

    const UnitGroup& group() const { return *group_; }
    std::shared_ptr<const UnitGroup> group_ptr() const { return group_; }
    const std::vector<int64_t>& exponents() const { return exponents_; }
    int64_t modulus() const { return group_->value(); }

    /// Exact phase of chi(m); nullopt when gcd(m, q) > 1 (value 0 in sums).
    std::optional<ExactPhase> eval_phase(int64_t m) const;
    /// chi(m) as a complex number (0 off units).
    std::complex<double> eval(int64_t m) const;

    /// Phase numerator against the common denominator order_lcm(); -1 off units.
    /// The fast path for bulk summation.
    int64_t phase_numerator(int64_t m) const;

    bool is_even() const;
    bool is_principal() const;
    int64_t conductor() const;
    bool is_primitive() const { return conductor() == modulus(); }
    int64_t order() const;

    DirichletCharacter conjugate() const;

    /// chi * other, same group.
    DirichletCharacter operator*(const DirichletCharacter& other) const;

    std::string to_json() const;
    static DirichletCharacter from_json(const std::string& json);

private:
    std::shared_ptr<const UnitGroup> group_;
    std::vector<int64_t> exponents_;
};

std::shared_ptr<const UnitGroup> unit_group(const FactoredModulus& q);

/// All phi(d) characters mod d (or the phi(d)/2 even ones), ordered by
/// exponent vector (last component fastest).  Deterministic.
std::vector<DirichletCharacter> enumerate_characters(
    const std::shared_ptr<const UnitGroup>& group, Parity parity);

/// Lift chi (mod d) to the group mod q, for d | q with matching evaluation
/// on units.  Throws LiftMismatch when d does not divide q.
DirichletCharacter lift_character(const DirichletCharacter& chi,
                                  const std::shared_ptr<const UnitGroup>& to);

/// The coset member chi * psi: chi mod d lifted to q and multiplied by psi.
DirichletCharacter coset_character(const DirichletCharacter& chi,
                                   const DirichletCharacter& psi);

/// Restriction of chi to its conductor (the primitive character inducing it).
DirichletCharacter primitivize(const DirichletCharacter& chi);

} // namespace coset

#endif
