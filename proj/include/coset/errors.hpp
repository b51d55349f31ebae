#ifndef COSET_ERRORS_HPP
#define COSET_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace coset {

struct NotInvertible : std::domain_error {
    explicit NotInvertible(const std::string& what) : std::domain_error(what) {}
};

struct BNotCoprime : std::domain_error {
    explicit BNotCoprime(const std::string& what) : std::domain_error(what) {}
};

struct EvenModulus : std::invalid_argument {
    explicit EvenModulus(const std::string& what) : std::invalid_argument(what) {}
};

struct ModulusTooLarge : std::invalid_argument {
    explicit ModulusTooLarge(const std::string& what) : std::invalid_argument(what) {}
};

struct PreconditionViolated : std::invalid_argument {
    explicit PreconditionViolated(const std::string& what) : std::invalid_argument(what) {}
};

struct NotPrimitive : std::invalid_argument {
    explicit NotPrimitive(const std::string& what) : std::invalid_argument(what) {}
};

struct VerificationFailed : std::logic_error {
    explicit VerificationFailed(const std::string& what) : std::logic_error(what) {}
};

struct LiftMismatch : std::invalid_argument {
    explicit LiftMismatch(const std::string& what) : std::invalid_argument(what) {}
};

struct RegimeUnsupported : std::invalid_argument {
    explicit RegimeUnsupported(const std::string& what) : std::invalid_argument(what) {}
};

struct RegimeViolation : std::invalid_argument {
    explicit RegimeViolation(const std::string& what) : std::invalid_argument(what) {}
};

struct PrincipalCharacter : std::invalid_argument {
    explicit PrincipalCharacter(const std::string& what) : std::invalid_argument(what) {}
};

struct NotPrimitiveEven : std::invalid_argument {
    explicit NotPrimitiveEven(const std::string& what) : std::invalid_argument(what) {}
};

struct PoleInput : std::domain_error {
    explicit PoleInput(const std::string& what) : std::domain_error(what) {}
};

struct QuadratureNotConverged : std::runtime_error {
    explicit QuadratureNotConverged(const std::string& what) : std::runtime_error(what) {}
};

} // namespace coset

#endif
