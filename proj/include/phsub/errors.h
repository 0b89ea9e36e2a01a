#ifndef PHSUB_ERRORS_H
#define PHSUB_ERRORS_H

#include <stdexcept>
#include <string>

namespace phsub {

/// A parameter lies outside its physical domain (λ ≤ 0, η or ε outside (0,1], bad grid...).
struct InvalidParameter : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// The heralded (accepted) state does not exist because the click probability is zero.
struct UndefinedConditionalState : std::domain_error {
    using std::domain_error::domain_error;
};

/// A function was evaluated outside its mathematical domain.
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

/// The requested quantity has no implementation for this state family.
struct UnsupportedFamily : std::logic_error {
    using std::logic_error::logic_error;
};

/// A series or quadrature did not reach its error target.
struct NonConvergence : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace phsub

#endif
