#ifndef OCLINK_ERRORS_HPP
#define OCLINK_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace oclink {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Input for which the operation has no defined answer (zero sample, no angle).
class DegenerateInput : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Experiment or CLI configuration that violates its invariants.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

namespace detail {

inline void require(bool condition, const std::string& what) {
  if (!condition) throw DomainError(what);
}

}  // namespace detail
}  // namespace oclink

#endif  // OCLINK_ERRORS_HPP
