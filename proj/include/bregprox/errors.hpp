#pragma once

#include <stdexcept>
#include <string>

namespace bregprox {

/// Caller broke a precondition (dimension mismatch, bad parameter).
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A point lies outside the domain where an oracle is defined.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DegenerateInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A convergence-theory hypothesis (e.g. sigma >= eta / gamma) does not hold.
class HypothesisViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ConfigurationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace bregprox
