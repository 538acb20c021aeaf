#pragma once

#include <stdexcept>
#include <string>

namespace obsfn {

/// Malformed or inconsistent input data (bad file, unknown element, ...).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An operation was called on an argument outside its documented domain.
class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A size cap would be exceeded.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numeric routine failed to converge or lost too much accuracy.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Evaluation outside the domain of a partial function.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Internal cross-check failed; indicates a tolerance breach or a bug.
class ConsistencyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An axiom or theorem check failed; carries a JSON witness for reporting.
class CheckFailure : public std::runtime_error {
 public:
  CheckFailure(const std::string& what, std::string witness_json)
      : std::runtime_error(what), witness_(std::move(witness_json)) {}

  const std::string& witness() const noexcept { return witness_; }

 private:
  std::string witness_;
};

}  // namespace obsfn
