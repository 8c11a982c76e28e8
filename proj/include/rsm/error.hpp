#pragma once

#include <stdexcept>
#include <string>

namespace rsm {

enum class ErrorKind {
  duplicate_name,
  unknown_name,
  codomain_mismatch,
  domain_mismatch,
  foot_mismatch,
  boundary_mismatch,
  type_mismatch,
  not_bijective,
  unbound_name,
  free_input,
  non_finite,
  doctrine_mismatch,
  invalid_model,
  parse,
  internal,
};

/// All failures surface as Error; `kind` lets callers and tests branch
/// without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

const char* to_string(ErrorKind kind);

}  // namespace rsm
