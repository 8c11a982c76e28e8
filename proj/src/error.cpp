#include "rsm/error.hpp"

namespace rsm {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::duplicate_name: return "duplicate name";
    case ErrorKind::unknown_name: return "unknown name";
    case ErrorKind::codomain_mismatch: return "codomain mismatch";
    case ErrorKind::domain_mismatch: return "domain mismatch";
    case ErrorKind::foot_mismatch: return "foot mismatch";
    case ErrorKind::boundary_mismatch: return "boundary mismatch";
    case ErrorKind::type_mismatch: return "type mismatch";
    case ErrorKind::not_bijective: return "not bijective";
    case ErrorKind::unbound_name: return "unbound name";
    case ErrorKind::free_input: return "free input";
    case ErrorKind::non_finite: return "non-finite value";
    case ErrorKind::doctrine_mismatch: return "doctrine mismatch";
    case ErrorKind::invalid_model: return "invalid model";
    case ErrorKind::parse: return "parse error";
    case ErrorKind::internal: return "internal error";
  }
  return "error";
}

}  // namespace rsm
