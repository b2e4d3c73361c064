#include "ftjc/error.hpp"

namespace ftjc {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::domain: return "domain";
    case ErrorKind::evaluation: return "evaluation";
    case ErrorKind::grid_too_coarse: return "grid_too_coarse";
    case ErrorKind::numerical_degeneracy: return "numerical_degeneracy";
    case ErrorKind::consistency: return "consistency";
    case ErrorKind::cutoff: return "cutoff";
    case ErrorKind::sector: return "sector";
    case ErrorKind::input: return "input";
    case ErrorKind::insufficient_span: return "insufficient_span";
    case ErrorKind::step_size: return "step_size";
    case ErrorKind::unknown_preset: return "unknown_preset";
    case ErrorKind::config: return "config";
    case ErrorKind::io: return "io";
  }
  return "unknown";
}

}  // namespace ftjc
