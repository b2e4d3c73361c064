#pragma once

#include <complex>
#include <optional>
#include <stdexcept>
#include <string>

namespace ftjc {

enum class ErrorKind {
  domain,
  evaluation,
  grid_too_coarse,
  numerical_degeneracy,
  consistency,
  cutoff,
  sector,
  input,
  insufficient_span,
  step_size,
  unknown_preset,
  config,
  io,
};

const char* to_string(ErrorKind kind) noexcept;

/// Location in the (alpha, n, t) grid where a numerical failure happened.
struct GridContext {
  std::optional<double> alpha;
  std::optional<int> n;
  std::optional<double> t;
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }
  const GridContext& context() const noexcept { return context_; }

  Error& with_context(GridContext ctx) {
    if (!context_.alpha) context_.alpha = ctx.alpha;
    if (!context_.n) context_.n = ctx.n;
    if (!context_.t) context_.t = ctx.t;
    return *this;
  }

 private:
  ErrorKind kind_;
  GridContext context_;
};

/// Mittag-Leffler evaluation that could not reach the requested tolerance.
/// Carries the best-effort value and the error actually achieved.
class EvaluationError : public Error {
 public:
  EvaluationError(const std::string& what, std::complex<double> best_effort, double achieved_rel_err)
      : Error(ErrorKind::evaluation, what), value_(best_effort), achieved_(achieved_rel_err) {}

  std::complex<double> best_effort() const noexcept { return value_; }
  double achieved_rel_err() const noexcept { return achieved_; }

 private:
  std::complex<double> value_;
  double achieved_;
};

}  // namespace ftjc
