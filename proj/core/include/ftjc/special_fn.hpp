#pragma once

#include <complex>

namespace ftjc {

using cplx = std::complex<double>;

/// Gamma function for real arguments (Lanczos approximation with reflection).
/// Throws Error{domain} at the poles 0, -1, -2, ...
double gamma_real(double x);

struct MLArg {
  double alpha;  ///< order, 0 < alpha <= 1
  cplx z;

  /// Throws Error{domain} when alpha is outside (0, 1] or z is not finite.
  void validate() const;
};

enum class MLMethod { series, contour, exp_identity };

const char* to_string(MLMethod m) noexcept;

struct MLResult {
  cplx value;
  double est_rel_err;
  MLMethod method;
};

/// Radius below which ml_eval tries the power series first.
inline constexpr double kSeriesSwitchRadius = 5.0;

/// Upper bound on the half node count of the contour rule (2N+1 nodes total).
inline constexpr int kMaxContourHalfNodes = 256;

/// Taylor series of E_alpha(z), accumulated in extended precision.
///
/// Stops once the geometric bound on the remaining terms drops below tol/4
/// relative to the partial sum. The reported error adds the rounding budget
/// of every term, roughly max_k|term_k| / |sum| * epsilon, so
/// for large |z| off the positive real axis the estimate grows quickly and
/// the call fails with EvaluationError instead of returning garbage.
MLResult ml_series(const MLArg& a, double tol);

/// Laplace-transform inversion of s^(alpha-1)/(s^alpha - z) on an optimal
/// parabolic contour, plus the residues of the poles left of the contour.
/// Throws EvaluationError (with best-effort value) when tol is unreachable
/// within kMaxContourHalfNodes.
MLResult ml_contour(const MLArg& a, double tol);

/// Dispatching evaluator: exact exponential for alpha == 1, the series for
/// |z| <= kSeriesSwitchRadius when its error estimate meets tol, the contour
/// rule otherwise. tol must lie in [1e-14, 1e-6].
MLResult ml_eval(const MLArg& a, double tol);

/// Principal branch of i^(-alpha) = exp(-i alpha pi / 2).
cplx i_pow_neg(double alpha);

}  // namespace ftjc
