#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ftjc/special_fn.hpp"

namespace ftjc {

enum class DerivativeScheme { central2, central4 };

inline constexpr double kSingularThreshold = 1e-12;  ///< on 1 - W^2

/// Step function h(t) = [dW/dt >= 0] and the relative amplitude phase
/// theta(t) = h pi - pi/2 that makes a real, non-negative coupling drive W
/// in the direction of dW/dt.
struct GaugeRecord {
  std::vector<std::uint8_t> h;
  std::vector<double> theta;
};

struct CouplingProfile {
  std::vector<double> t;
  std::vector<double> gamma;
  std::vector<std::uint8_t> singular;  ///< 1 where 1 - W^2 < kSingularThreshold
  GaugeRecord gauge;
  double theta_gamma = 0.0;

  std::size_t singular_count() const;
};

/// gamma = |dW/dt| / (2 sqrt(1 - W^2)) on a uniform grid.
/// Singular cells take the linear extrapolation of the two nearest regular
/// cells; a profile without regular cells is identically zero.
/// Throws Error{input} if |W| > 1 + 1e-12 or the grid is not uniform.
CouplingProfile extract_coupling(std::span<const double> t, std::span<const double> w,
                                 DerivativeScheme scheme = DerivativeScheme::central2);

struct ForwardOptions {
  double phi = 0.0;  ///< constant coupling phase, gamma -> gamma e^{i phi}
  cplx a_e0{1.0, 0.0};
  cplx a_g0{0.0, 0.0};
  int substeps = 4;
};

struct ForwardResult {
  std::vector<double> w;
  double norm_drift = 0.0;
  int substeps_used = 0;
};

/// Integrates i dA_e/dt = gamma A_g, i dA_g/dt = conj(gamma) A_e with classic RK4,
/// gamma interpolated linearly between grid points. A norm drift above 1e-6
/// triggers one refinement by a factor 8; a second failure throws Error{step_size}.
ForwardResult forward_two_level(const CouplingProfile& profile, const ForwardOptions& opts = {});

/// Two-level state with the magnitudes of W at the first profile point and
/// the relative phase theta of the gauge record there.
ForwardOptions gauge_seed(const CouplingProfile& profile, double w_first);

struct RoundtripOptions {
  double dt = 1e-3;
  DerivativeScheme scheme = DerivativeScheme::central4;
  double ml_tol = 1e-10;
  double exclude_fraction = 0.01;  ///< leading part of the grid left out of the error norms
};

struct RoundtripReport {
  double alpha = 1.0;
  double mu = 1.0;
  double t_max = 0.0;
  double dt = 0.0;
  std::vector<double> t;  ///< starts at t1 = dt
  std::vector<double> w_target;
  std::vector<double> w_forward;
  std::vector<double> gamma;
  std::size_t singular_count = 0;
  std::size_t excluded = 0;
  double max_abs_err = 0.0;
  double mean_abs_err = 0.0;
  double gamma_t1 = 0.0;
  double plateau_mean = 0.0;  ///< mean of gamma over the second half of the grid
};

/// Fractional |e,0> trajectory -> coupling -> standard JC forward run.
/// The forward run starts at t1 from the target magnitudes with the gauge phase theta(t1).
RoundtripReport roundtrip_report(double alpha, double mu, double t_max, const RoundtripOptions& opts = {});

}  // namespace ftjc
