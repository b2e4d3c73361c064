#pragma once

#include <Eigen/Dense>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "ftjc/hilbert.hpp"

namespace ftjc {

struct ObservableRecord {
  double t = 0.0;
  double w = 0.0;
  std::optional<double> concurrence;
  double mean_n = 0.0;
  double parity = 0.0;
  std::optional<double> mandel_q;  ///< empty for the exact vacuum
  double var_x = 0.25;
  cplx mean_a{};
  cplx mean_a2{};
};

/// W = P_e - P_g, with |g,0> counted in P_g.
double population_inversion(const JointState& state);

/// Wootters concurrence of a two-qubit density matrix.
/// Throws Error{input} unless rho is Hermitian, unit-trace and PSD within 1e-9.
double concurrence(const Eigen::Matrix4cd& rho);

double mean_photon(const JointState& state);
double parity(const JointState& state);

/// (<n^2> - <n>^2)/<n> - 1. Throws Error{domain} for the vacuum field.
double mandel_q(const JointState& state);

struct FieldMoments {
  cplx mean_a;
  cplx mean_a2;
};

/// Tr[rho_F a] and Tr[rho_F a^2] from the reduced field density.
FieldMoments field_moments(const JointState& state);

/// Variance of X = (a + a^dagger)/2. Values below 1/4 signal squeezing.
double quadrature_variance_x(const JointState& state);

inline bool is_squeezed(double var_x) { return var_x < 0.25; }

struct HusimiSpec {
  double re_min = -5.0, re_max = 5.0;
  double im_min = -5.0, im_max = 5.0;
  int resolution = 201;  ///< points per axis
};

struct HusimiGrid {
  HusimiSpec spec;
  /// values[i_im * resolution + i_re], gamma = re + i im
  std::vector<double> values;
  bool coverage_warning = false;

  double at(int i_re, int i_im) const { return values[static_cast<std::size_t>(i_im) * spec.resolution + i_re]; }
  double cell_area() const;
  /// Riemann sum of the values times the cell area.
  double normalization() const;
};

/// Q(gamma) = <gamma| rho_F |gamma> / pi on a rectangular grid.
HusimiGrid husimi(const FieldDensity& fd, const HusimiSpec& spec = {});

struct PeriodTable {
  struct Entry {
    int index;  ///< oscillation number l >= 1
    double period;
  };
  std::vector<Entry> entries;
  std::vector<double> peak_times;  ///< peak 0 first
};

/// Periods between successive maxima of W(t). A maximum at the first sample
/// counts as peak 0; interior maxima are refined by a three-point parabola.
/// Throws Error{insufficient_span} when fewer than count + 1 peaks exist.
PeriodTable oscillation_periods(std::span<const double> times, std::span<const double> w, int count);

/// All scalar observables of one snapshot. Concurrence is evaluated only when
/// requested (it needs the state inside the two-qubit sector).
ObservableRecord observe(const JointState& state, bool with_concurrence);

}  // namespace ftjc
