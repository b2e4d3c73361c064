#include "ftjc/inverse_problem.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ftjc/error.hpp"
#include "ftjc/frac_evolution.hpp"

namespace ftjc {

namespace {

constexpr double kInversionSlack = 1e-12;
constexpr double kDriftLimit = 1e-6;

std::vector<double> derivative(std::span<const double> f, double h, DerivativeScheme scheme) {
  const std::size_t n = f.size();
  std::vector<double> d(n);
  if (scheme == DerivativeScheme::central2) {
    // third-order one-sided ends keep the boundary error below the interior one
    d[0] = (-11.0 * f[0] + 18.0 * f[1] - 9.0 * f[2] + 2.0 * f[3]) / (6.0 * h);
    d[n - 1] = (11.0 * f[n - 1] - 18.0 * f[n - 2] + 9.0 * f[n - 3] - 2.0 * f[n - 4]) / (6.0 * h);
    for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (f[i + 1] - f[i - 1]) / (2.0 * h);
    return d;
  }
  const double s = 12.0 * h;
  d[0] = (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]) / s;
  d[1] = (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]) / s;
  d[n - 1] = (25.0 * f[n - 1] - 48.0 * f[n - 2] + 36.0 * f[n - 3] - 16.0 * f[n - 4] + 3.0 * f[n - 5]) / s;
  d[n - 2] = (3.0 * f[n - 1] + 10.0 * f[n - 2] - 18.0 * f[n - 3] + 6.0 * f[n - 4] - f[n - 5]) / s;
  for (std::size_t i = 2; i + 2 < n; ++i) d[i] = (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]) / s;
  return d;
}

double extrapolate(const std::vector<double>& gamma, const std::vector<std::uint8_t>& singular, std::size_t i) {
  const std::size_t n = gamma.size();
  std::size_t found[2];
  int count = 0;
  for (std::size_t r = 1; r < n && count < 2; ++r) {
    if (r <= i && !singular[i - r]) found[count++] = i - r;
    if (count < 2 && i + r < n && !singular[i + r]) found[count++] = i + r;
  }
  if (count == 1) return gamma[found[0]];
  const double x0 = static_cast<double>(found[0]);
  const double x1 = static_cast<double>(found[1]);
  const double slope = (gamma[found[1]] - gamma[found[0]]) / (x1 - x0);
  return std::max(0.0, gamma[found[0]] + slope * (static_cast<double>(i) - x0));
}

struct Amplitudes {
  cplx e, g;
};

Amplitudes rhs(const Amplitudes& a, cplx coupling) {
  const cplx minus_i{0.0, -1.0};
  return {minus_i * coupling * a.g, minus_i * std::conj(coupling) * a.e};
}

ForwardResult integrate(const CouplingProfile& p, const ForwardOptions& opts, int substeps) {
  const std::size_t n = p.t.size();
  const cplx phase = std::polar(1.0, opts.phi);
  ForwardResult out;
  out.substeps_used = substeps;
  out.w.resize(n);
  Amplitudes a{opts.a_e0, opts.a_g0};
  const double norm0 = std::norm(a.e) + std::norm(a.g);
  out.w[0] = std::norm(a.e) - std::norm(a.g);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const double h = (p.t[k + 1] - p.t[k]) / substeps;
    const double g0 = p.gamma[k];
    const double slope = (p.gamma[k + 1] - p.gamma[k]) / substeps;
    for (int j = 0; j < substeps; ++j) {
      const cplx c0 = phase * (g0 + slope * j);
      const cplx cm = phase * (g0 + slope * (j + 0.5));
      const cplx c1 = phase * (g0 + slope * (j + 1));
      const auto k1 = rhs(a, c0);
      const auto k2 = rhs({a.e + 0.5 * h * k1.e, a.g + 0.5 * h * k1.g}, cm);
      const auto k3 = rhs({a.e + 0.5 * h * k2.e, a.g + 0.5 * h * k2.g}, cm);
      const auto k4 = rhs({a.e + h * k3.e, a.g + h * k3.g}, c1);
      a.e += h / 6.0 * (k1.e + 2.0 * k2.e + 2.0 * k3.e + k4.e);
      a.g += h / 6.0 * (k1.g + 2.0 * k2.g + 2.0 * k3.g + k4.g);
    }
    const double norm = std::norm(a.e) + std::norm(a.g);
    out.norm_drift = std::max(out.norm_drift, std::abs(norm - norm0));
    out.w[k + 1] = std::norm(a.e) - std::norm(a.g);
  }
  return out;
}

void check_uniform(std::span<const double> t) {
  const double h = t[1] - t[0];
  if (!(h > 0.0)) throw Error(ErrorKind::input, "time grid must be increasing");
  for (std::size_t i = 1; i < t.size(); ++i) {
    if (std::abs((t[i] - t[i - 1]) - h) > 1e-9 * std::max(1.0, std::abs(t[i])))
      throw Error(ErrorKind::input, "time grid must be uniform");
  }
}

}  // namespace

std::size_t CouplingProfile::singular_count() const {
  return static_cast<std::size_t>(std::count(singular.begin(), singular.end(), std::uint8_t{1}));
}

CouplingProfile extract_coupling(std::span<const double> t, std::span<const double> w, DerivativeScheme scheme) {
  if (t.size() != w.size()) throw Error(ErrorKind::input, "extract_coupling: size mismatch");
  const std::size_t min_points = scheme == DerivativeScheme::central4 ? 5 : 4;
  if (t.size() < min_points) throw Error(ErrorKind::input, "extract_coupling: too few samples for the scheme");
  check_uniform(t);
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (!(std::abs(w[i]) <= 1.0 + kInversionSlack))
      throw Error(ErrorKind::input, "extract_coupling: |W| exceeds 1").with_context({.t = t[i]});
  }

  const std::size_t n = t.size();
  const auto wdot = derivative(w, t[1] - t[0], scheme);
  CouplingProfile p;
  p.t.assign(t.begin(), t.end());
  p.gamma.resize(n);
  p.singular.resize(n);
  p.gauge.h.resize(n);
  p.gauge.theta.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double wi = std::clamp(w[i], -1.0, 1.0);
    const double gap = (1.0 - wi) * (1.0 + wi);
    p.singular[i] = gap < kSingularThreshold;
    p.gamma[i] = p.singular[i] ? 0.0 : std::abs(wdot[i]) / (2.0 * std::sqrt(gap));
    p.gauge.h[i] = wdot[i] >= 0.0;
    p.gauge.theta[i] = p.gauge.h[i] * std::numbers::pi - std::numbers::pi / 2.0;
  }

  const std::size_t singular = p.singular_count();
  if (singular == n) {
    std::fill(p.gamma.begin(), p.gamma.end(), 0.0);
  } else if (singular > 0) {
    const auto regular = p.gamma;
    for (std::size_t i = 0; i < n; ++i)
      if (p.singular[i]) p.gamma[i] = extrapolate(regular, p.singular, i);
  }
  return p;
}

ForwardResult forward_two_level(const CouplingProfile& profile, const ForwardOptions& opts) {
  if (profile.t.size() != profile.gamma.size() || profile.t.size() < 2)
    throw Error(ErrorKind::input, "forward_two_level: malformed profile");
  if (opts.substeps < 1) throw Error(ErrorKind::input, "forward_two_level: substeps must be positive");
  for (double g : profile.gamma)
    if (!(g >= 0.0) || !std::isfinite(g)) throw Error(ErrorKind::input, "forward_two_level: gamma must be finite and >= 0");

  auto result = integrate(profile, opts, opts.substeps);
  if (result.norm_drift <= kDriftLimit) return result;
  result = integrate(profile, opts, opts.substeps * 8);
  if (result.norm_drift <= kDriftLimit) return result;
  throw Error(ErrorKind::step_size, "forward_two_level: norm drift above 1e-6 after refinement");
}

ForwardOptions gauge_seed(const CouplingProfile& profile, double w_first) {
  if (profile.gauge.theta.empty()) throw Error(ErrorKind::input, "gauge_seed: profile carries no gauge record");
  const double w1 = std::clamp(w_first, -1.0, 1.0);
  ForwardOptions fwd;
  fwd.a_e0 = std::sqrt((1.0 + w1) / 2.0);
  fwd.a_g0 = std::polar(std::sqrt((1.0 - w1) / 2.0), profile.gauge.theta.front());
  return fwd;
}

RoundtripReport roundtrip_report(double alpha, double mu, double t_max, const RoundtripOptions& opts) {
  if (!(mu > 0.0) || !(t_max > 0.0) || !(opts.dt > 0.0) || opts.dt > t_max / 100.0)
    throw Error(ErrorKind::input, "roundtrip_report: need mu > 0, t_max > 0 and 0 < dt <= t_max/100");
  const auto order = FractionalOrder::make(alpha);
  const auto steps = static_cast<std::size_t>(std::floor(t_max / opts.dt + 1e-9));

  std::vector<double> times(steps + 1);
  for (std::size_t k = 0; k <= steps; ++k) times[k] = static_cast<double>(k) * opts.dt;
  const auto blocks = block_trajectory(order, mu, 0, times, opts.ml_tol);

  RoundtripReport r;
  r.alpha = alpha;
  r.mu = mu;
  r.t_max = t_max;
  r.dt = opts.dt;
  r.t.assign(times.begin() + 1, times.end());
  r.w_target.resize(steps);
  for (std::size_t k = 1; k <= steps; ++k) {
    const auto amp = blocks[k].apply(1.0, 0.0);
    r.w_target[k - 1] = std::norm(amp[0]) - std::norm(amp[1]);
  }

  const auto profile = extract_coupling(r.t, r.w_target, opts.scheme);
  r.gamma = profile.gamma;
  r.singular_count = profile.singular_count();
  r.gamma_t1 = profile.gamma.front();

  const auto forward = forward_two_level(profile, gauge_seed(profile, r.w_target.front()));
  r.w_forward = forward.w;

  r.excluded = static_cast<std::size_t>(std::ceil(opts.exclude_fraction * static_cast<double>(steps)));
  double sum = 0.0;
  for (std::size_t k = r.excluded; k < steps; ++k) {
    const double err = std::abs(r.w_forward[k] - r.w_target[k]);
    r.max_abs_err = std::max(r.max_abs_err, err);
    sum += err;
  }
  if (steps > r.excluded) r.mean_abs_err = sum / static_cast<double>(steps - r.excluded);

  const std::size_t half = steps / 2;
  double plateau = 0.0;
  for (std::size_t k = half; k < steps; ++k) plateau += r.gamma[k];
  r.plateau_mean = plateau / static_cast<double>(steps - half);
  return r;
}

}  // namespace ftjc
