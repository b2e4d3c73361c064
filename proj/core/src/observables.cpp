#include "ftjc/observables.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ftjc/error.hpp"

namespace ftjc {

namespace {

constexpr double kDensityTolerance = 1e-9;
constexpr double kVacuumLimit = 1e-12;
constexpr double kCoverageLimit = 1e-6;

struct NumberMoments {
  double first = 0.0;
  double second = 0.0;
};

NumberMoments number_moments(const JointState& s) {
  NumberMoments m;
  for (int n = 0; n <= s.n_max; ++n) {
    const double pe = std::norm(s.a_e[n]);
    const double pg = std::norm(s.a_g[n]);
    const double n1 = n + 1.0;
    m.first += n * pe + n1 * pg;
    m.second += static_cast<double>(n) * n * pe + n1 * n1 * pg;
  }
  return m;
}

}  // namespace

double population_inversion(const JointState& s) {
  double pe = 0.0;
  double pg = std::norm(s.a_g0);
  for (int n = 0; n <= s.n_max; ++n) {
    pe += std::norm(s.a_e[n]);
    pg += std::norm(s.a_g[n]);
  }
  return pe - pg;
}

double concurrence(const Eigen::Matrix4cd& rho) {
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > kDensityTolerance)
    throw Error(ErrorKind::input, "concurrence: density matrix is not Hermitian");
  if (std::abs(rho.trace() - cplx(1.0)) > kDensityTolerance)
    throw Error(ErrorKind::input, "concurrence: density matrix trace differs from 1");
  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> eig(rho);
  if (eig.eigenvalues().minCoeff() < -kDensityTolerance)
    throw Error(ErrorKind::input, "concurrence: density matrix is not positive semidefinite");

  // rho = V V^dagger with V = U sqrt(p). The square roots of the eigenvalues of
  // rho * (sy x sy) rho^* (sy x sy) are the singular values of V^T (sy x sy) V,
  // which avoids taking square roots of eigenvalues at round-off level.
  Eigen::Matrix4cd v = eig.eigenvectors();
  for (int i = 0; i < 4; ++i) v.col(i) *= std::sqrt(std::max(0.0, eig.eigenvalues()(i)));
  Eigen::Matrix4cd flip = Eigen::Matrix4cd::Zero();
  flip(0, 3) = -1.0;
  flip(1, 2) = 1.0;
  flip(2, 1) = 1.0;
  flip(3, 0) = -1.0;
  const Eigen::Matrix4cd tau = v.transpose() * flip * v;
  const Eigen::JacobiSVD<Eigen::Matrix4cd> svd(tau);
  const Eigen::Vector4d iota = svd.singularValues();  // descending
  return std::max(0.0, iota(0) - iota(1) - iota(2) - iota(3));
}

double mean_photon(const JointState& s) { return number_moments(s).first; }

double parity(const JointState& s) {
  double acc = std::norm(s.a_g0);
  for (int n = 0; n <= s.n_max; ++n) {
    const double sign = (n % 2 == 0) ? 1.0 : -1.0;
    acc += sign * (std::norm(s.a_e[n]) - std::norm(s.a_g[n]));
  }
  return acc;
}

double mandel_q(const JointState& s) {
  const auto m = number_moments(s);
  if (!(m.first > kVacuumLimit)) throw Error(ErrorKind::domain, "mandel_q: undefined for the vacuum field");
  return (m.second - m.first * m.first) / m.first - 1.0;
}

FieldMoments field_moments(const JointState& s) {
  const auto fd = field_density(s);
  const int dim = static_cast<int>(fd.rho.rows());
  FieldMoments out{};
  for (int m = 1; m < dim; ++m) out.mean_a += std::sqrt(static_cast<double>(m)) * fd.rho(m, m - 1);
  for (int m = 2; m < dim; ++m) out.mean_a2 += std::sqrt(static_cast<double>(m) * (m - 1)) * fd.rho(m, m - 2);
  return out;
}

double quadrature_variance_x(const JointState& s) {
  const auto fm = field_moments(s);
  const double n = mean_photon(s);
  const cplx var_a = fm.mean_a2 - fm.mean_a * fm.mean_a;
  return 0.5 * (var_a.real() + n - std::norm(fm.mean_a) + 0.5);
}

double HusimiGrid::cell_area() const {
  const double dre = (spec.re_max - spec.re_min) / (spec.resolution - 1);
  const double dim = (spec.im_max - spec.im_min) / (spec.resolution - 1);
  return dre * dim;
}

double HusimiGrid::normalization() const {
  double acc = 0.0;
  for (double v : values) acc += v;
  return acc * cell_area();
}

HusimiGrid husimi(const FieldDensity& fd, const HusimiSpec& spec) {
  if (spec.resolution < 2) throw Error(ErrorKind::input, "husimi: resolution must be at least 2");
  if (!(spec.re_max > spec.re_min && spec.im_max > spec.im_min)) throw Error(ErrorKind::input, "husimi: empty range");
  const int dim = static_cast<int>(fd.rho.rows());
  const int res = spec.resolution;
  HusimiGrid grid;
  grid.spec = spec;
  grid.values.resize(static_cast<std::size_t>(res) * res);

  Eigen::VectorXcd v(dim);
  for (int i_im = 0; i_im < res; ++i_im) {
    const double im = spec.im_min + (spec.im_max - spec.im_min) * i_im / (res - 1);
    for (int i_re = 0; i_re < res; ++i_re) {
      const double re = spec.re_min + (spec.re_max - spec.re_min) * i_re / (res - 1);
      const cplx g(re, im);
      // <n|gamma> = e^{-|gamma|^2/2} gamma^n / sqrt(n!)
      v(0) = std::exp(-std::norm(g) / 2.0);
      for (int n = 1; n < dim; ++n) v(n) = v(n - 1) * g / std::sqrt(static_cast<double>(n));
      const double q = (v.adjoint() * fd.rho * v)(0).real() / std::numbers::pi;
      grid.values[static_cast<std::size_t>(i_im) * res + i_re] = std::max(0.0, q);
    }
  }

  double boundary = 0.0;
  for (int i = 0; i < res; ++i) {
    boundary = std::max({boundary, grid.at(i, 0), grid.at(i, res - 1), grid.at(0, i), grid.at(res - 1, i)});
  }
  grid.coverage_warning = boundary > kCoverageLimit;
  return grid;
}

PeriodTable oscillation_periods(std::span<const double> times, std::span<const double> w, int count) {
  if (times.size() != w.size()) throw Error(ErrorKind::input, "oscillation_periods: size mismatch");
  if (count < 1) throw Error(ErrorKind::input, "oscillation_periods: count must be positive");
  PeriodTable table;
  const std::size_t n = w.size();
  if (n >= 2 && w[0] >= w[1]) table.peak_times.push_back(times[0]);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (!(w[i] > w[i - 1] && w[i] >= w[i + 1])) continue;
    const double y0 = w[i - 1], y1 = w[i], y2 = w[i + 1];
    const double curvature = y0 - 2.0 * y1 + y2;
    double offset = curvature != 0.0 ? 0.5 * (y0 - y2) / curvature : 0.0;
    offset = std::clamp(offset, -0.5, 0.5);
    const double step = offset < 0.0 ? times[i] - times[i - 1] : times[i + 1] - times[i];
    table.peak_times.push_back(times[i] + offset * step);
    if (table.peak_times.size() > static_cast<std::size_t>(count)) break;
  }
  if (table.peak_times.size() < static_cast<std::size_t>(count) + 1)
    throw Error(ErrorKind::insufficient_span, "oscillation_periods: fewer maxima than requested periods + 1");
  for (int l = 1; l <= count; ++l) table.entries.push_back({l, table.peak_times[l] - table.peak_times[l - 1]});
  return table;
}

ObservableRecord observe(const JointState& s, bool with_concurrence) {
  ObservableRecord r;
  r.t = s.t;
  r.w = population_inversion(s);
  if (with_concurrence) r.concurrence = concurrence(qubit_density(s));
  const auto m = number_moments(s);
  r.mean_n = m.first;
  r.parity = parity(s);
  if (m.first > kVacuumLimit) r.mandel_q = (m.second - m.first * m.first) / m.first - 1.0;
  const auto fm = field_moments(s);
  r.mean_a = fm.mean_a;
  r.mean_a2 = fm.mean_a2;
  const cplx var_a = fm.mean_a2 - fm.mean_a * fm.mean_a;
  r.var_x = 0.5 * (var_a.real() + m.first - std::norm(fm.mean_a) + 0.5);
  return r;
}

}  // namespace ftjc
