#include "ftjc/hilbert.hpp"

#include <cmath>
#include <cstdio>

#include "ftjc/error.hpp"

namespace ftjc {

namespace {

constexpr double kPoissonTailLimit = 1e-14;
constexpr double kSectorLeakLimit = 1e-12;

}  // namespace

double JointState::norm_squared() const {
  double acc = std::norm(a_g0);
  for (int n = 0; n <= n_max; ++n) acc += std::norm(a_e[n]) + std::norm(a_g[n]);
  return acc;
}

double JointState::tail_weight() const { return std::norm(a_e[n_max]) + std::norm(a_g[n_max]); }

JointState init_fock_excited(int n_max) {
  if (n_max < 1) throw Error(ErrorKind::cutoff, "init_fock_excited: n_max must be at least 1");
  JointState s;
  s.n_max = n_max;
  s.a_e.assign(n_max + 1, cplx{});
  s.a_g.assign(n_max + 1, cplx{});
  s.a_e[0] = 1.0;
  return s;
}

JointState init_coherent_excited(cplx beta, int n_max) {
  if (n_max < 1) throw Error(ErrorKind::cutoff, "init_coherent_excited: n_max must be at least 1");
  const double mean = std::norm(beta);
  JointState s = init_fock_excited(n_max);
  if (beta == cplx{}) return s;

  // beta^n / sqrt(n!) e^{-|beta|^2/2}, built by recurrence
  cplx amp = std::exp(-mean / 2.0);
  double kept = 0.0;
  for (int n = 0; n <= n_max; ++n) {
    if (n > 0) amp *= beta / std::sqrt(static_cast<double>(n));
    s.a_e[n] = amp;
    kept += std::norm(amp);
  }
  // Poisson tail beyond n_max, summed directly to avoid 1 - kept cancellation
  double tail = 0.0;
  double p = std::norm(amp);
  for (int n = n_max + 1; n < n_max + 10000; ++n) {
    p *= mean / n;
    tail += p;
    if (p < 1e-30 * std::max(tail, 1e-300) || p == 0.0) break;
  }
  if (!(tail < kPoissonTailLimit)) {
    char msg[128];
    std::snprintf(msg, sizeof msg, "init_coherent_excited: Poisson tail %.3g beyond n_max=%d", tail, n_max);
    throw Error(ErrorKind::cutoff, msg);
  }
  const double scale = 1.0 / std::sqrt(kept);
  for (auto& a : s.a_e) a *= scale;
  return s;
}

JointState evolve(const JointState& state0, std::span<const UnitaryBlock> blocks) {
  if (blocks.size() != static_cast<std::size_t>(state0.n_max + 1))
    throw Error(ErrorKind::input, "evolve: block count does not match the state cutoff");
  JointState out = state0;
  out.t = blocks.front().t;
  for (int n = 0; n <= state0.n_max; ++n) {
    const auto& u = blocks[n];
    if (u.n != n || u.t != out.t) throw Error(ErrorKind::input, "evolve: blocks must cover n = 0..n_max at one time");
    const auto amps = u.apply(state0.a_e[n], state0.a_g[n]);
    out.a_e[n] = amps[0];
    out.a_g[n] = amps[1];
  }
  return out;
}

FieldDensity field_density(const JointState& state) {
  const int dim = state.n_max + 2;
  Eigen::VectorXcd psi_e = Eigen::VectorXcd::Zero(dim);
  Eigen::VectorXcd psi_g = Eigen::VectorXcd::Zero(dim);
  for (int n = 0; n <= state.n_max; ++n) {
    psi_e(n) = state.a_e[n];
    psi_g(n + 1) = state.a_g[n];
  }
  psi_g(0) = state.a_g0;
  FieldDensity fd;
  fd.n_max = state.n_max;
  fd.rho = psi_e * psi_e.adjoint() + psi_g * psi_g.adjoint();
  return fd;
}

Eigen::Matrix4cd qubit_density(const JointState& state) {
  Eigen::Vector4cd psi;
  psi << state.a_e[0], state.a_e[1], state.a_g0, state.a_g[0];
  const double inside = psi.squaredNorm();
  const double leak = state.norm_squared() - inside;
  if (leak > kSectorLeakLimit) throw Error(ErrorKind::sector, "qubit_density: state leaks out of the two-qubit sector");
  if (!(inside > 0.0)) throw Error(ErrorKind::sector, "qubit_density: empty two-qubit sector");
  return psi * psi.adjoint() / inside;
}

}  // namespace ftjc
