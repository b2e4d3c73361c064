#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "ftjc/frac_evolution.hpp"

namespace ftjc {

/// Truncated atom-field state
///   a_g0 |g,0> + sum_{n=0}^{n_max} ( a_e[n] |e,n> + a_g[n] |g,n+1> ).
struct JointState {
  int n_max = 0;
  std::vector<cplx> a_e;
  std::vector<cplx> a_g;
  cplx a_g0{};
  double t = 0.0;

  double norm_squared() const;
  /// Weight of the last block, |a_e[n_max]|^2 + |a_g[n_max]|^2.
  double tail_weight() const;
};

/// Reduced field density on photon numbers 0..n_max+1.
struct FieldDensity {
  int n_max = 0;
  Eigen::MatrixXcd rho;
};

inline constexpr int kDefaultFockCutoff = 4;
inline constexpr int kDefaultCoherentCutoff = 40;

/// |e,0>. n_max may be as small as 1.
JointState init_fock_excited(int n_max = kDefaultFockCutoff);

/// |e, beta> truncated at n_max and renormalized. Throws Error{cutoff} when
/// the Poisson weight beyond n_max is 1e-14 or more.
JointState init_coherent_excited(cplx beta, int n_max = kDefaultCoherentCutoff);

/// Applies u^(n)(t) to each block of the t = 0 state; |g,0> is left alone.
JointState evolve(const JointState& state0, std::span<const UnitaryBlock> blocks);

FieldDensity field_density(const JointState& state);

/// Density matrix on (|e,0>, |e,1>, |g,0>, |g,1>), trace renormalized.
/// Throws Error{sector} if more than 1e-12 of the weight lies elsewhere.
Eigen::Matrix4cd qubit_density(const JointState& state);

}  // namespace ftjc
