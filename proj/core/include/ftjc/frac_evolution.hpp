#pragma once

#include <array>
#include <complex>
#include <span>
#include <vector>

#include "ftjc/special_fn.hpp"

namespace ftjc {

/// Fractional order alpha with its principal-branch phase constants.
struct FractionalOrder {
  double alpha = 1.0;
  cplx i_neg_alpha{1.0, 0.0};     ///< i^(-alpha) = exp(-i alpha pi/2)
  cplx neg1_neg_alpha{-1.0, 0.0};  ///< (-1)^(-alpha) = exp(-i alpha pi)

  /// Throws Error{domain} unless 0 < alpha <= 1.
  static FractionalOrder make(double alpha);
};

/// Diagonal C and off-diagonal S functions of the non-unitary block for
/// subspace n = span{|e,n>, |g,n+1>} at time t.
struct CSPair {
  int n = 0;
  double t = 0.0;
  cplx c{1.0, 0.0};
  cplx s{0.0, 0.0};
};

/// Initial values of the Dyson map of one block. Default is the identity map.
struct InitialMap {
  double kappa = 0.0;
  cplx lambda{0.0, 0.0};
  double cap_lambda = 1.0;

  double chi() const { return cap_lambda + std::norm(lambda); }
  bool is_identity() const { return kappa == 0.0 && lambda == cplx{} && cap_lambda == 1.0; }
};

struct DysonParams {
  double kappa = 0.0;
  cplx lambda{};
  double chi = 1.0;
  double cap_lambda = 1.0;
  cplx d{1.0, 0.0};
  cplx zeta_plus{}, zeta_minus{-1.0, 0.0};
  cplx xi_plus{1.0, 0.0}, xi_minus{};
};

/// Unitary block u = e^{i delta} [[w+, w-], [-conj(w-), conj(w+)]] acting on
/// (A_{e,n}, A_{g,n}).
struct UnitaryBlock {
  int n = 0;
  double t = 0.0;
  double delta = 0.0;
  cplx w_plus{1.0, 0.0};
  cplx w_minus{};

  /// Row-major 2x2 matrix {u00, u01, u10, u11}.
  std::array<cplx, 4> matrix() const;
  /// max |(u^dagger u - 1)_{ij}|
  double unitarity_residual() const;
  std::array<cplx, 2> apply(cplx a_e, cplx a_g) const;
};

/// c = [E(w) + E(-w)]/2, s = [E(w) - E(-w)]/(2 i^-alpha), w = i^-alpha mu sqrt(n+1) t^alpha.
CSPair cs_pair(const FractionalOrder& order, double mu, int n, double t, double tol);

/// D = C^2 - (-1)^(-alpha) S^2, the determinant of the non-unitary block.
cplx d_function(const CSPair& cs, const FractionalOrder& order);

/// Continuous complex logarithm along a sampled path starting at D(0) = 1.
/// Throws Error{grid_too_coarse} when consecutive arguments jump by pi or more.
std::vector<cplx> log_d_tracked(std::span<const cplx> d_series);

DysonParams dyson_params(const CSPair& cs, const FractionalOrder& order, cplx log_d,
                         const InitialMap& init = {});

/// Throws Error{consistency} if the assembled block misses unitarity by more than 1e-8.
UnitaryBlock unitary_block(const CSPair& cs, const DysonParams& dp, const FractionalOrder& order, cplx log_d,
                           const InitialMap& init = {});

/// Unitary blocks of one subspace on a time grid starting at t = 0.
///
/// Evaluates every grid point independently and tracks the phase of D along
/// the grid. Intervals whose phase step reaches pi/2 are bisected (at most
/// four times) before the step is accepted.
std::vector<UnitaryBlock> block_trajectory(const FractionalOrder& order, double mu, int n,
                                           std::span<const double> times, double tol,
                                           const InitialMap& init = {});

}  // namespace ftjc
