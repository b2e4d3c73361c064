#include "ftjc/frac_evolution.hpp"

#include <cmath>
#include <numbers>

#include "ftjc/error.hpp"

namespace ftjc {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kUnitarityLimit = 1e-8;
constexpr double kRefineJump = kPi / 2.0;
constexpr int kMaxHalvings = 4;

}  // namespace

FractionalOrder FractionalOrder::make(double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw Error(ErrorKind::domain, "fractional order must lie in (0, 1]");
  FractionalOrder o;
  o.alpha = alpha;
  o.i_neg_alpha = i_pow_neg(alpha);
  o.neg1_neg_alpha = std::polar(1.0, -alpha * kPi);
  return o;
}

std::array<cplx, 4> UnitaryBlock::matrix() const {
  const cplx ph = std::polar(1.0, delta);
  return {ph * w_plus, ph * w_minus, -ph * std::conj(w_minus), ph * std::conj(w_plus)};
}

double UnitaryBlock::unitarity_residual() const {
  const auto m = matrix();
  // (u^dagger u)_{ij} = sum_k conj(u_{ki}) u_{kj}
  const cplx g00 = std::norm(m[0]) + std::norm(m[2]);
  const cplx g11 = std::norm(m[1]) + std::norm(m[3]);
  const cplx g01 = std::conj(m[0]) * m[1] + std::conj(m[2]) * m[3];
  return std::max({std::abs(g00 - 1.0), std::abs(g11 - 1.0), std::abs(g01)});
}

std::array<cplx, 2> UnitaryBlock::apply(cplx a_e, cplx a_g) const {
  const auto m = matrix();
  return {m[0] * a_e + m[1] * a_g, m[2] * a_e + m[3] * a_g};
}

CSPair cs_pair(const FractionalOrder& order, double mu, int n, double t, double tol) {
  if (!(mu > 0.0)) throw Error(ErrorKind::domain, "cs_pair: coupling must be positive");
  if (!(t >= 0.0)) throw Error(ErrorKind::domain, "cs_pair: time must be non-negative");
  if (n < 0) throw Error(ErrorKind::domain, "cs_pair: photon index must be non-negative");
  CSPair out;
  out.n = n;
  out.t = t;
  if (t == 0.0) return out;

  const cplx w = order.i_neg_alpha * (mu * std::sqrt(n + 1.0) * std::pow(t, order.alpha));
  try {
    const cplx e_plus = ml_eval({order.alpha, w}, tol).value;
    const cplx e_minus = ml_eval({order.alpha, -w}, tol).value;
    out.c = (e_plus + e_minus) / 2.0;
    out.s = (e_plus - e_minus) / (2.0 * order.i_neg_alpha);
  } catch (Error& e) {
    e.with_context({order.alpha, n, t});
    throw;
  }
  return out;
}

cplx d_function(const CSPair& cs, const FractionalOrder& order) {
  return cs.c * cs.c - order.neg1_neg_alpha * cs.s * cs.s;
}

std::vector<cplx> log_d_tracked(std::span<const cplx> d_series) {
  std::vector<cplx> out;
  out.reserve(d_series.size());
  if (d_series.empty()) return out;
  double phase = std::arg(d_series[0]);
  out.emplace_back(std::log(std::abs(d_series[0])), phase);
  for (std::size_t k = 1; k < d_series.size(); ++k) {
    const double jump = std::arg(d_series[k] * std::conj(d_series[k - 1]));
    if (!(std::abs(jump) < kPi)) throw Error(ErrorKind::grid_too_coarse, "log_d_tracked: phase jump of pi or more");
    phase += jump;
    out.emplace_back(std::log(std::abs(d_series[k])), phase);
  }
  return out;
}

DysonParams dyson_params(const CSPair& cs, const FractionalOrder& order, cplx log_d, const InitialMap& init) {
  DysonParams dp;
  const cplx ia = order.i_neg_alpha;
  const cplx lam0 = init.lambda;
  const double chi0 = init.chi();
  dp.d = d_function(cs, order);
  dp.zeta_plus = ia * cs.s - std::conj(lam0) * cs.c;
  dp.zeta_minus = ia * lam0 * cs.s - chi0 * cs.c;
  dp.xi_plus = cs.c - ia * std::conj(lam0) * cs.s;
  dp.xi_minus = lam0 * cs.c - ia * chi0 * cs.s;

  const double growth = init.cap_lambda * std::exp(log_d.real());
  const double den = std::norm(dp.xi_plus) + std::norm(dp.xi_minus) + growth;
  dp.kappa = init.kappa - 0.5 * log_d.real();
  dp.chi = (std::norm(dp.zeta_plus) + std::norm(dp.zeta_minus) + growth) / den;
  dp.lambda = -(dp.xi_plus * std::conj(dp.zeta_plus) + dp.xi_minus * std::conj(dp.zeta_minus)) / den;
  dp.cap_lambda = dp.chi - std::norm(dp.lambda);
  if (!(dp.cap_lambda > 0.0)) {
    throw Error(ErrorKind::numerical_degeneracy, "dyson_params: Lambda <= 0 (chi=" + std::to_string(dp.chi) +
                                                     ", |lambda|^2=" + std::to_string(std::norm(dp.lambda)) + ")")
        .with_context({order.alpha, cs.n, cs.t});
  }
  return dp;
}

UnitaryBlock unitary_block(const CSPair& cs, const DysonParams& dp, const FractionalOrder& order, cplx log_d,
                           const InitialMap& init) {
  UnitaryBlock u;
  u.n = cs.n;
  u.t = cs.t;
  u.delta = 0.5 * log_d.imag();
  const double f = std::exp(dp.kappa - init.kappa) / std::sqrt(dp.cap_lambda * init.cap_lambda);
  const cplx nu_plus = f * (dp.zeta_plus + std::conj(dp.lambda) * dp.xi_plus);
  const cplx nu_minus = -f * (dp.zeta_minus + std::conj(dp.lambda) * dp.xi_minus);
  const cplx phase = std::polar(1.0, u.delta);
  u.w_plus = phase * std::conj(nu_minus);
  u.w_minus = -phase * std::conj(nu_plus);
  const double residual = u.unitarity_residual();
  if (!(residual <= kUnitarityLimit)) {
    Error e(ErrorKind::consistency, "unitary_block: unitarity residual " + std::to_string(residual));
    e.with_context({order.alpha, cs.n, cs.t});
    throw e;
  }
  return u;
}

std::vector<UnitaryBlock> block_trajectory(const FractionalOrder& order, double mu, int n,
                                           std::span<const double> times, double tol, const InitialMap& init) {
  std::vector<UnitaryBlock> out;
  if (times.empty()) return out;
  if (times[0] != 0.0) throw Error(ErrorKind::input, "block_trajectory: time grid must start at t = 0");
  out.reserve(times.size());

  auto d_at = [&](double t) { return d_function(cs_pair(order, mu, n, t, tol), order); };

  CSPair cs = cs_pair(order, mu, n, 0.0, tol);
  cplx d_prev = d_function(cs, order);
  double phase = std::arg(d_prev);
  cplx log_d(std::log(std::abs(d_prev)), phase);
  out.push_back(unitary_block(cs, dyson_params(cs, order, log_d, init), order, log_d, init));

  for (std::size_t k = 1; k < times.size(); ++k) {
    const double t0 = times[k - 1];
    const double t1 = times[k];
    if (!(t1 > t0)) throw Error(ErrorKind::input, "block_trajectory: time grid must be increasing");
    cs = cs_pair(order, mu, n, t1, tol);
    const cplx d = d_function(cs, order);
    double jump = std::arg(d * std::conj(d_prev));
    if (std::abs(jump) >= kRefineJump) {
      double worst = 0.0;
      for (int halving = 1; halving <= kMaxHalvings; ++halving) {
        const int pieces = 1 << halving;
        cplx prev = d_prev;
        double total = 0.0;
        worst = 0.0;
        for (int j = 1; j <= pieces; ++j) {
          const cplx cur = j == pieces ? d : d_at(t0 + (t1 - t0) * j / pieces);
          const double step = std::arg(cur * std::conj(prev));
          worst = std::max(worst, std::abs(step));
          total += step;
          prev = cur;
        }
        jump = total;
        if (worst < kRefineJump) break;
      }
      if (!(worst < kPi)) {
        Error e(ErrorKind::grid_too_coarse, "block_trajectory: phase of D not resolved after 4 halvings");
        e.with_context({order.alpha, n, t1});
        throw e;
      }
    }
    phase += jump;
    log_d = cplx(std::log(std::abs(d)), phase);
    d_prev = d;
    out.push_back(unitary_block(cs, dyson_params(cs, order, log_d, init), order, log_d, init));
  }
  return out;
}

}  // namespace ftjc
