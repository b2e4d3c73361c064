#include "ftjc/special_fn.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "ftjc/error.hpp"

namespace ftjc {

namespace {

constexpr double kPi = std::numbers::pi;

// Lanczos coefficients, g = 7, n = 9.
constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993227684700473478,  676.520368121885098567009190444019,
    -1259.13921672240287047156078755283, 771.3234287776530788486528258894,
    -176.615029162140599065845513540502, 12.507343278686904814458936853287,
    -0.13857109526572011689554706984971, 9.984369578019570859563e-6,
    1.50563273514931155834e-7};

double sin_pi(double x) {
  // sin(pi x) with the argument reduced exactly first
  double r = std::fmod(x, 2.0);
  if (r > 1.0) r -= 2.0;
  if (r < -1.0) r += 2.0;
  if (r > 0.5) r = 1.0 - r;
  if (r < -0.5) r = -1.0 - r;
  return std::sin(kPi * r);
}

double gamma_positive(double x) {
  // valid for x >= 0.5
  const double xm = x - 1.0;
  double acc = kLanczos[0];
  for (std::size_t i = 1; i < kLanczos.size(); ++i) acc += kLanczos[i] / (xm + static_cast<double>(i));
  const double t = xm + kLanczosG + 0.5;
  // split the power so that t^(xm+0.5) does not overflow before exp(-t) scales it
  const double half = std::pow(t, 0.5 * (xm + 0.5));
  return std::sqrt(2.0 * kPi) * half * (half * std::exp(-t)) * acc;
}

struct Pole {
  cplx s;
  double phi;  // (Re s + |s|)/2, the parabola level through s
};

struct ContourParams {
  double mu = 0.0;
  double h = 0.0;
  double n = std::numeric_limits<double>::infinity();
};

const double kLogEps = std::log(std::numeric_limits<double>::epsilon());

// Parameters for a region bounded by two singularity levels phi_j < phi_j1.
// p, q are the singularity strengths at the lower and upper boundary.
ContourParams params_bounded(double t, double phi_j, double phi_j1, double p, double q,
                             double log_eps_target) {
  constexpr double fac = 1.01;
  const double f_max = std::exp(log_eps_target - kLogEps);
  const double sq_phi_j = std::sqrt(phi_j);
  const double threshold = 2.0 * std::sqrt((log_eps_target - kLogEps) / t);
  const double sq_phi_j1 = std::min(std::sqrt(phi_j1), threshold - sq_phi_j);

  double sq_bar_j = 0.0;
  double sq_bar_j1 = 0.0;
  double f_bar = 1.0;
  bool admissible = false;

  if (p < 1e-14 && q < 1e-14) {
    sq_bar_j = sq_phi_j;
    sq_bar_j1 = sq_phi_j1;
    admissible = true;
  } else if (p < 1e-14) {
    sq_bar_j = sq_phi_j;
    const double f_min = sq_phi_j > 0.0 ? fac * std::pow(sq_phi_j / (sq_phi_j1 - sq_phi_j), q) : fac;
    if (f_min < f_max) {
      f_bar = f_min + f_min / f_max * (f_max - f_min);
      const double fq = std::pow(f_bar, -1.0 / q);
      sq_bar_j1 = (2.0 * sq_phi_j1 - fq * sq_phi_j) / (2.0 + fq);
      admissible = true;
    }
  } else if (q < 1e-14) {
    sq_bar_j1 = sq_phi_j1;
    const double f_min = fac * std::pow(sq_phi_j1 / (sq_phi_j1 - sq_phi_j), p);
    if (f_min < f_max) {
      f_bar = f_min + f_min / f_max * (f_max - f_min);
      const double fp = std::pow(f_bar, -1.0 / p);
      sq_bar_j = (2.0 * sq_phi_j + fp * sq_phi_j1) / (2.0 - fp);
      admissible = true;
    }
  } else {
    double f_min = fac * (sq_phi_j + sq_phi_j1) / std::pow(sq_phi_j1 - sq_phi_j, std::max(p, q));
    if (f_min < f_max) {
      f_min = std::max(f_min, 1.5);
      f_bar = f_min + f_min / f_max * (f_max - f_min);
      const double fp = std::pow(f_bar, -1.0 / p);
      const double fq = std::pow(f_bar, -1.0 / q);
      const double w = -phi_j1 * t / log_eps_target;
      const double den = 2.0 + w - (1.0 + w) * fp + fq;
      sq_bar_j = ((2.0 + w + fq) * sq_phi_j + fp * sq_phi_j1) / den;
      sq_bar_j1 = (-(1.0 + w) * fq * sq_phi_j + (2.0 + w - (1.0 + w) * fp) * sq_phi_j1) / den;
      admissible = true;
    }
  }

  ContourParams out;
  if (!admissible) return out;
  const double log_eps = log_eps_target - std::log(f_bar);
  const double w = -sq_bar_j1 * sq_bar_j1 * t / log_eps;
  const double sq_mu = ((1.0 + w) * sq_bar_j + sq_bar_j1) / (2.0 + w);
  out.mu = sq_mu * sq_mu;
  out.h = -2.0 * kPi / log_eps * (sq_bar_j1 - sq_bar_j) / ((1.0 + w) * sq_bar_j + sq_bar_j1);
  out.n = std::ceil(std::sqrt(1.0 - log_eps / t / out.mu) / out.h);
  return out;
}

// Parameters for the unbounded region to the right of the last singularity level.
ContourParams params_unbounded(double t, double phi_j, double p, double log_eps_target) {
  const double sq_phi_j = std::sqrt(phi_j);
  double phi_bar = phi_j > 0.0 ? phi_j * 1.01 : 0.01;
  double sq_phi_bar = std::sqrt(phi_bar);
  constexpr double f_min = 1.0;
  constexpr double f_max = 10.0;
  constexpr double f_tar = 5.0;

  double n = 0.0;
  double a = 0.0;
  double sq_mu = 0.0;
  for (int iter = 0; iter < 100; ++iter) {
    const double phi_t = phi_bar * t;
    const double log_eps_phi_t = log_eps_target / phi_t;
    n = std::ceil(phi_t / kPi * (1.0 - 1.5 * log_eps_phi_t + std::sqrt(1.0 - 2.0 * log_eps_phi_t)));
    a = kPi * n / phi_t;
    sq_mu = sq_phi_bar * std::abs(4.0 - a) / std::abs(7.0 - std::sqrt(1.0 + 12.0 * a));
    const double f_bar = std::pow((sq_phi_bar - sq_phi_j) / sq_mu, -p);
    if (p < 1e-14 || (f_min < f_bar && f_bar < f_max)) break;
    sq_phi_bar = std::pow(f_tar, -1.0 / p) * sq_mu + sq_phi_j;
    phi_bar = sq_phi_bar * sq_phi_bar;
  }

  ContourParams out;
  out.mu = sq_mu * sq_mu;
  out.h = (-3.0 * a - 2.0 + 2.0 * std::sqrt(1.0 + 12.0 * a)) / (4.0 - a) / n;
  out.n = n;

  // keep the exp(mu) growth of the integrand within the round-off budget
  const double threshold = (log_eps_target - kLogEps) / t;
  if (out.mu > threshold) {
    const double q = std::abs(p) < 1e-14 ? 0.0 : std::pow(f_tar, -1.0 / p) * std::sqrt(out.mu);
    const double phi_b = (q + sq_phi_j) * (q + sq_phi_j);
    if (phi_b < threshold) {
      const double w = std::sqrt(kLogEps / (kLogEps - log_eps_target));
      const double u = std::sqrt(-phi_b * t / kLogEps);
      out.mu = threshold;
      out.n = std::ceil(w * log_eps_target / 2.0 / kPi / (u * w - 1.0));
      out.h = std::sqrt(kLogEps / (kLogEps - log_eps_target)) / out.n;
    } else {
      out.n = std::numeric_limits<double>::infinity();
      out.h = 0.0;
    }
  }
  return out;
}


struct ContourOutcome {
  cplx value;
  double est;
};

ContourOutcome contour_sum(double alpha, cplx z, const ContourParams& cp, std::size_t region,
                           const std::vector<Pole>& poles, double abs_target) {
  const int n = static_cast<int>(cp.n);
  cplx integral{};
  double sq_magnitude = 0.0;
  for (int k = -n; k <= n; ++k) {
    const double u = cp.h * k;
    const cplx s = cp.mu * cplx(1.0, u) * cplx(1.0, u);
    const cplx ds = cplx(-2.0 * cp.mu * u, 2.0 * cp.mu);
    const cplx s_alpha = std::pow(s, alpha);
    const cplx term = std::exp(s) * (s_alpha / s) / (s_alpha - z) * ds;
    integral += term;
    sq_magnitude += std::norm(term);
  }
  const double scale = cp.h / (2.0 * kPi);
  integral = integral * scale / cplx(0.0, 1.0);

  // poles above the chosen region sit right of the contour
  cplx residues{};
  for (std::size_t i = region; i < poles.size(); ++i) residues += std::exp(poles[i].s) / alpha;

  cplx value = integral + residues;
  if (z.imag() == 0.0) value = cplx(value.real(), 0.0);

  // independent rounding of each node, plus the rounding of the residues
  const double eps = std::numeric_limits<double>::epsilon();
  const double roundoff = eps * (scale * std::sqrt(sq_magnitude * (2.0 * n + 1.0)) + std::abs(residues));
  const double abs_value = std::abs(value);
  const double est = abs_value > 0.0 ? (abs_target + roundoff) / abs_value + eps / 2.0
                                     : std::numeric_limits<double>::infinity();
  return {value, est};
}


// Largest |z|^k / Gamma(alpha k + 1) over k; bounds the cancellation the
// series suffers for arguments away from the positive real axis.
double series_peak_term(double alpha, double r) {
  if (r == 0.0) return 1.0;
  const double log_r = std::log(r);
  double best = 0.0;
  for (int k = 1; k < 100000; ++k) {
    const double v = k * log_r - std::lgamma(alpha * k + 1.0);
    if (v > best) {
      best = v;
    } else if (v < best - 2.0) {
      break;
    }
  }
  return std::exp(best);
}

constexpr double kSeriesRounding = 64.0 * std::numeric_limits<long double>::epsilon();

}  // namespace

const char* to_string(MLMethod m) noexcept {
  switch (m) {
    case MLMethod::series: return "series";
    case MLMethod::contour: return "contour";
    case MLMethod::exp_identity: return "exp_identity";
  }
  return "?";
}

double gamma_real(double x) {
  if (!std::isfinite(x)) throw Error(ErrorKind::domain, "gamma_real: non-finite argument");
  if (x <= 0.0 && x == std::floor(x)) throw Error(ErrorKind::domain, "gamma_real: pole at non-positive integer");
  if (x < 0.5) return kPi / (sin_pi(x) * gamma_positive(1.0 - x));
  return gamma_positive(x);
}

void MLArg::validate() const {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw Error(ErrorKind::domain, "Mittag-Leffler order must lie in (0, 1]");
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
    throw Error(ErrorKind::domain, "Mittag-Leffler argument must be finite");
}

cplx i_pow_neg(double alpha) { return std::polar(1.0, -alpha * kPi / 2.0); }

MLResult ml_series(const MLArg& a, double tol) {
  a.validate();
  if (!(tol > 0.0)) throw Error(ErrorKind::domain, "ml_series: tol must be positive");
  if (a.z == cplx{}) return {cplx{1.0, 0.0}, 0.0, MLMethod::series};

  using ld = long double;
  const ld eps_ld = std::numeric_limits<ld>::epsilon();
  const ld log_r = std::log(static_cast<ld>(std::abs(a.z)));
  const ld theta = std::atan2(static_cast<ld>(a.z.imag()), static_cast<ld>(a.z.real()));
  const ld alpha = a.alpha;

  std::complex<ld> sum{1.0L, 0.0L};
  ld rounding = eps_ld;  // accumulated absolute rounding budget of the terms
  ld prev = 1.0L;
  ld tail = std::numeric_limits<ld>::infinity();  // bound on the dropped terms
  bool converged = false;
  constexpr int kMaxTerms = 10000;
  for (int k = 1; k < kMaxTerms; ++k) {
    const ld lg = std::lgamma(alpha * static_cast<ld>(k) + 1.0L);
    const ld log_mag = static_cast<ld>(k) * log_r - lg;
    const ld mag = std::exp(log_mag);
    if (!std::isfinite(mag)) break;
    const ld phase = static_cast<ld>(k) * theta;
    sum += std::complex<ld>(mag * std::cos(phase), mag * std::sin(phase));
    rounding += eps_ld * mag * (4.0L + std::abs(static_cast<ld>(k) * log_r) + std::abs(lg) + std::abs(phase));
    // term ratios decrease monotonically once below one, so the tail is geometric-bounded
    const ld ratio = mag / prev;
    prev = mag;
    if (ratio < 1.0L) {
      tail = mag * ratio / (1.0L - ratio);
      if (tail < static_cast<ld>(tol) * std::abs(sum) / 4.0L) {
        converged = true;
        break;
      }
    }
  }

  const cplx value(static_cast<double>(sum.real()), static_cast<double>(sum.imag()));
  const ld abs_sum = std::abs(sum);
  const double est = abs_sum > 0.0L
                         ? static_cast<double>((rounding + tail) / abs_sum) +
                               std::numeric_limits<double>::epsilon() / 2.0
                         : std::numeric_limits<double>::infinity();
  if (!converged) throw EvaluationError("ml_series: no convergence within 10000 terms", value, est);
  if (!(est <= tol)) throw EvaluationError("ml_series: cancellation exceeds tolerance", value, est);
  return {value, est, MLMethod::series};
}

MLResult ml_contour(const MLArg& a, double tol) {
  a.validate();
  if (!(tol > 0.0)) throw Error(ErrorKind::domain, "ml_contour: tol must be positive");
  const double alpha = a.alpha;
  const cplx z = a.z;

  // poles s^alpha = z on the principal sheet
  std::vector<Pole> poles;
  if (z != cplx{}) {
    const double theta = std::arg(z);
    const double r = std::pow(std::abs(z), 1.0 / alpha);
    const int kmin = static_cast<int>(std::ceil(-alpha / 2.0 - theta / (2.0 * kPi)));
    const int kmax = static_cast<int>(std::floor(alpha / 2.0 - theta / (2.0 * kPi)));
    for (int k = kmin; k <= kmax; ++k) {
      const cplx s = std::polar(r, (theta + 2.0 * kPi * k) / alpha);
      const double phi = (s.real() + std::abs(s)) / 2.0;
      if (phi > 1e-15) poles.push_back({s, phi});
    }
    std::sort(poles.begin(), poles.end(), [](const Pole& x, const Pole& y) { return x.phi < y.phi; });
  }

  // singularity levels: origin (branch point) followed by the poles
  std::vector<double> phi{0.0};
  for (const auto& p : poles) phi.push_back(p.phi);
  const std::size_t levels = phi.size();
  std::vector<double> p_str(levels, 1.0);
  p_str[0] = 0.0;  // s^(alpha-1) is integrable at the origin
  std::vector<double> q_str(levels, 1.0);
  q_str.back() = std::numeric_limits<double>::infinity();
  phi.push_back(std::numeric_limits<double>::infinity());

  // pick the admissible region needing the fewest nodes; relax the target
  // by decades while that exceeds the node cap
  auto select = [&](double log_eps_target, std::size_t& region) {
    ContourParams best;
    for (;;) {
      best = ContourParams{};
      for (std::size_t j = 0; j < levels; ++j) {
        if (!(phi[j] < log_eps_target - kLogEps && phi[j] < phi[j + 1])) continue;
        const ContourParams c = j + 1 < levels
                                    ? params_bounded(1.0, phi[j], phi[j + 1], p_str[j], q_str[j], log_eps_target)
                                    : params_unbounded(1.0, phi[j], p_str[j], log_eps_target);
        if (c.n < best.n && c.h > 0.0) {
          best = c;
          region = j;
        }
      }
      if (best.n <= kMaxContourHalfNodes || log_eps_target > std::log(1e-3)) break;
      log_eps_target += std::log(10.0);
    }
    return std::pair{best, log_eps_target};
  };

  // the contour target is an absolute error; rescale it by |E| once the
  // magnitude is known
  constexpr double kMinTarget = 1e-16;
  double target = tol / 2.0;
  ContourOutcome outcome{cplx{std::nan(""), std::nan("")}, std::numeric_limits<double>::infinity()};
  for (int attempt = 0; attempt < 3; ++attempt) {
    std::size_t region = 0;
    const auto [cp, log_eps_used] = select(std::log(target), region);
    if (!(cp.n <= kMaxContourHalfNodes)) break;
    outcome = contour_sum(alpha, z, cp, region, poles, std::exp(log_eps_used));
    if (outcome.est <= tol) return {outcome.value, outcome.est, MLMethod::contour};
    const double next = std::max(kMinTarget, target * std::min(1.0, std::abs(outcome.value)) / 4.0);
    if (!(next < target)) break;
    target = next;
  }
  throw EvaluationError("ml_contour: tolerance unreachable", outcome.value, outcome.est);
}

MLResult ml_eval(const MLArg& a, double tol) {
  a.validate();
  if (!(tol >= 1e-14 && tol <= 1e-6)) throw Error(ErrorKind::domain, "ml_eval: tol must lie in [1e-14, 1e-6]");
  if (a.alpha == 1.0) return {std::exp(a.z), std::numeric_limits<double>::epsilon(), MLMethod::exp_identity};
  if (std::abs(a.z) <= kSeriesSwitchRadius && series_peak_term(a.alpha, std::abs(a.z)) * kSeriesRounding <= tol) {
    try {
      return ml_series(a, tol);
    } catch (const EvaluationError&) {
      // cancellation too strong for this argument; fall through to the contour
    }
  }
  return ml_contour(a, tol);
}

}  // namespace ftjc
