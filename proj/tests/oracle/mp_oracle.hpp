#pragma once

// High-precision reference implementations used only by the test suite.
// Everything here works in MPFR arithmetic and is written independently of
// the library code paths it checks.

#include <boost/multiprecision/mpfr.hpp>

#include <cmath>
#include <complex>
#include <vector>

namespace ftjc::oracle {

using mp = boost::multiprecision::mpfr_float;

struct mpc {
  mp re;
  mp im;

  mpc() : re(0), im(0) {}
  mpc(mp r, mp i) : re(std::move(r)), im(std::move(i)) {}
  explicit mpc(std::complex<double> z) : re(z.real()), im(z.imag()) {}

  friend mpc operator+(const mpc& a, const mpc& b) { return {a.re + b.re, a.im + b.im}; }
  friend mpc operator-(const mpc& a, const mpc& b) { return {a.re - b.re, a.im - b.im}; }
  friend mpc operator*(const mpc& a, const mpc& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend mpc operator*(const mpc& a, const mp& s) { return {a.re * s, a.im * s}; }
  friend mpc operator/(const mpc& a, const mp& s) { return {a.re / s, a.im / s}; }
  friend mpc operator/(const mpc& a, const mpc& b) {
    const mp d = b.re * b.re + b.im * b.im;
    return {(a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d};
  }
  mpc conj() const { return {re, -im}; }
  mp norm() const { return re * re + im * im; }
  mp abs() const { return sqrt(norm()); }
  std::complex<double> to_double() const { return {static_cast<double>(re), static_cast<double>(im)}; }
};

inline mpc mp_polar(const mp& r, const mp& phase) { return {r * cos(phase), r * sin(phase)}; }

inline mpc mp_exp(const mpc& z) { return mp_polar(exp(z.re), z.im); }

/// Principal-branch complex logarithm.
inline mpc mp_log(const mpc& z) { return {log(z.abs()), atan2(z.im, z.re)}; }

/// Scoped MPFR working precision (decimal digits).
class Precision {
 public:
  explicit Precision(unsigned digits) : saved_(mp::default_precision()) { mp::default_precision(digits); }
  ~Precision() { mp::default_precision(saved_); }
  Precision(const Precision&) = delete;
  Precision& operator=(const Precision&) = delete;

 private:
  unsigned saved_;
};

/// Number of extra decimal digits lost to cancellation in sum_k z^k / Gamma(alpha k + 1).
inline unsigned cancellation_digits(double alpha, double r) {
  if (r == 0.0) return 0;
  double best = 0.0;
  for (int k = 1; k < 200000; ++k) {
    const double v = k * std::log(r) - std::lgamma(alpha * k + 1.0);
    best = std::max(best, v);
    if (k > 20 && v < best - 100.0) break;
  }
  return static_cast<unsigned>(best / std::log(10.0)) + 1;
}

/// E_alpha(z) by direct summation with `digits` significant decimal digits
/// left after cancellation.
inline mpc ml_series(const mp& alpha_in, const mpc& z_in, unsigned digits = 200) {
  const unsigned extra = cancellation_digits(static_cast<double>(alpha_in), static_cast<double>(z_in.abs()));
  const unsigned working = digits + extra + 20;
  Precision guard(working);
  // operands keep the precision they were created with, so lift them first
  const mp alpha(alpha_in, working);
  const mpc z{mp(z_in.re, working), mp(z_in.im, working)};
  mpc sum{mp(1), mp(0)};
  mpc power{mp(1), mp(0)};
  const mp threshold = pow(mp(10), -static_cast<int>(digits) - 10);
  int quiet = 0;
  for (int k = 1; k < 200000; ++k) {
    power = power * z;
    const mpc term = power / boost::multiprecision::tgamma(alpha * k + 1);
    sum = sum + term;
    if (term.abs() < threshold * sum.abs()) {
      if (++quiet == 5) break;
    } else {
      quiet = 0;
    }
  }
  return sum;
}

inline std::complex<double> ml_series(double alpha, std::complex<double> z, unsigned digits = 200) {
  Precision guard(digits + 20);
  return ml_series(mp(alpha), mpc(z), digits).to_double();
}

/// E_{1/2}(z) = exp(z^2) erfc(-z), with erf from its Maclaurin series.
inline std::complex<double> ml_half_via_erfc(std::complex<double> zd, unsigned digits = 100) {
  // erfc(-z) is as small as e^{-|z|^2} after cancelling terms as large as e^{|z|^2}
  const unsigned extra = static_cast<unsigned>(2.0 * std::norm(zd) / std::log(10.0)) + 5;
  Precision guard(digits + extra + 20);
  const mpc z(zd);
  const mpc z2 = z * z;
  mpc power = z;  // z^(2n+1) (-1)^n / n!
  mpc erf_sum = z;
  const mp threshold = pow(mp(10), -static_cast<int>(digits + extra));  // absolute: erf is near -1
  for (int n = 1; n < 100000; ++n) {
    power = power * z2 / mp(-n);
    const mpc term = power / mp(2 * n + 1);
    erf_sum = erf_sum + term;
    if (term.abs() < threshold * erf_sum.abs() && n > 5) break;
  }
  const mp pi = boost::multiprecision::mpfr_float(boost::math::constants::pi<mp>());
  const mpc erf_z = erf_sum * (mp(2) / sqrt(pi));
  const mpc erfc_minus_z = mpc{mp(1), mp(0)} + erf_z;
  return (mp_exp(z2) * erfc_minus_z).to_double();
}

/// Amplitudes and Dyson-map data of one block computed end to end in high
/// precision from the closed-form expressions (identity initial map, principal
/// logarithm of D, so only valid while arg D stays inside (-pi, pi]).
struct BlockReference {
  std::complex<double> c, s, d, lambda;
  double kappa, chi, cap_lambda, delta;
  std::complex<double> w_plus, w_minus;
  /// u(t) applied to |e,n>: amplitudes on |e,n> and |g,n+1>
  std::complex<double> amp_e, amp_g;
};

inline BlockReference block_reference(double alpha_d, double mu_d, int n, double t_d, unsigned digits = 60) {
  Precision guard(digits + 20);
  const mp alpha(alpha_d);
  const mp pi = boost::math::constants::pi<mp>();
  const mpc ia = mp_polar(mp(1), -alpha * pi / 2);
  const mpc m1 = mp_polar(mp(1), -alpha * pi);
  const mp r = mp(mu_d) * sqrt(mp(n + 1)) * pow(mp(t_d), alpha);
  const mpc w = ia * r;
  const mpc ep = ml_series(alpha, w, digits);
  const mpc em = ml_series(alpha, mpc{} - w, digits);
  const mpc c = (ep + em) / mp(2);
  const mpc s = (ep - em) / (ia * mp(2));
  const mpc d = c * c - m1 * s * s;
  const mpc log_d = mp_log(d);

  const mpc zeta_p = ia * s;
  const mpc zeta_m = mpc{} - c;
  const mpc xi_p = c;
  const mpc xi_m = mpc{} - ia * s;
  const mp e_re = exp(log_d.re);
  const mp den = xi_p.norm() + xi_m.norm() + e_re;
  const mp chi = (zeta_p.norm() + zeta_m.norm() + e_re) / den;
  const mpc lambda = mpc{} - (xi_p * zeta_p.conj() + xi_m * zeta_m.conj()) / den;
  const mp kappa = -log_d.re / 2;
  const mp cap_lambda = chi - lambda.norm();
  const mp delta = log_d.im / 2;
  const mp f = exp(kappa) / sqrt(cap_lambda);
  const mpc nu_p = (zeta_p + lambda.conj() * xi_p) * f;
  const mpc nu_m = (zeta_m + lambda.conj() * xi_m) * (-f);
  const mpc phase = mp_polar(mp(1), delta);
  const mpc w_plus = phase * nu_m.conj();
  const mpc w_minus = mpc{} - phase * nu_p.conj();
  // u = e^{i delta} [[w+, w-], [-conj(w-), conj(w+)]], first column acts on |e,n>
  const mpc amp_e = phase * w_plus;
  const mpc amp_g = mpc{} - phase * w_minus.conj();

  BlockReference out;
  out.c = c.to_double();
  out.s = s.to_double();
  out.d = d.to_double();
  out.lambda = lambda.to_double();
  out.kappa = static_cast<double>(kappa);
  out.chi = static_cast<double>(chi);
  out.cap_lambda = static_cast<double>(cap_lambda);
  out.delta = static_cast<double>(delta);
  out.w_plus = w_plus.to_double();
  out.w_minus = w_minus.to_double();
  out.amp_e = amp_e.to_double();
  out.amp_g = amp_g.to_double();
  return out;
}

}  // namespace ftjc::oracle
