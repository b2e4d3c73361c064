#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "ftjc/error.hpp"
#include "ftjc/inverse_problem.hpp"

using namespace ftjc;

namespace {

struct Series {
  std::vector<double> t, w;
};

Series sampled(double t_end, double dt, auto&& f) {
  Series s;
  const auto steps = static_cast<int>(std::lround(t_end / dt));
  for (int k = 0; k <= steps; ++k) {
    s.t.push_back(k * dt);
    s.w.push_back(f(s.t.back()));
  }
  return s;
}

CouplingProfile constant_profile(double gamma, double t_end, double dt) {
  CouplingProfile p;
  const auto steps = static_cast<int>(std::lround(t_end / dt));
  for (int k = 0; k <= steps; ++k) {
    p.t.push_back(k * dt);
    p.gamma.push_back(gamma);
  }
  p.singular.assign(p.t.size(), 0);
  return p;
}

}  // namespace

TEST_CASE("constant coupling from a cosine inversion") {
  const auto s = sampled(25.0, 1e-3, [](double t) { return std::cos(2.0 * t); });
  for (auto scheme : {DerivativeScheme::central2, DerivativeScheme::central4}) {
    const auto p = extract_coupling(s.t, s.w, scheme);
    CHECK(p.singular[0] == 1);
    double worst = 0.0;
    for (std::size_t i = 0; i < p.gamma.size(); ++i) worst = std::max(worst, std::abs(p.gamma[i] - 1.0));
    CHECK(worst <= 1e-6);
    CHECK(p.theta_gamma == 0.0);
  }
}

TEST_CASE("frozen inversion gives zero coupling") {
  const auto s = sampled(5.0, 1e-2, [](double) { return 1.0; });
  const auto p = extract_coupling(s.t, s.w);
  CHECK(p.singular_count() == p.t.size());
  for (double g : p.gamma) CHECK(g == 0.0);
  const auto f = forward_two_level(p);
  for (double w : f.w) CHECK(w == 1.0);
}

TEST_CASE("extraction rejects unphysical input") {
  auto s = sampled(1.0, 1e-2, [](double t) { return std::cos(t); });
  s.w[10] = 1.0 + 1e-9;
  CHECK_THROWS_AS(extract_coupling(s.t, s.w), Error);
  auto u = sampled(1.0, 1e-2, [](double t) { return std::cos(t); });
  u.t[5] += 3e-3;
  CHECK_THROWS_AS(extract_coupling(u.t, u.w), Error);
  const std::vector<double> few{0.0, 0.1, 0.2, 0.3};
  CHECK_THROWS_AS(extract_coupling(few, few, DerivativeScheme::central4), Error);
}

TEST_CASE("gauge record follows the sign of dW/dt") {
  const auto s = sampled(3.0, 1e-3, [](double t) { return std::cos(2.0 * t); });
  const auto p = extract_coupling(s.t, s.w);
  CHECK(p.gauge.h[500] == 0);  // W falling
  CHECK(p.gauge.theta[500] == doctest::Approx(-std::numbers::pi / 2));
  CHECK(p.gauge.h[2000] == 1);  // W rising
  CHECK(p.gauge.theta[2000] == doctest::Approx(std::numbers::pi / 2));
}

TEST_CASE("singular cells are filled by linear extrapolation") {
  auto s = sampled(2.0, 1e-2, [](double t) { return std::cos(2.0 * t); });
  const auto p = extract_coupling(s.t, s.w);
  // cell 0 extrapolates cells 1 and 2
  CHECK(p.gamma[0] == doctest::Approx(2.0 * p.gamma[1] - p.gamma[2]).epsilon(1e-12));
}

TEST_CASE("forward integration of constant couplings") {
  const auto one = forward_two_level(constant_profile(1.0, 30.0, 1e-2));
  double worst = 0.0;
  for (std::size_t k = 0; k < one.w.size(); ++k) worst = std::max(worst, std::abs(one.w[k] - std::cos(2.0 * k * 1e-2)));
  CHECK(worst <= 1e-8);
  CHECK(one.norm_drift <= 1e-8);
  CHECK(one.substeps_used == 4);

  const auto zero = forward_two_level(constant_profile(0.0, 5.0, 1e-2));
  for (double w : zero.w) CHECK(w == 1.0);
}

TEST_CASE("coupling phase does not change the inversion") {
  auto p = constant_profile(1.0, 20.0, 1e-2);
  for (std::size_t k = 0; k < p.gamma.size(); ++k) p.gamma[k] = 0.5 + 0.4 * std::sin(0.7 * p.t[k]);
  ForwardOptions base;
  base.a_e0 = std::sqrt(0.7);
  base.a_g0 = std::polar(std::sqrt(0.3), 0.4);
  const auto ref = forward_two_level(p, base);
  for (double phi : {0.0, std::numbers::pi / 4, std::numbers::pi / 2}) {
    ForwardOptions o = base;
    o.phi = phi;
    o.a_g0 = base.a_g0 * std::polar(1.0, -phi);
    const auto f = forward_two_level(p, o);
    for (std::size_t k = 0; k < f.w.size(); ++k) CHECK(std::abs(f.w[k] - ref.w[k]) <= 1e-10);
  }
}

TEST_CASE("norm drift triggers refinement, then a step-size error") {
  const auto stiff = constant_profile(60.0, 10.0, 1e-1);
  try {
    forward_two_level(stiff);
    FAIL("expected step_size");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::step_size);
  }
  const auto moderate = constant_profile(8.0, 10.0, 1e-1);
  const auto f = forward_two_level(moderate);
  CHECK(f.substeps_used == 32);
  CHECK(f.norm_drift <= 1e-6);
}

TEST_CASE("forward rejects malformed profiles") {
  auto p = constant_profile(1.0, 1.0, 1e-2);
  p.gamma[3] = -0.1;
  CHECK_THROWS_AS(forward_two_level(p), Error);
  p.gamma[3] = std::nan("");
  CHECK_THROWS_AS(forward_two_level(p), Error);
}

TEST_CASE("round trip at alpha = 1 is exact to integration accuracy") {
  const auto r = roundtrip_report(1.0, 1.0, 10.0);
  CHECK(r.max_abs_err <= 1e-6);
  CHECK(r.plateau_mean == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("round trip at alpha = 3/4") {
  const auto r = roundtrip_report(0.75, 1.0, 8.0 * std::numbers::pi);
  CHECK(r.max_abs_err <= 1e-3);
  CHECK(r.t.front() == doctest::Approx(1e-3));
}

TEST_CASE("initial coupling spike sharpens as the order decreases") {
  const auto half = roundtrip_report(0.5, 1.0, 8.0 * std::numbers::pi);
  const auto quarter = roundtrip_report(0.25, 1.0, 8.0 * std::numbers::pi);
  CHECK(quarter.gamma_t1 > half.gamma_t1);
  CHECK(half.gamma_t1 > 5.0 * half.plateau_mean);
  CHECK(half.plateau_mean >= 0.4);
  CHECK(half.plateau_mean <= 0.6);
  CHECK(half.max_abs_err <= 1e-2);
}

TEST_CASE("round trip validates its inputs") {
  CHECK_THROWS_AS(roundtrip_report(0.5, -1.0, 10.0), Error);
  CHECK_THROWS_AS(roundtrip_report(0.5, 1.0, 0.05), Error);
  CHECK_THROWS_AS(roundtrip_report(1.5, 1.0, 10.0), Error);
}
