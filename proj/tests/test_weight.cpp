#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "helpers.hpp"
#include "ineqlab/weight.hpp"

using namespace ineqlab;
using Catch::Approx;

TEST_CASE("alpha cost basics") {
  CHECK(alpha(0.0) == 0.0);
  CHECK(alpha(0.5) == Approx(0.25).margin(0));
  CHECK(alpha(2.0) == Approx(2.0).margin(0));
  CHECK(alpha(-0.3) == Approx(0.09).epsilon(1e-15));
  double prev = -1;
  for (double u = 0; u <= 10.0; u += 0.01) {
    const double v = alpha(u);
    CHECK(v >= prev);
    if (u <= 1.0)
      CHECK(v == Approx(u * u).epsilon(1e-15));
    else
      CHECK(v == Approx(u).epsilon(1e-15));
    prev = v;
  }
}

TEST_CASE("kappa and its square") {
  const double k = kappa();
  CHECK(k > 12.0);
  CHECK(k < 13.0);
  CHECK(k == Approx(12.977536064246581).epsilon(1e-14));
  CHECK(kappa_sq() == Approx(18.0 * std::exp(std::sqrt(5.0))).epsilon(1e-15));
  CHECK(kappa_sq() == Approx(168.41644229882065).epsilon(1e-14));
  CHECK(kappa_sq() == Approx(k * k).epsilon(1e-14));
}

TEST_CASE("concentration rate K(C)") {
  CHECK(concentration_rate(4.0) == Approx(9.27759771357515e-5).epsilon(1e-12));
  CHECK(std::fabs(concentration_rate(4.0) - 9.28e-5) <= 1e-7);
  CHECK(concentration_rate(1.0 / kappa_sq()) == Approx(1.0 / 16.0).epsilon(1e-13));
  double prev = kInf;
  for (double c : {0.01, 0.1, 0.5, 1.0, 2.0, 4.0, 10.0, 100.0, 1e4}) {
    const double v = concentration_rate(c);
    CHECK(v <= prev + 1e-18);
    prev = v;
  }
  CHECK_THROWS_AS(concentration_rate(0.0), InvalidParameter);
  CHECK_THROWS_AS(concentration_rate(-1.0), InvalidParameter);
}

TEST_CASE("omega_p evaluation, derivative, inverse") {
  auto w2 = omega_p_make(2.0);
  CHECK(w2.eval(0.5) == Approx(0.5).margin(0));
  CHECK(w2.eval(3.0) == Approx(9.0).margin(0));
  CHECK(w2.eval(-3.0) == Approx(-9.0).margin(0));
  CHECK(w2.deriv1(0.5) == 1.0);
  CHECK(w2.deriv1(3.0) == Approx(6.0).epsilon(1e-15));
  CHECK(w2.deriv1(1.0) == Approx(2.0).epsilon(1e-15));  // right-hand value

  auto w1 = omega_p_make(1.0);
  for (double x : {-7.0, -0.3, 0.0, 0.4, 2.0, 100.0})
    CHECK(w1.eval(x) == Approx(x).margin(1e-300));

  auto w3 = omega_p_make(3.0);
  for (double t = 0.01; t < 60.0; t *= 1.7) {
    for (const auto* w : {&w2, &w3}) {
      const double y = w->eval(t);
      CHECK(w->inverse(y) == Approx(t).epsilon(1e-10));
      CHECK(w->inverse(-y) == Approx(-t).epsilon(1e-10));
    }
  }
  // Second/third derivatives match finite differences away from kinks.
  for (double t : {0.3, 2.0, 5.0}) {
    const double fd = testutil::fd1([&](double x) { return w3.deriv1(x); }, t, 1e-5);
    CHECK(w3.deriv2(t) == Approx(fd).margin(1e-4 * (1 + std::fabs(fd))));
  }
  CHECK_THROWS_AS(omega_p_make(0.5), InvalidParameter);
}

TEST_CASE("scaled weight") {
  auto w2 = omega_p_make(2.0);
  auto s = scaled_weight(w2, 2.0);
  for (double x : {-1.3, 0.1, 0.49, 0.51, 2.0, 7.0}) {
    CHECK(s.eval(x) == Approx(w2.eval(2 * x)).margin(1e-300));
    CHECK(s.deriv1(x) == Approx(2 * w2.deriv1(2 * x)).epsilon(1e-15));
    CHECK(s.inverse(s.eval(x)) == Approx(x).margin(1e-12 * (1 + std::fabs(x))));
  }
  CHECK(admissibility_check(s, 2000).ok);
  CHECK_THROWS_AS(scaled_weight(w2, 0.0), InvalidParameter);
}

TEST_CASE("BGL profile and two-branch cost") {
  auto p = make_bgl_profile(1.0, 1.0);
  CHECK(p.L == Approx(42.104110574705163).epsilon(1e-14));
  // 4 L(1;1) equals kappa^2 exactly in closed form.
  CHECK(4.0 * p.L == Approx(kappa_sq()).epsilon(1e-14));

  CHECK(alpha_s(0.0, p) == 0.0);
  const double knee = 2.0 * p.L * p.s;
  CHECK(alpha_s(knee, p) == Approx(p.L * p.s * p.s).epsilon(1e-13));
  CHECK(std::fabs(alpha_s(std::nextafter(knee, 0.0), p) -
                  alpha_s(std::nextafter(knee, 1e9), p)) < 1e-12 * knee);

  // Dominates the base cost at kappa scale (C=1, s=1).
  for (double t = 0.0; t <= 300.0; t += 0.05) {
    CHECK(alpha_s(t, p) >= alpha(t / kappa()) - testutil::slack(alpha_s(t, p)));
  }
  CHECK_THROWS_AS(make_bgl_profile(1.0, 2.0), InvalidParameter);
  CHECK_THROWS_AS(make_bgl_profile(4.0, 1.0), InvalidParameter);
  CHECK_THROWS_AS(make_bgl_profile(-1.0, 0.5), InvalidParameter);
}

TEST_CASE("omega_T for the power family") {
  auto prof = beckner_power_profile(2.0);
  CHECK(prof.power_r == 2.0);
  CHECK(prof.ratio_non_increasing);
  auto w = omega_T_build(prof, 1e-10);

  CHECK(w.eval(2.0) == Approx(2.5).margin(1e-9));
  for (double t = 0.05; t <= 1.0; t += 0.05)
    CHECK(w.eval(t) == Approx(t).margin(1e-13));
  for (double t = 1.0; t <= 50.0; t += 0.7) {
    CHECK(w.eval(t) == Approx(t * t / 2 + 0.5).margin(1e-8));
    CHECK(w.deriv1(t) == Approx(std::max(1.0, t)).epsilon(1e-14));
    const double y = w.eval(t);
    CHECK(w.inverse(y) == Approx(t).epsilon(1e-10));
  }
  CHECK(w.eval(-2.0) == Approx(-2.5).margin(1e-9));

  for (double r : {1.2, 1.5, 3.0}) {
    auto wr = omega_T_build(beckner_power_profile(r), 1e-10);
    for (double t : {1.5, 4.0, 20.0, 50.0}) {
      const double want = std::pow(t, r) / r + 1.0 - 1.0 / r;
      CHECK(wr.eval(t) == Approx(want).margin(1e-8 * (1 + want)));
      CHECK(wr.inverse(wr.eval(t)) == Approx(t).epsilon(1e-10));
    }
  }

  // r=1 means T == 1 and the weight collapses to the identity.
  auto w1 = omega_T_build(beckner_power_profile(1.0), 1e-10);
  for (double t : {0.2, 1.0, 3.0, 17.0})
    CHECK(w1.eval(t) == Approx(t).margin(1e-12 * (1 + t)));
}

TEST_CASE("omega_T general route uses the literal integral") {
  // Piecewise-linear samples of T(u) = u (the r=2 profile shape).  The
  // literal construction tabulates w^{-1}(t) = int_0^t sqrt(T(1/u)) du,
  // giving w^{-1}(t) = 2 sqrt(t) - 1 for t >= 1, i.e. w(x) = ((x+1)/2)^2.
  std::vector<double> us, Ts;
  for (int i = 0; i <= 64; ++i) {
    us.push_back(i / 64.0);
    Ts.push_back(i / 64.0);
  }
  auto prof = beckner_table_profile("lin64", us, Ts);
  CHECK(prof.power_r == 0.0);
  CHECK(prof.ratio_non_increasing);
  auto w = omega_T_build(prof, 1e-10);

  CHECK(w.eval(2.0) == Approx(2.25).margin(1e-8));
  CHECK(w.inverse(3.0) == Approx(2.0 * std::sqrt(3.0) - 1.0).margin(1e-9));
  CHECK(w.deriv1(2.0) == Approx(1.5).epsilon(1e-8));
  for (double t = 0.1; t <= 1.0; t += 0.1)
    CHECK(w.eval(t) == Approx(t).margin(1e-12));
  for (double t = 1.0; t <= 40.0; t += 0.83) {
    CHECK(w.eval(t) == Approx(ineqlab::sq((t + 1.0) / 2.0)).margin(1e-7));
    CHECK(w.inverse(w.eval(t)) == Approx(t).epsilon(1e-9));
  }
}

TEST_CASE("omega_T build failure when the defining integral converges") {
  // T vanishes on [0, 1/2]: sqrt(T(1/u)) = 0 for u >= 2 and the inverse
  // integral can never cover the half-line.
  auto prof = beckner_table_profile("flat-zero", {0.0, 0.5, 1.0}, {0.0, 0.0, 1.0});
  CHECK_THROWS_AS(omega_T_build(prof, 1e-10), BuildFailure);
}

TEST_CASE("theta construction") {
  auto id = theta_build(beckner_power_profile(1.0));
  CHECK(id(0.0) == 0.0);
  for (double x : {0.1, 0.5, 3.0}) CHECK(id(x) == Approx(x).epsilon(1e-14));

  // T(u) = u, i.e. the power profile with r = 2.  For x below 1/(e-1) the
  // profile is evaluated inside [0,1] and theta(x) = x log(1+1/x); beyond
  // that the T(x)=T(1) extension pins the denominator at 1.
  auto th = theta_build(beckner_power_profile(2.0));
  CHECK(th(0.3) == Approx(0.43990112063802811).epsilon(1e-13));
  CHECK(th(0.3) == Approx(0.3 * std::log1p(1.0 / 0.3)).epsilon(1e-13));
  CHECK(th(1.0) == Approx(1.0).epsilon(1e-13));
  CHECK(th(5.0) == Approx(5.0).epsilon(1e-13));

  // Monotone and sub-additive on a dense grid, for several profiles.
  for (double r : {1.2, 1.5, 2.0}) {
    auto t = theta_build(beckner_power_profile(r));
    double prev = 0;
    for (double x = 1e-4; x <= 20.0; x *= 1.03) {
      const double v = t(x);
      CHECK(v >= prev - testutil::slack(v));
      prev = v;
    }
    for (double x = 0.05; x <= 2.0; x += 0.13)
      for (double y = 0.05; y <= 2.0; y += 0.17)
        CHECK(t(x + y) <= t(x) + t(y) + testutil::slack(t(x + y)));
  }
  // r = 4/3 gives T(u) = sqrt(u); the sampled sub-additivity case.
  auto ts = theta_build(beckner_power_profile(4.0 / 3.0));
  CHECK(ts(0.5) <= ts(0.3) + ts(0.2) + 1e-12);

  CHECK_THROWS_AS(theta_build(beckner_power_profile(3.0)), InvalidParameter);
}

TEST_CASE("weight lemmas hold for every family") {
  std::vector<WeightFunction> ws;
  ws.push_back(identity_weight());
  ws.push_back(omega_p_make(1.5));
  ws.push_back(omega_p_make(2.0));
  ws.push_back(omega_p_make(3.0));
  ws.push_back(omega_T_build(beckner_power_profile(1.5), 1e-10));

  testutil::TestRng rng(20240817);
  for (const auto& w : ws) {
    for (int i = 0; i < 10000; ++i) {
      const double x = rng.uniform(0.0, 30.0), y = rng.uniform(0.0, 30.0);
      const double sum = w.eval(x + y);
      CHECK(sum >= w.eval(x) + w.eval(y) - testutil::slack(sum));

      const double a = rng.uniform(-30.0, 30.0), b = rng.uniform(-30.0, 30.0);
      const double gap = std::fabs(w.eval(a) - w.eval(b));
      CHECK(gap >= w.eval(std::fabs(a - b) / 2.0) - testutil::slack(gap));
    }
  }
  for (int i = 0; i < 100000; ++i) {
    const double a = rng.uniform(0.0, 10.0), u = rng.uniform(0.0, 10.0);
    CHECK(alpha(a * u) >= alpha(a) * alpha(u) - testutil::slack(alpha(a * u)));
    const double x = rng.uniform(0.0, 10.0), y = rng.uniform(0.0, 10.0);
    CHECK(alpha(x + y) <= 2.0 * (alpha(x) + alpha(y)) + testutil::slack(alpha(x + y)));
  }
}

TEST_CASE("admissibility checker") {
  for (const auto& w :
       {identity_weight(), omega_p_make(1.5), omega_p_make(2.0),
        omega_T_build(beckner_power_profile(1.5), 1e-10)}) {
    auto rep = admissibility_check(w, 2000);
    INFO(w.id << " drop=" << rep.max_ratio_drop);
    CHECK(rep.ok);
  }
  // Sub-linear ratio (concave) must be rejected.
  WeightFunction bad = identity_weight();
  bad.id = "bad";
  bad.eval = [](double x) { return x / (1.0 + std::fabs(x)); };
  auto rep = admissibility_check(bad, 2000);
  CHECK_FALSE(rep.ok);
}
