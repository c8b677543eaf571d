#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "helpers.hpp"
#include "ineqlab/metric.hpp"

using namespace ineqlab;
using Catch::Approx;

TEST_CASE("weighted distance") {
  auto id = identity_weight();
  auto w2 = omega_p_make(2.0);

  CHECK(d_omega({1.0, 2.0}, {1.0, 2.0}, w2) == 0.0);
  CHECK(d_omega({0.0, 0.0}, {3.0, 4.0}, id) == Approx(5.0).epsilon(1e-15));
  CHECK(d_omega({0.0}, {3.0}, w2) == Approx(9.0).epsilon(1e-15));
  CHECK_THROWS_AS(d_omega({0.0}, {1.0, 2.0}, id), SizeError);

  // Metric axioms on random triples (omega injective everywhere).
  testutil::TestRng rng(7011);
  for (int i = 0; i < 100000; ++i) {
    std::vector<double> x(3), y(3), z(3);
    for (int k = 0; k < 3; ++k) {
      x[k] = rng.uniform(-5, 5);
      y[k] = rng.uniform(-5, 5);
      z[k] = rng.uniform(-5, 5);
    }
    const double dxy = d_omega(x, y, w2), dyx = d_omega(y, x, w2);
    CHECK(dxy == Approx(dyx).margin(1e-12));
    CHECK(dxy >= 0.0);
    CHECK(d_omega(x, y, w2) <=
          d_omega(x, z, w2) + d_omega(z, y, w2) + testutil::slack(dxy));
  }
}

TEST_CASE("weighted gradient length") {
  auto id = identity_weight();
  auto w2 = omega_p_make(2.0);

  CHECK(grad_length_weighted({0.0, 0.0, 0.0}, {1.0, 2.0, 3.0}, w2) == 0.0);
  CHECK(grad_length_weighted({3.0, 4.0}, {0.5, 0.5}, id) == Approx(5.0).epsilon(1e-15));
  CHECK(grad_length_weighted({8.0}, {2.0}, w2) == Approx(2.0).epsilon(1e-15));

  WeightFunction flat = identity_weight();
  flat.deriv1 = [](double) { return 0.0; };
  CHECK_THROWS_AS(grad_length_weighted({1.0}, {0.0}, flat), SingularWeight);

  // Identity consistency on random data.
  testutil::TestRng rng(7013);
  for (int i = 0; i < 1000; ++i) {
    std::vector<double> g(4), x(4);
    for (int k = 0; k < 4; ++k) {
      g[k] = rng.uniform(-3, 3);
      x[k] = rng.uniform(-3, 3);
    }
    double e = 0;
    for (double v : g) e += v * v;
    CHECK(grad_length_weighted(g, x, id) == Approx(std::sqrt(e)).epsilon(1e-12));
  }
}

TEST_CASE("chain identity for compositions with the weight") {
  // For f smooth and x random, the weighted gradient length of f(omega(.))
  // at x equals the Euclidean gradient length of f at omega(x).
  auto w2 = omega_p_make(2.0);
  testutil::TestRng rng(7017);
  for (int trial = 0; trial < 200; ++trial) {
    const double a = rng.uniform(-1, 1), b = rng.uniform(-1, 1),
                 c = rng.uniform(-1, 1);
    auto f = [a, b, c](double u, double v) {
      return a * u * u + b * u * v + c * v;
    };
    std::vector<double> x = {rng.uniform(0.2, 3.0), rng.uniform(0.2, 3.0)};
    // Avoid the kink of omega_2 at 1.
    for (auto& xi : x)
      if (std::fabs(xi - 1.0) < 0.05) xi += 0.1;
    std::vector<double> grad_fw(2);
    for (int k = 0; k < 2; ++k) {
      const double step = 1e-6 * (1 + std::fabs(x[k]));
      auto eval = [&](double t) {
        std::vector<double> p = x;
        p[k] = t;
        return f(w2.eval(p[0]), w2.eval(p[1]));
      };
      grad_fw[k] = (eval(x[k] + step) - eval(x[k] - step)) / (2 * step);
    }
    const double lhs = grad_length_weighted(grad_fw, x, w2);
    const double u = w2.eval(x[0]), v = w2.eval(x[1]);
    const double fu = 2 * a * u + b * v, fv = b * u + c;
    const double rhs = std::sqrt(fu * fu + fv * fv);
    CHECK(lhs == Approx(rhs).margin(1e-5 * (1 + rhs)));
  }
}

TEST_CASE("half-space enlargement cost") {
  auto id = identity_weight();
  auto w2 = omega_p_make(2.0);

  ProductPoint y;
  y.n = 2;
  y.d = 2;
  y.coordinates = {0.5, -1.0, 2.0, 3.0};

  HalfSpaceSet inside{0, 0, 1.0, true};  // x_{1,1} <= 1, y_{1,1} = 0.5
  CHECK(enlargement_cost(y, inside, w2) == 0.0);

  ProductPoint z;
  z.n = 1;
  z.d = 1;
  z.coordinates = {2.0};
  HalfSpaceSet A{0, 0, 0.0, true};
  CHECK(enlargement_cost(z, A, id) == Approx(1.0).epsilon(1e-15));

  z.coordinates = {4.0};
  CHECK(enlargement_cost(z, A, w2) == Approx(4.0).epsilon(1e-15));

  // Direction >= mirrors the computation.
  HalfSpaceSet B{0, 0, 0.0, false};
  z.coordinates = {-4.0};
  CHECK(enlargement_cost(z, B, w2) == Approx(4.0).epsilon(1e-15));

  HalfSpaceSet bad{5, 0, 0.0, true};
  CHECK_THROWS_AS(enlargement_cost(z, bad, id), UnsupportedSet);
}

TEST_CASE("ball sum membership certificate") {
  auto r0 = ball_sum_membership({0.0, 0.0, 0.0}, 0.0, 1.0);
  CHECK(r0.member);
  for (double h : {0.0, 0.5, 3.0})
    CHECK(ball_sum_membership({0.0}, h, 1.5).member);

  auto r = ball_sum_membership({0.5, 2.0}, 1.24, 1.0);
  CHECK(r.v2sq == Approx(0.25).epsilon(1e-15));
  CHECK(r.wpp == Approx(2.0).epsilon(1e-15));
  CHECK_FALSE(r.member);

  // If sum alpha(omega_p(u_k)) <= h the certificate must fire.
  testutil::TestRng rng(7023);
  for (double p : {1.0, 1.3, 2.0}) {
    auto wp = omega_p_make(p);
    for (int i = 0; i < 20000; ++i) {
      std::vector<double> u(5);
      for (auto& c : u) c = rng.uniform(-3, 3);
      double cost = 0;
      for (double c : u) cost += alpha(wp.eval(c));
      auto res = ball_sum_membership(u, cost, p);
      CHECK(res.member);
      CHECK(res.v2sq + res.wpp == Approx(cost).margin(1e-11 * (1 + cost)));
    }
  }
  CHECK_THROWS_AS(ball_sum_membership({1.0}, -0.1, 1.0), InvalidParameter);
  CHECK_THROWS_AS(ball_sum_membership({1.0}, 1.0, 2.5), InvalidParameter);
}
