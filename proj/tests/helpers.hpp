#pragma once

// Independent cross-check helpers for the test suite.  These deliberately
// avoid the library's own quadrature/RNG so expected values come from a
// second route.

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace testutil {

// Composite Simpson on a fixed grid; n must be even.
inline double simpson(const std::function<double(double)>& f, double a,
                      double b, int n = 4096) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

// Central difference first derivative.
inline double fd1(const std::function<double(double)>& f, double x,
                  double step = 1e-6) {
  return (f(x + step) - f(x - step)) / (2 * step);
}

inline double slack(double v) { return 1e-12 * (1.0 + std::fabs(v)); }

// Deterministic uniform stream for property tests (independent of the
// library's counter RNG).
class TestRng {
 public:
  explicit TestRng(std::uint64_t seed) : eng_(seed) {}
  double uniform() { return dist_(eng_); }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

 private:
  std::mt19937_64 eng_;
  std::uniform_real_distribution<double> dist_{0.0, 1.0};
};

}  // namespace testutil
