#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "ineqlab/core.hpp"
#include "ineqlab/density.hpp"
#include "ineqlab/rng.hpp"
#include "ineqlab/weight.hpp"

namespace ineqlab {

enum class Verdict { holds, fails, inconclusive };

inline const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::holds: return "holds";
    case Verdict::fails: return "fails";
    default: return "inconclusive";
  }
}

struct Sufficient1DReport {
  Verdict verdict = Verdict::inconclusive;
  double liminf_estimate = 0;   // drift ratio at the outermost probes
  double outer_infimum = 0;     // running inf over the outer half of probes
  double regularity = 0;        // max of |w''|/w'^2 at the largest probes
};

// Probes sgn(x) V'(x) / w'(x) on geometric grids toward both ends of the
// probe range.  `holds` needs the outer-half infimum positive and the
// regularity ratio small; `fails` means the ratio is negative at the largest
// probes, or trends to zero (monotone decay of the outer half to well below
// its own start).  Everything else is `inconclusive` — a liminf cannot be
// certified from finitely many probes.
inline Sufficient1DReport sufficient_condition_1d(const Density1D& mu,
                                                  const WeightFunction& w,
                                                  double probe_lo,
                                                  double probe_hi) {
  if (!(probe_lo < 0) || !(probe_hi > 0))
    throw InvalidParameter("sufficient_1d: probe range must straddle 0");
  auto vprime = [&mu](double x) {
    const double step = 1e-6 * (1.0 + std::fabs(x));
    return (mu.V(x + step) - mu.V(x - step)) / (2 * step);
  };
  auto wsecond = [&w](double x) {
    if (w.has_deriv2()) return w.deriv2(x);
    const double step = 1e-6 * (1.0 + std::fabs(x));
    return (w.deriv1(x + step) - w.deriv1(x - step)) / (2 * step);
  };

  const int kProbes = 160;
  Sufficient1DReport rep;
  rep.outer_infimum = kInf;
  rep.liminf_estimate = kInf;
  rep.regularity = 0;
  bool negative_at_edge = false;
  bool trend_fail = false;

  for (int side = 0; side < 2; ++side) {
    const double end = side == 0 ? probe_hi : -probe_lo;
    const double x0 = std::min(0.5, end / 4.0);
    const double g = std::pow(end / x0, 1.0 / (kProbes - 1));
    std::vector<double> ratios(kProbes);
    for (int j = 0; j < kProbes; ++j) {
      const double x = (side == 0 ? 1.0 : -1.0) * x0 * std::pow(g, j);
      ratios[j] = sgn(x) * vprime(x) / w.deriv1(x);
    }
    const int half = kProbes / 2;
    double outer_inf = kInf, outer_max = -kInf;
    bool monotone_down = true;
    for (int j = half; j < kProbes; ++j) {
      outer_inf = std::min(outer_inf, ratios[j]);
      outer_max = std::max(outer_max, ratios[j]);
      if (j > half && ratios[j] > ratios[j - 1] + 1e-12 * (1 + std::fabs(ratios[j])))
        monotone_down = false;
    }
    rep.outer_infimum = std::min(rep.outer_infimum, outer_inf);
    const double edge =
        std::min({ratios[kProbes - 1], ratios[kProbes - 2], ratios[kProbes - 3]});
    rep.liminf_estimate = std::min(rep.liminf_estimate, edge);
    if (edge < 0) negative_at_edge = true;
    if (monotone_down && ratios[kProbes - 1] <= 0.7 * outer_max &&
        ratios[kProbes - 1] < 1e-2)
      trend_fail = true;
    for (int j = kProbes - 5; j < kProbes; ++j) {
      const double x = (side == 0 ? 1.0 : -1.0) * x0 * std::pow(g, j);
      rep.regularity =
          std::max(rep.regularity, std::fabs(wsecond(x)) / sq(w.deriv1(x)));
    }
  }

  if (negative_at_edge || trend_fail)
    rep.verdict = Verdict::fails;
  else if (rep.outer_infimum > 1e-6 && rep.regularity < 1e-3)
    rep.verdict = Verdict::holds;
  else
    rep.verdict = Verdict::inconclusive;
  return rep;
}

struct SufficientDDReport {
  Verdict verdict = Verdict::inconclusive;
  double liminf_estimate = 0;  // shell minimum at the outermost radii
  double threshold = 0;        // d * M
  std::size_t shells = 0;
  std::size_t directions = 0;
  WeightFunction rescaled;      // omega~(x) = omega(u x), reported on `holds`
};

// d-dimensional drift criterion: on shells of radius r the quantity
//   S(x) = (1/u^2) sum_i [ (1/4) (dV/dx_i)^2(x/u) - d2V/dx_i^2(x/u) ] / w'(x_i)^2
// must stay above d*M in the limit, where M bounds |w'''| / (w')^3.
inline SufficientDDReport sufficient_condition_dd(const PotentialField& field,
                                                  const WeightFunction& w,
                                                  double u, double M,
                                                  double probe_radius,
                                                  std::uint64_t seed = 0xD1CEULL) {
  if (!(u > 0)) throw InvalidParameter("sufficient_dd: u must be > 0");
  if (!(M >= 0)) throw InvalidParameter("sufficient_dd: M must be >= 0");
  if (!(probe_radius > 0))
    throw InvalidParameter("sufficient_dd: probe_radius must be > 0");
  if (!w.has_deriv2() || !w.has_deriv3())
    throw InvalidParameter("sufficient_dd: weight needs third derivatives");
  if (!(w.deriv1(0.0) > 0))
    throw InvalidParameter("sufficient_dd: w'(0) must be > 0");
  // Validate the declared bound M on |w'''|/(w')^3 over a geometric grid.
  for (double x = 1e-3; x <= probe_radius; x *= 1.3) {
    const double ratio = std::fabs(w.deriv3(x)) / std::fabs(std::pow(w.deriv1(x), 3));
    if (ratio > M + 1e-9)
      throw InvalidParameter("sufficient_dd: declared M does not bound |w'''|/(w')^3");
  }

  const std::size_t d = field.d;
  const std::size_t kShells = 24, kDirs = 64;
  SufficientDDReport rep;
  rep.threshold = double(d) * M;
  rep.shells = kShells;
  rep.directions = kDirs;

  CounterRng rng(seed);
  std::uint64_t ctr = 0;
  std::vector<std::vector<double>> dirs(kDirs, std::vector<double>(d));
  for (auto& dir : dirs) {
    double norm2 = 0;
    for (auto& c : dir) {
      // Box-Muller normal from the counter stream.
      const double u1 = rng.uniform(ctr++), u2 = rng.uniform(ctr++);
      c = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
      norm2 += c * c;
    }
    const double inv = 1.0 / std::sqrt(norm2);
    for (auto& c : dir) c *= inv;
  }

  auto S = [&](const std::vector<double>& x) {
    std::vector<double> scaled(d);
    for (std::size_t i = 0; i < d; ++i) scaled[i] = x[i] / u;
    const auto g = field.gradV(scaled);
    const auto hd = field.hessDiagV(scaled);
    double s = 0;
    for (std::size_t i = 0; i < d; ++i)
      s += (0.25 * g[i] * g[i] - hd[i]) / sq(w.deriv1(x[i]));
    return s / (u * u);
  };

  std::vector<double> shell_min(kShells, kInf);
  const double r0 = probe_radius / 64.0;
  const double growth = std::pow(probe_radius / r0, 1.0 / (kShells - 1));
  for (std::size_t j = 0; j < kShells; ++j) {
    const double r = r0 * std::pow(growth, double(j));
    for (const auto& dir : dirs) {
      std::vector<double> x(d);
      for (std::size_t i = 0; i < d; ++i) x[i] = r * dir[i];
      shell_min[j] = std::min(shell_min[j], S(x));
    }
  }

  double outer_inf = kInf;
  for (std::size_t j = kShells / 2; j < kShells; ++j)
    outer_inf = std::min(outer_inf, shell_min[j]);
  rep.liminf_estimate =
      std::min({shell_min[kShells - 1], shell_min[kShells - 2], shell_min[kShells - 3]});

  if (rep.liminf_estimate < rep.threshold - 1e-6 &&
      shell_min[kShells - 1] < rep.threshold - 1e-6)
    rep.verdict = Verdict::fails;
  else if (outer_inf > rep.threshold + 1e-6)
    rep.verdict = Verdict::holds;
  else
    rep.verdict = Verdict::inconclusive;

  if (rep.verdict == Verdict::holds) rep.rescaled = scaled_weight(w, u);
  return rep;
}

}  // namespace ineqlab
