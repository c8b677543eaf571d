#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "ineqlab/core.hpp"
#include "ineqlab/density.hpp"
#include "ineqlab/quadrature.hpp"
#include "ineqlab/weight.hpp"

namespace ineqlab {

// Two-sided Hardy-type criterion.  The optimal Poincaré constant is bracketed
// by [max(D-,D+), 4 max(D-,D+)].
struct MuckenhouptResult {
  double D_minus = 0;
  double D_plus = 0;
  double bracket_low = 0;
  double bracket_high = 0;
  double argsup_minus = 0;
  double argsup_plus = 0;
  bool diverged_minus = false;
  bool diverged_plus = false;
  std::size_t probes_minus = 0;
  std::size_t probes_plus = 0;
  double max_segment_rel_error = 0;

  bool finite() const { return !diverged_minus && !diverged_plus; }
};

namespace detail {

struct MuckSide {
  double sup = 0;
  double argsup = 0;
  bool diverged = false;
  std::size_t probes = 0;
  double max_rel_err = 0;
};

// One side of the criterion: sup over tail probes of
//   P(x) = (tail mass beyond x) * int_x^m w'(u)^2 / h(u) du.
// Probes sit at quantiles of a geometric mass ladder u_k = 0.5 * 1.05^{-k},
// so the mass factor is u_k itself and stays relatively accurate however
// deep the tail.  Divergence is flagged either on magnitude (the product
// blows past 1e12 while still growing) or on trend (tail increments no
// smaller than increments ~48 probes earlier: the product keeps climbing at
// the support's edge instead of leveling off).
inline MuckSide muckenhoupt_side(const Density1D& mu, const WeightFunction& w,
                                 bool left) {
  const double m = mu.median;
  auto f = [&](double t) {
    const double h = mu.h(t);
    if (!(h > 0))
      throw CriterionError("muckenhoupt: density vanishes inside the support");
    return sq(w.deriv1(t)) / h;
  };

  std::vector<double> us, xs, Is, Ps;
  us.push_back(0.5);
  xs.push_back(m);
  Is.push_back(0.0);
  Ps.push_back(0.0);
  MuckSide side;

  double u = 0.5;
  while (true) {
    u /= 1.05;
    if (u < 1e-13) break;
    const double x = mu.quantile(left ? u : 1.0 - u);
    const double prev_x = xs.back();
    if (std::fabs(x - prev_x) < 1e-14 * (1.0 + std::fabs(x))) break;
    const double a = left ? x : prev_x;
    const double b = left ? prev_x : x;
    QuadResult seg = gk_adaptive(f, a, b, 0.0, 1e-9, 300);
    if (!seg.converged && us.size() < 8)
      throw CriterionError("muckenhoupt: criterion integrand does not "
                           "converge near the median");
    if (seg.value > 0)
      side.max_rel_err = std::max(side.max_rel_err, seg.error / seg.value);
    const double I = Is.back() + seg.value;
    const double P = u * I;
    us.push_back(u);
    xs.push_back(x);
    Is.push_back(I);
    Ps.push_back(P);
    if (P > side.sup) {
      side.sup = P;
      side.argsup = x;
    }
    if (P > 1e12 && P > Ps[Ps.size() / 2]) {
      side.diverged = true;
      break;
    }
  }
  side.probes = us.size();

  // Trend rule on the increments of P along the ladder.
  if (!side.diverged && Ps.size() > 70) {
    const std::size_t K = Ps.size() - 1;
    auto mean_inc = [&](std::size_t end) {
      double s = 0;
      for (std::size_t i = 0; i < 8; ++i) s += Ps[end - i] - Ps[end - i - 1];
      return s / 8.0;
    };
    const double tail = mean_inc(K);
    const double earlier = mean_inc(K - 48);
    const double floor_inc = 1e-9 * std::max(Ps[K], 1.0);
    if (tail > floor_inc && earlier > floor_inc && tail >= 0.98 * earlier)
      side.diverged = true;
  }
  if (side.diverged) {
    side.sup = kInf;
    return side;
  }

  // Golden-section refinement around an interior ladder argmax.
  std::size_t kstar = 0;
  for (std::size_t k = 0; k < Ps.size(); ++k)
    if (Ps[k] > Ps[kstar]) kstar = k;
  if (kstar > 0 && kstar + 1 < Ps.size()) {
    auto phi = [&](double uu) {
      const double x = mu.quantile(left ? uu : 1.0 - uu);
      // Locate the bracketing probe (xs is monotone away from the median).
      std::size_t j = 0;
      for (std::size_t k = 0; k + 1 < xs.size(); ++k) {
        const bool inside = left ? (x <= xs[k] && x >= xs[k + 1])
                                 : (x >= xs[k] && x <= xs[k + 1]);
        if (inside) {
          j = k;
          break;
        }
      }
      const double a = left ? x : xs[j];
      const double b = left ? xs[j] : x;
      QuadResult seg = gk_adaptive(f, a, b, 0.0, 1e-9, 300);
      return uu * (Is[j] + seg.value);
    };
    double lo = us[kstar + 1], hi = us[kstar - 1];
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = hi - gr * (hi - lo), d = lo + gr * (hi - lo);
    double fc = phi(c), fd = phi(d);
    for (int it = 0; it < 60 && hi - lo > 1e-6 * hi; ++it) {
      if (fc > fd) {
        hi = d;
        d = c;
        fd = fc;
        c = hi - gr * (hi - lo);
        fc = phi(c);
      } else {
        lo = c;
        c = d;
        fc = fd;
        d = lo + gr * (hi - lo);
        fd = phi(d);
      }
    }
    const double refined = std::max(fc, fd);
    if (refined > side.sup) {
      side.sup = refined;
      side.argsup = mu.quantile(left ? 0.5 * (lo + hi) : 1.0 - 0.5 * (lo + hi));
    }
  }
  return side;
}

}  // namespace detail

inline MuckenhouptResult muckenhoupt_weighted(const Density1D& mu,
                                              const WeightFunction& w) {
  MuckenhouptResult r;
  auto left = detail::muckenhoupt_side(mu, w, true);
  auto right = detail::muckenhoupt_side(mu, w, false);
  r.D_minus = left.sup;
  r.D_plus = right.sup;
  r.argsup_minus = left.argsup;
  r.argsup_plus = right.argsup;
  r.diverged_minus = left.diverged;
  r.diverged_plus = right.diverged;
  r.probes_minus = left.probes;
  r.probes_plus = right.probes;
  r.max_segment_rel_error = std::max(left.max_rel_err, right.max_rel_err);
  r.bracket_low = std::max(r.D_minus, r.D_plus);
  r.bracket_high = 4.0 * r.bracket_low;
  return r;
}

inline MuckenhouptResult muckenhoupt_classical(const Density1D& mu) {
  return muckenhoupt_weighted(mu, identity_weight());
}

// Change-of-variables consistency: the weighted criterion for mu equals the
// classical criterion for the image measure under the weight.  Both sides
// probe the same quantile ladder, so agreement is limited only by quadrature.
struct EquivalenceReport {
  MuckenhouptResult weighted;
  MuckenhouptResult classical;
  double rel_gap_minus = 0;
  double rel_gap_plus = 0;
  bool pass = false;
};

inline EquivalenceReport equivalence_check(const Density1D& mu,
                                           const WeightFunction& w) {
  EquivalenceReport rep;
  rep.weighted = muckenhoupt_weighted(mu, w);
  rep.classical = muckenhoupt_classical(pushforward_density(mu, w));
  auto gap = [](double a, double b) {
    if (std::isinf(a) && std::isinf(b)) return 0.0;
    if (std::isinf(a) || std::isinf(b)) return kInf;
    return std::fabs(a - b) / std::max({std::fabs(a), std::fabs(b), 1e-300});
  };
  rep.rel_gap_minus = gap(rep.weighted.D_minus, rep.classical.D_minus);
  rep.rel_gap_plus = gap(rep.weighted.D_plus, rep.classical.D_plus);
  rep.pass = rep.rel_gap_minus <= 1e-6 && rep.rel_gap_plus <= 1e-6;
  return rep;
}

}  // namespace ineqlab
