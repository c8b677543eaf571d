#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ineqlab/core.hpp"
#include "ineqlab/quadrature.hpp"
#include "ineqlab/rng.hpp"

namespace ineqlab {

// alpha(u) = min(|u|, u^2): quadratic near zero, linear in the tails.
inline double alpha(double u) {
  const double a = std::fabs(u);
  return std::min(a, a * a);
}

// kappa = sqrt(18 e^{sqrt 5}) ~ 12.9775; kappa^2 = 18 e^{sqrt 5}.
inline double kappa() {
  static const double k = std::sqrt(18.0 * std::exp(std::sqrt(5.0)));
  return k;
}

inline double kappa_sq() { return 18.0 * std::exp(std::sqrt(5.0)); }

// Dimension-free enlargement rate K(C) = alpha(1/(sqrt(C) kappa))/16.
inline double concentration_rate(double C) {
  if (!(C > 0)) throw InvalidParameter("concentration_rate: C must be > 0");
  return alpha(1.0 / (std::sqrt(C) * kappa())) / 16.0;
}

// An odd weight on R: nonnegative and superlinear-ratio on the right half
// line (x -> w(x)/x non-decreasing).  deriv1 uses the right-hand value at
// kinks; deriv2/deriv3 may be absent for numerically built weights.
struct WeightFunction {
  std::string id;
  std::function<double(double)> eval;
  std::function<double(double)> deriv1;
  std::function<double(double)> deriv2;  // may be empty
  std::function<double(double)> deriv3;  // may be empty
  std::function<double(double)> inverse;
  double admissible_bound = kInf;  // admissibility asserted for |x| <= bound

  bool has_deriv2() const { return static_cast<bool>(deriv2); }
  bool has_deriv3() const { return static_cast<bool>(deriv3); }
};

inline WeightFunction identity_weight() {
  WeightFunction w;
  w.id = "identity";
  w.eval = [](double x) { return x; };
  w.deriv1 = [](double) { return 1.0; };
  w.deriv2 = [](double) { return 0.0; };
  w.deriv3 = [](double) { return 0.0; };
  w.inverse = [](double y) { return y; };
  return w;
}

// omega_p(x) = max(x, x^p) on the right half line, extended oddly.
inline WeightFunction omega_p_make(double p) {
  if (!(p >= 1.0) || !(p <= 16.0))
    throw InvalidParameter("omega_p_make: p must lie in [1,16]");
  WeightFunction w;
  {
    char buf[64];
    std::snprintf(buf, sizeof buf, "omega_p:p=%.17g", p);
    w.id = buf;
  }
  w.eval = [p](double x) {
    const double a = std::fabs(x);
    return sgn(x) * std::max(a, std::pow(a, p));
  };
  w.deriv1 = [p](double x) {
    const double a = std::fabs(x);
    return a < 1.0 ? 1.0 : p * std::pow(a, p - 1.0);
  };
  w.deriv2 = [p](double x) {
    const double a = std::fabs(x);
    return a < 1.0 ? 0.0 : sgn(x) * p * (p - 1.0) * std::pow(a, p - 2.0);
  };
  w.deriv3 = [p](double x) {
    const double a = std::fabs(x);
    return a < 1.0 ? 0.0 : p * (p - 1.0) * (p - 2.0) * std::pow(a, p - 3.0);
  };
  w.inverse = [p](double y) {
    const double a = std::fabs(y);
    return sgn(y) * (a <= 1.0 ? a : std::pow(a, 1.0 / p));
  };
  return w;
}

// w_tilde(x) = w(u x).  Admissibility is preserved for u > 0.
inline WeightFunction scaled_weight(const WeightFunction& w, double u) {
  if (!(u > 0)) throw InvalidParameter("scaled_weight: u must be > 0");
  WeightFunction s;
  s.id = w.id + ":scaled=" + std::to_string(u);
  auto base = std::make_shared<WeightFunction>(w);
  s.eval = [base, u](double x) { return base->eval(u * x); };
  s.deriv1 = [base, u](double x) { return u * base->deriv1(u * x); };
  if (w.has_deriv2())
    s.deriv2 = [base, u](double x) { return u * u * base->deriv2(u * x); };
  if (w.has_deriv3())
    s.deriv3 = [base, u](double x) { return u * u * u * base->deriv3(u * x); };
  s.inverse = [base, u](double y) { return base->inverse(y) / u; };
  s.admissible_bound =
      w.admissible_bound == kInf ? kInf : w.admissible_bound / u;
  return s;
}

// ---------------------------------------------------------------------------
// Bounded-oscillation growth profile used by the two-branch cost alpha_s.
struct BGLProfile {
  double C = 0;  // underlying spectral-gap constant
  double s = 0;  // slope parameter, s < 2/sqrt(C)
  double L = 0;  // curvature scale at s
};

inline BGLProfile make_bgl_profile(double C, double s) {
  if (!(C > 0)) throw InvalidParameter("make_bgl_profile: C must be > 0");
  const double sc = std::sqrt(C);
  if (!(s > 0) || !(s < 2.0 / sc))
    throw InvalidParameter("make_bgl_profile: need 0 < s < 2/sqrt(C)");
  BGLProfile p;
  p.C = C;
  p.s = s;
  p.L = 0.5 * C * sq((2.0 + sc * s) / (2.0 - sc * s)) *
        std::exp(s * std::sqrt(5.0 * C));
  return p;
}

// Quadratic inside |t| <= 2 L s, linear with slope s outside; C^1 at the knee.
inline double alpha_s(double t, const BGLProfile& p) {
  const double a = std::fabs(t);
  if (a <= 2.0 * p.L * p.s) return a * a / (4.0 * p.L);
  return p.s * a - p.L * p.s * p.s;
}

// ---------------------------------------------------------------------------
// Growth profile T on [0,1], non-decreasing, extended by T(x)=T(1) for x>=1.
struct BecknerProfile {
  std::string id;
  std::function<double(double)> T;
  bool ratio_non_increasing = false;  // x -> T(x)/x non-increasing on (0,1]
  double power_r = 0;                 // > 0 iff T(u) = u^{2(1-1/r)}

  double t_ext(double x) const {
    if (!(x > 0)) throw InvalidParameter("BecknerProfile: argument must be > 0");
    return T(std::min(x, 1.0));
  }
};

inline BecknerProfile beckner_power_profile(double r) {
  if (!(r >= 1.0)) throw InvalidParameter("beckner_power_profile: r must be >= 1");
  BecknerProfile p;
  {
    char buf[64];
    std::snprintf(buf, sizeof buf, "power:r=%.17g", r);
    p.id = buf;
  }
  const double e = 2.0 * (1.0 - 1.0 / r);
  p.T = [e](double u) { return e == 0.0 ? 1.0 : std::pow(u, e); };
  // T(u)/u = u^{1-2/r}: non-increasing iff r <= 2.
  p.ratio_non_increasing = r <= 2.0;
  p.power_r = r;
  return p;
}

// Piecewise-linear profile from sample points; us must reach 1.
inline BecknerProfile beckner_table_profile(const std::string& id,
                                            std::vector<double> us,
                                            std::vector<double> Ts) {
  if (us.size() != Ts.size() || us.size() < 2)
    throw InvalidParameter("beckner_table_profile: need matching us/Ts, >= 2 rows");
  for (std::size_t i = 0; i + 1 < us.size(); ++i) {
    if (!(us[i] < us[i + 1]))
      throw InvalidParameter("beckner_table_profile: us must be strictly increasing");
    if (Ts[i + 1] < Ts[i] - 1e-15)
      throw InvalidParameter("beckner_table_profile: T must be non-decreasing");
  }
  if (!(us.front() >= 0.0) || std::fabs(us.back() - 1.0) > 1e-12)
    throw InvalidParameter("beckner_table_profile: us must span up to 1");
  if (!(Ts.back() > 0)) throw InvalidParameter("beckner_table_profile: T(1) must be > 0");
  BecknerProfile p;
  p.id = id;
  auto xs = std::make_shared<std::vector<double>>(std::move(us));
  auto ys = std::make_shared<std::vector<double>>(std::move(Ts));
  p.T = [xs, ys](double u) {
    const auto& x = *xs;
    const auto& y = *ys;
    if (u <= x.front()) return y.front();
    if (u >= x.back()) return y.back();
    auto it = std::upper_bound(x.begin(), x.end(), u);
    const std::size_t k = static_cast<std::size_t>(it - x.begin()) - 1;
    const double s = (u - x[k]) / (x[k + 1] - x[k]);
    return y[k] + s * (y[k + 1] - y[k]);
  };
  // Flag from the sampled ratios.
  bool flag = true;
  for (std::size_t i = 0; i + 1 < xs->size(); ++i) {
    const double u0 = (*xs)[i], u1 = (*xs)[i + 1];
    if (u0 <= 0) continue;
    if (p.T(u1) / u1 > p.T(u0) / u0 * (1.0 + 1e-12)) flag = false;
  }
  p.ratio_non_increasing = flag;
  return p;
}

// Theta(x) = x / T(1/log(1+1/x)) with the T(x)=T(1) extension; Theta(0)=0.
// Requires the non-increasing-ratio flag (monotonicity/subadditivity rest on it).
inline std::function<double(double)> theta_build(const BecknerProfile& profile) {
  if (!profile.ratio_non_increasing)
    throw InvalidParameter("theta_build: profile lacks the non-increasing ratio flag");
  BecknerProfile p = profile;
  return [p](double x) {
    if (x < 0) throw InvalidParameter("theta: argument must be >= 0");
    if (x == 0) return 0.0;
    return x / p.t_ext(1.0 / std::log1p(1.0 / x));
  };
}

// ---------------------------------------------------------------------------
namespace detail {

// Cumulative integral of an integrand that is constant on (0,1]:
//   F(t) = g0*t for t<=1,  F(t) = g0 + int_1^t g  for t in [1, e^thetamax].
// The [1, ..] part is tabulated on a uniform log grid and interpolated with a
// cubic Hermite in theta = log u (exact endpoint derivatives), so evaluation
// is O(1) and the table is immutable after construction.
class KneeCumulative {
 public:
  KneeCumulative(std::function<double(double)> g, double quad_tol,
                 double theta_max = 40.0, double dtheta = 1e-3)
      : g_(std::move(g)), theta_max_(theta_max), dtheta_(dtheta) {
    g0_ = g_(1.0);
    if (!(g0_ >= 0) || !std::isfinite(g0_))
      throw BuildFailure("cumulative build: integrand not finite/nonnegative at 1");
    const std::size_t n = static_cast<std::size_t>(theta_max_ / dtheta_) + 1;
    cum_.resize(n);
    dth_.resize(n);
    cum_[0] = 0.0;
    dth_[0] = g0_;  // g(1)*1
    auto f = [this](double th) {
      const double u = std::exp(th);
      return g_(u) * u;
    };
    const double cell_tol = std::max(quad_tol * 1e-3, 1e-16);
    for (std::size_t k = 1; k < n; ++k) {
      const double a = (k - 1) * dtheta_, b = k * dtheta_;
      double v, e;
      gk_panel(f, a, b, v, e);
      if (e > cell_tol) {
        QuadResult r = gk_adaptive(f, a, b, cell_tol, 1e-14, 200);
        v = r.value;
      }
      cum_[k] = cum_[k - 1] + v;
      dth_[k] = f(b);
    }
  }

  double g0() const { return g0_; }
  double u_max() const { return std::exp(theta_max_); }
  double total() const { return g0_ + cum_.back(); }  // F(u_max)

  // F(t) for t >= 0.
  double eval(double t) const {
    if (t < 0) throw InvalidParameter("cumulative eval: negative argument");
    if (t <= 1.0) return g0_ * t;
    const double th = std::log(t);
    if (th >= theta_max_)
      throw NumericError("cumulative eval: argument beyond tabulated range");
    return g0_ + hermite(th);
  }

  double deriv(double t) const { return t <= 1.0 ? g0_ : g_(t); }

  // Monotone inverse of F by bracketed bisection to ~1e-12 relative.
  double invert(double y, const char* what) const {
    if (y < 0) throw InvalidParameter("cumulative invert: negative argument");
    if (g0_ > 0 && y <= g0_) return y / g0_;
    if (y > total())
      throw BuildFailure(std::string(what) +
                         ": value beyond the reachable range of the cumulative "
                         "(tail integral grows too slowly)");
    const double target = y - g0_;
    auto it = std::lower_bound(cum_.begin(), cum_.end(), target);
    std::size_t hi_idx = static_cast<std::size_t>(it - cum_.begin());
    if (hi_idx == 0) hi_idx = 1;
    double lo = (hi_idx - 1) * dtheta_, hi = hi_idx * dtheta_;
    for (int i = 0; i < 64 && hi - lo > 1e-15; ++i) {
      const double mid = 0.5 * (lo + hi);
      (hermite(mid) < target ? lo : hi) = mid;
    }
    return std::exp(0.5 * (lo + hi));
  }

  // Increment of F over the last decades, for tail-growth diagnostics.
  double tail_increment(double theta_span) const {
    const std::size_t n = cum_.size();
    const std::size_t back = std::min(
        n - 1, static_cast<std::size_t>(theta_span / dtheta_));
    return cum_[n - 1] - cum_[n - 1 - back];
  }

 private:
  double hermite(double th) const {
    const double pos = th / dtheta_;
    std::size_t k = static_cast<std::size_t>(pos);
    if (k >= cum_.size() - 1) k = cum_.size() - 2;
    const double s = pos - k;
    const double c0 = cum_[k], c1 = cum_[k + 1];
    const double d0 = dth_[k] * dtheta_, d1 = dth_[k + 1] * dtheta_;
    const double s2 = s * s, s3 = s2 * s;
    return c0 * (2 * s3 - 3 * s2 + 1) + c1 * (-2 * s3 + 3 * s2) +
           d0 * (s3 - 2 * s2 + s) + d1 * (s3 - s2);
  }

  std::function<double(double)> g_;
  double theta_max_, dtheta_, g0_ = 0;
  std::vector<double> cum_;   // cum_[k] = int_1^{e^{k dtheta}} g
  std::vector<double> dth_;   // d/dtheta at knots: g(u) u
};

}  // namespace detail

// Builds the weight attached to a growth profile.
//
// For the power family T(u) = u^{2(1-1/r)} the construction integrates the
// derivative identity w'(t) = max(1, t^{r-1}) (so w(t) = t on [0,1] and
// w(t) = t^r/r + 1 - 1/r beyond) and inverts it numerically.  For general
// profiles the defining integral
//     w^{-1}(t) = int_0^t sqrt(T(1/u)) du
// is tabulated directly (the inverse IS the quadrature) and the forward map
// is obtained by bracketed bisection.  A profile whose tail integral stops
// growing cannot cover the half-line and fails the build.
inline WeightFunction omega_T_build(const BecknerProfile& profile,
                                    double quad_tol) {
  if (!(quad_tol > 0)) throw InvalidParameter("omega_T_build: quad_tol must be > 0");
  // Validate monotonicity of T on a probe grid.
  double prev = profile.t_ext(1e-12);
  if (!(profile.t_ext(1.0) > 0))
    throw InvalidParameter("omega_T_build: T(1) must be > 0");
  for (int i = 1; i <= 256; ++i) {
    const double u = i / 256.0;
    const double v = profile.t_ext(u);
    if (v < prev - 1e-12 * std::max(1.0, std::fabs(prev)))
      throw InvalidParameter("omega_T_build: T must be non-decreasing");
    prev = v;
  }

  WeightFunction w;
  w.id = "omega_T:" + profile.id;

  if (profile.power_r > 0) {
    const double r = profile.power_r;
    auto K = std::make_shared<detail::KneeCumulative>(
        [r](double u) { return std::max(1.0, std::pow(u, r - 1.0)); },
        quad_tol);
    w.eval = [K](double x) { return sgn(x) * K->eval(std::fabs(x)); };
    w.deriv1 = [r](double x) {
      const double a = std::fabs(x);
      return a <= 1.0 ? 1.0 : std::pow(a, r - 1.0);
    };
    w.deriv2 = [r](double x) {
      const double a = std::fabs(x);
      return a <= 1.0 ? 0.0 : sgn(x) * (r - 1.0) * std::pow(a, r - 2.0);
    };
    w.deriv3 = [r](double x) {
      const double a = std::fabs(x);
      return a <= 1.0 ? 0.0 : (r - 1.0) * (r - 2.0) * std::pow(a, r - 3.0);
    };
    w.inverse = [K](double y) {
      return sgn(y) * K->invert(std::fabs(y), "omega_T inverse");
    };
    return w;
  }

  BecknerProfile p = profile;
  auto G = std::make_shared<detail::KneeCumulative>(
      [p](double u) { return std::sqrt(p.t_ext(1.0 / u)); }, quad_tol);
  // Tail growth check: over the last 8 log-units the inverse must still move.
  if (G->tail_increment(8.0) < 1e-9 * (1.0 + G->total()))
    throw BuildFailure(
        "omega_T_build: sqrt(T(1/u)) is integrable at the tail (T decays too "
        "fast near 0); the inverse integral converges and the weight cannot "
        "cover the half-line");
  w.inverse = [G](double t) { return sgn(t) * G->eval(std::fabs(t)); };
  w.eval = [G](double x) {
    return sgn(x) * G->invert(std::fabs(x), "omega_T eval");
  };
  w.deriv1 = [G, p](double x) {
    const double y = G->invert(std::fabs(x), "omega_T deriv");
    return 1.0 / std::sqrt(p.t_ext(1.0 / std::max(y, 1e-300)));
  };
  return w;
}

// ---------------------------------------------------------------------------
struct AdmissibilityReport {
  bool ok = true;
  double max_ratio_drop = 0;  // worst relative decrease of w(x)/x
  double worst_x = 0;
  double max_odd_defect = 0;
};

// Checks w >= 0 and x -> w(x)/x non-decreasing on the dyadic grid
// {2^k : k=-40..40} plus random log-uniform points, and spot-checks oddness.
inline AdmissibilityReport admissibility_check(const WeightFunction& w,
                                               std::size_t random_points = 10000,
                                               std::uint64_t seed = 0x1AB5EEDULL) {
  AdmissibilityReport rep;
  std::vector<double> xs;
  xs.reserve(81 + random_points);
  const double hi = std::min(w.admissible_bound, std::pow(2.0, 40));
  for (int k = -40; k <= 40; ++k) {
    const double x = std::ldexp(1.0, k);
    if (x <= hi) xs.push_back(x);
  }
  CounterRng rng(seed);
  for (std::size_t i = 0; i < random_points; ++i) {
    const double t = rng.uniform(i) * 80.0 - 40.0;  // exponent in [-40,40]
    const double x = std::pow(2.0, t);
    if (x <= hi) xs.push_back(x);
  }
  std::sort(xs.begin(), xs.end());
  double prev_ratio = -kInf;
  for (double x : xs) {
    const double v = w.eval(x);
    if (v < 0) {
      rep.ok = false;
      rep.worst_x = x;
      rep.max_ratio_drop = kInf;
      return rep;
    }
    const double ratio = v / x;
    if (prev_ratio > -kInf) {
      const double drop =
          (prev_ratio - ratio) / std::max({std::fabs(prev_ratio), std::fabs(ratio), 1e-300});
      if (drop > rep.max_ratio_drop) {
        rep.max_ratio_drop = drop;
        rep.worst_x = x;
      }
    }
    prev_ratio = std::max(prev_ratio, ratio);
  }
  for (int k = -20; k <= 20; k += 5) {
    const double x = std::ldexp(1.0, k);
    if (x > hi) continue;
    const double defect = std::fabs(w.eval(-x) + w.eval(x)) /
                          std::max(1.0, std::fabs(w.eval(x)));
    rep.max_odd_defect = std::max(rep.max_odd_defect, defect);
  }
  rep.ok = rep.max_ratio_drop <= 1e-9 && rep.max_odd_defect <= 1e-9;
  return rep;
}

}  // namespace ineqlab
