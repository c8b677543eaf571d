#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "ineqlab/core.hpp"
#include "ineqlab/quadrature.hpp"
#include "ineqlab/rng.hpp"
#include "ineqlab/weight.hpp"

namespace ineqlab {

namespace detail {

// Cumulative tables for a 1-D density h = e^{-V}/Z on a truncated support.
// Knots are refined until the potential moves by <= 0.25 per cell; both a
// left and a right cumulative are kept so tail values of the cdf keep
// relative accuracy (no cancellation).  Immutable after construction.
class DensityTable {
 public:
  DensityTable(std::function<double(double)> V, double lo, double hi,
               std::vector<double> forced, double quad_tol)
      : V_(std::move(V)), lo_(lo), hi_(hi) {
    if (!(lo < hi)) throw InvalidParameter("density build: lo must be < hi");
    build_knots(std::move(forced));
    // Shift by the minimum of V so the raw integrand is O(1).
    vmin_ = kInf;
    for (double x : xs_) vmin_ = std::min(vmin_, V_(x));
    if (!std::isfinite(vmin_))
      throw NumericError("density build: potential not finite on support");
    const std::size_t n = xs_.size();
    std::vector<double> seg(n - 1);
    auto f = [this](double x) { return std::exp(-(V_(x) - vmin_)); };
    const double cell_tol = std::max(quad_tol * 1e-2, 1e-15);
    for (std::size_t k = 0; k + 1 < n; ++k) {
      double v, e;
      gk_panel(f, xs_[k], xs_[k + 1], v, e);
      if (e > cell_tol * std::max(1.0, v)) {
        QuadResult r = gk_adaptive(f, xs_[k], xs_[k + 1], cell_tol, 1e-13, 400);
        v = r.value;
      }
      seg[k] = v;
    }
    lcum_.assign(n, 0.0);
    rcum_.assign(n, 0.0);
    for (std::size_t k = 0; k + 1 < n; ++k) lcum_[k + 1] = lcum_[k] + seg[k];
    for (std::size_t k = n - 1; k-- > 0;) rcum_[k] = rcum_[k + 1] + seg[k];
    total_ = lcum_[n - 1];
    if (!(total_ > 0) || !std::isfinite(total_))
      throw NumericError("density build: vanishing or non-finite mass");
    log_z_ = -vmin_ + std::log(total_);
  }

  double lo() const { return lo_; }
  double hi() const { return hi_; }
  double log_z() const { return log_z_; }

  double density(double x) const {
    if (x <= lo_ || x >= hi_) return 0.0;
    return std::exp(-(V_(x) - vmin_)) / total_;
  }

  double cdf(double x) const {
    if (x <= lo_) return 0.0;
    if (x >= hi_) return 1.0;
    const std::size_t k = cell(x);
    if (lcum_[k] <= 0.5 * total_) return lower_mass(x, k) / total_;
    return 1.0 - upper_mass(x, k) / total_;
  }

  // Safeguarded Newton; the residual is formed on whichever cumulative keeps
  // relative accuracy (left mass for u <= 1/2, tail mass beyond), so deep
  // quantiles stay sharp.  Observable contract: |cdf(quantile(u)) - u| <=
  // 1e-10 for interior u.
  double quantile(double u) const {
    if (!(u > 0.0) || !(u < 1.0))
      throw InvalidParameter("quantile: u must lie in (0,1)");
    const bool left = u <= 0.5;
    const double target = left ? u * total_ : (1.0 - u) * total_;
    std::size_t k;
    if (left) {
      auto it = std::lower_bound(lcum_.begin(), lcum_.end(), target);
      k = it == lcum_.begin() ? 0
                              : static_cast<std::size_t>(it - lcum_.begin()) - 1;
    } else {
      // rcum_ is decreasing; find the cell whose tail brackets the target.
      auto it = std::lower_bound(rcum_.begin(), rcum_.end(), target,
                                 std::greater<double>());
      k = it == rcum_.begin() ? 0
                              : static_cast<std::size_t>(it - rcum_.begin()) - 1;
    }
    if (k + 2 > xs_.size()) k = xs_.size() - 2;
    double a = xs_[k], b = xs_[k + 1];
    double x = 0.5 * (a + b);
    for (int i = 0; i < 100; ++i) {
      const std::size_t kc = cell(x);
      // g increasing in x, zero at the quantile; relative accuracy preserved.
      const double g = left ? lower_mass(x, kc) - target
                            : target - upper_mass(x, kc);
      if (g > 0)
        b = x;
      else
        a = x;
      const double d = density_raw(x);
      double step = d > 0 ? -g / d : 0.0;
      double next = x + step;
      if (!(next > a) || !(next < b)) next = 0.5 * (a + b);
      const double move = std::fabs(next - x);
      x = next;
      if (std::fabs(g) < 1e-13 * std::max(target, 1e-300) &&
          move < 1e-13 * (1.0 + std::fabs(x)))
        break;
      if (b - a < 1e-15 * (1.0 + std::fabs(x))) break;
    }
    return x;
  }

 private:
  std::size_t cell(double x) const {
    auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
    std::size_t k = static_cast<std::size_t>(it - xs_.begin());
    if (k == 0) return 0;
    if (k >= xs_.size()) return xs_.size() - 2;
    return k - 1;
  }

  void build_knots(std::vector<double> forced) {
    const double w = hi_ - lo_;
    xs_.reserve(4096);
    for (int i = 0; i <= 1024; ++i) xs_.push_back(lo_ + w * i / 1024.0);
    for (double f : forced)
      if (f > lo_ && f < hi_) xs_.push_back(f);
    std::sort(xs_.begin(), xs_.end());
    xs_.erase(std::unique(xs_.begin(), xs_.end()), xs_.end());
    for (int pass = 0; pass < 40; ++pass) {
      std::vector<double> next;
      next.reserve(xs_.size() * 2);
      bool changed = false;
      for (std::size_t k = 0; k + 1 < xs_.size(); ++k) {
        next.push_back(xs_[k]);
        const double dx = xs_[k + 1] - xs_[k];
        if (dx > 1e-9 * w &&
            std::fabs(V_(xs_[k + 1]) - V_(xs_[k])) > 0.25) {
          next.push_back(0.5 * (xs_[k] + xs_[k + 1]));
          changed = true;
        }
      }
      next.push_back(xs_.back());
      xs_.swap(next);
      if (!changed) break;
    }
  }

  std::function<double(double)> V_;
  double lo_, hi_, vmin_ = 0, total_ = 0, log_z_ = 0;
  std::vector<double> xs_, lcum_, rcum_;
};

}  // namespace detail

// A 1-D probability measure with density h(x) = e^{-V(x) - logZ}, truncated
// where the density falls below ~1e-16 of its peak.  All callables share one
// immutable table; copies are cheap and concurrent reads are safe.
struct Density1D {
  std::string id;
  std::function<double(double)> h;
  std::function<double(double)> V;
  double logZ = 0;
  std::function<double(double)> cdf;
  std::function<double(double)> quantile;
  double median = 0;
  double support_lo = 0;
  double support_hi = 0;
};

// Core builder: truncates [lo,hi] is taken as given (callers pick the point
// where V - min V >= 37, i.e. density below 1e-16 of peak).
inline Density1D density_from_potential(std::string id,
                                        std::function<double(double)> V,
                                        double lo, double hi,
                                        std::vector<double> forced_knots = {},
                                        double quad_tol = 1e-10) {
  auto table = std::make_shared<detail::DensityTable>(V, lo, hi,
                                                      std::move(forced_knots),
                                                      quad_tol);
  Density1D d;
  d.id = std::move(id);
  d.V = V;
  d.logZ = table->log_z();
  d.h = [table](double x) { return table->density(x); };
  d.cdf = [table](double x) { return table->cdf(x); };
  d.quantile = [table](double u) { return table->quantile(u); };
  d.support_lo = lo;
  d.support_hi = hi;
  d.median = table->quantile(0.5);
  return d;
}

// nu_p: density (1/Z_p) e^{-|x|^p}, Z_p = 2 Gamma(1 + 1/p).
inline Density1D nu_p_make(double p) {
  if (!(p >= 1.0)) throw InvalidParameter("nu_p_make: p must be >= 1");
  char buf[64];
  std::snprintf(buf, sizeof buf, "nu_p:p=%.17g", p);
  const double cut = std::pow(37.0, 1.0 / p);
  return density_from_potential(
      buf, [p](double x) { return std::pow(std::fabs(x), p); }, -cut, cut,
      {0.0});
}

inline Density1D gaussian_make(double sigma) {
  if (!(sigma > 0)) throw InvalidParameter("gaussian_make: sigma must be > 0");
  char buf[64];
  std::snprintf(buf, sizeof buf, "gaussian:sigma=%.17g", sigma);
  const double s2 = 2.0 * sigma * sigma;
  const double cut = sigma * std::sqrt(74.0);
  return density_from_potential(
      buf, [s2](double x) { return x * x / s2; }, -cut, cut, {0.0});
}

// Potential sampled on a grid: linear interpolation inside, quadratic growth
// tail_quad*(x-x_end)^2 added to the linear continuation outside (keeps the
// measure integrable whatever the table's edge slope).
inline Density1D density_from_potential_table(std::string id,
                                              std::vector<double> xs,
                                              std::vector<double> vs,
                                              double tail_quad = 0.5) {
  if (xs.size() != vs.size() || xs.size() < 2)
    throw InvalidParameter("potential table: need matching xs/vs, >= 2 rows");
  for (std::size_t i = 0; i + 1 < xs.size(); ++i)
    if (!(xs[i] < xs[i + 1]))
      throw InvalidParameter("potential table: xs must be strictly increasing");
  if (!(tail_quad > 0))
    throw InvalidParameter("potential table: tail coefficient must be > 0");
  auto px = std::make_shared<std::vector<double>>(std::move(xs));
  auto pv = std::make_shared<std::vector<double>>(std::move(vs));
  auto V = [px, pv, tail_quad](double x) {
    const auto& gx = *px;
    const auto& gv = *pv;
    const std::size_t n = gx.size();
    if (x <= gx.front()) {
      const double s = (gv[1] - gv[0]) / (gx[1] - gx[0]);
      const double t = gx.front() - x;
      return gv.front() - s * t + tail_quad * t * t;
    }
    if (x >= gx.back()) {
      const double s = (gv[n - 1] - gv[n - 2]) / (gx[n - 1] - gx[n - 2]);
      const double t = x - gx.back();
      return gv.back() + s * t + tail_quad * t * t;
    }
    auto it = std::upper_bound(gx.begin(), gx.end(), x);
    const std::size_t k = static_cast<std::size_t>(it - gx.begin()) - 1;
    const double s = (x - gx[k]) / (gx[k + 1] - gx[k]);
    return gv[k] + s * (gv[k + 1] - gv[k]);
  };
  // Truncate where V exceeds its grid minimum by 37.
  double vmin = kInf;
  double xmin = (*px)[0];
  for (std::size_t i = 0; i < px->size(); ++i)
    if ((*pv)[i] < vmin) {
      vmin = (*pv)[i];
      xmin = (*px)[i];
    }
  double lo = px->front(), hi = px->back();
  while (V(lo) - vmin < 37.0 && xmin - lo < 1e6) lo -= 1.0 + 0.05 * (xmin - lo);
  while (V(hi) - vmin < 37.0 && hi - xmin < 1e6) hi += 1.0 + 0.05 * (hi - xmin);
  std::vector<double> forced(px->begin(), px->end());
  return density_from_potential(std::move(id), V, lo, hi, std::move(forced));
}

// Image measure under a strictly increasing weight: density
// h(omega^{-1})/omega'(omega^{-1}); all callables delegate through omega.
inline Density1D pushforward_density(const Density1D& mu,
                                     const WeightFunction& w) {
  for (double x : {mu.support_lo, mu.median, mu.support_hi,
                   0.5 * (mu.support_lo + mu.median),
                   0.5 * (mu.median + mu.support_hi)})
    if (!(w.deriv1(x) > 0))
      throw SingularWeight("pushforward_density: weight not strictly increasing "
                           "on the support");
  auto base = std::make_shared<Density1D>(mu);
  auto wf = std::make_shared<WeightFunction>(w);
  Density1D d;
  d.id = mu.id + "|" + w.id;
  d.h = [base, wf](double t) {
    const double x = wf->inverse(t);
    return base->h(x) / wf->deriv1(x);
  };
  d.V = [base, wf](double t) {
    const double x = wf->inverse(t);
    return base->V(x) + std::log(wf->deriv1(x));
  };
  d.logZ = mu.logZ;
  d.cdf = [base, wf](double t) { return base->cdf(wf->inverse(t)); };
  d.quantile = [base, wf](double u) { return wf->eval(base->quantile(u)); };
  d.median = w.eval(mu.median);
  d.support_lo = w.eval(mu.support_lo);
  d.support_hi = w.eval(mu.support_hi);
  return d;
}

// Deterministic i.i.d. draws: quantile of a counter-based uniform stream.
// Identical (n, seed) gives bit-identical output regardless of threading.
inline std::vector<double> sample(const Density1D& mu, std::size_t n,
                                  std::uint64_t seed) {
  if (n < 1) throw InvalidParameter("sample: n must be >= 1");
  CounterRng rng(seed);
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = mu.quantile(rng.uniform(i));
  return out;
}

// ---------------------------------------------------------------------------
struct DiscreteMeasure {
  std::size_t dim = 1;
  std::vector<double> atoms;    // row-major, size() == count*dim
  std::vector<double> weights;  // positive, sum 1 (within 1e-12)
  double renormalization = 1.0;

  std::size_t count() const { return weights.size(); }
  const double* atom(std::size_t k) const { return atoms.data() + k * dim; }

  void validate() const {
    if (atoms.size() != weights.size() * dim)
      throw SizeError("DiscreteMeasure: atom/weight count mismatch");
    double s = 0;
    for (double w : weights) {
      if (!(w > 0)) throw InvalidParameter("DiscreteMeasure: weights must be positive");
      s += w;
    }
    if (std::fabs(s - 1.0) > 1e-12)
      throw InvalidParameter("DiscreteMeasure: weights must sum to 1");
  }
};

// Atoms at cell midpoints of the edge grid, weights = cdf increments,
// renormalized.  The grid must capture at least 1 - 1e-3 of the mass.
inline DiscreteMeasure discretize(const Density1D& mu,
                                  const std::vector<double>& grid) {
  if (grid.size() < 2) throw InvalidParameter("discretize: need >= 2 grid edges");
  for (std::size_t i = 0; i + 1 < grid.size(); ++i)
    if (!(grid[i] < grid[i + 1]))
      throw InvalidParameter("discretize: grid must be strictly increasing");
  std::vector<double> c(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) c[i] = mu.cdf(grid[i]);
  const double covered = c.back() - c.front();
  if (covered < 1.0 - 1e-3)
    throw CoverageError("discretize: grid covers less than 1 - 1e-3 of the mass");
  DiscreteMeasure d;
  d.dim = 1;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    const double w = c[i + 1] - c[i];
    if (w > 0) {
      d.atoms.push_back(0.5 * (grid[i] + grid[i + 1]));
      d.weights.push_back(w);
    }
  }
  double s = 0;
  for (double w : d.weights) s += w;
  d.renormalization = 1.0 / s;
  for (double& w : d.weights) w *= d.renormalization;
  return d;
}

// H(nu|mu) = sum nu_k log(nu_k/mu_k) over a shared atom set; +inf when nu
// charges an atom mu does not.
inline double relative_entropy(const DiscreteMeasure& nu,
                               const DiscreteMeasure& mu) {
  if (nu.dim != mu.dim || nu.count() != mu.count())
    throw AlignmentError("relative_entropy: measures live on different supports");
  for (std::size_t k = 0; k < nu.atoms.size(); ++k)
    if (std::fabs(nu.atoms[k] - mu.atoms[k]) >
        1e-9 * (1.0 + std::fabs(mu.atoms[k])))
      throw AlignmentError("relative_entropy: atom sets differ");
  double s = 0;
  for (std::size_t k = 0; k < nu.count(); ++k) {
    const double n = nu.weights[k], m = mu.weights[k];
    if (n == 0) continue;
    if (m == 0) return kInf;
    s += n * std::log(n / m);
  }
  return std::max(s, 0.0);
}

// ---------------------------------------------------------------------------
// A C^2 potential on R^d with gradient and diagonal second partials.
struct PotentialField {
  std::size_t d = 1;
  std::function<double(const std::vector<double>&)> V;
  std::function<std::vector<double>(const std::vector<double>&)> gradV;
  std::function<std::vector<double>(const std::vector<double>&)> hessDiagV;
};

// V(x) = (a/2)|x|^2.
inline PotentialField potential_field_quadratic(std::size_t d, double a) {
  if (d < 1 || !(a > 0))
    throw InvalidParameter("potential_field_quadratic: need d >= 1, a > 0");
  PotentialField f;
  f.d = d;
  f.V = [a](const std::vector<double>& x) {
    double s = 0;
    for (double c : x) s += c * c;
    return 0.5 * a * s;
  };
  f.gradV = [a](const std::vector<double>& x) {
    std::vector<double> g(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) g[i] = a * x[i];
    return g;
  };
  f.hessDiagV = [a](const std::vector<double>& x) {
    return std::vector<double>(x.size(), a);
  };
  return f;
}

// V(x) = b * sum_i sqrt(x_i^2 + eps^2): a smooth exponential-like potential.
inline PotentialField potential_field_smooth_abs(std::size_t d, double b,
                                                 double eps) {
  if (d < 1 || !(b > 0) || !(eps > 0))
    throw InvalidParameter("potential_field_smooth_abs: need d >= 1, b,eps > 0");
  PotentialField f;
  f.d = d;
  f.V = [b, eps](const std::vector<double>& x) {
    double s = 0;
    for (double c : x) s += std::sqrt(c * c + eps * eps);
    return b * s;
  };
  f.gradV = [b, eps](const std::vector<double>& x) {
    std::vector<double> g(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
      g[i] = b * x[i] / std::sqrt(x[i] * x[i] + eps * eps);
    return g;
  };
  f.hessDiagV = [b, eps](const std::vector<double>& x) {
    std::vector<double> h(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double r2 = x[i] * x[i] + eps * eps;
      h[i] = b * eps * eps / (r2 * std::sqrt(r2));
    }
    return h;
  };
  return f;
}

// Finite-difference consistency of gradV/hessDiagV on random probe points.
inline bool potential_field_consistent(const PotentialField& f,
                                       std::size_t probes = 32,
                                       std::uint64_t seed = 0xF1E1DULL) {
  CounterRng rng(seed);
  std::uint64_t ctr = 0;
  for (std::size_t t = 0; t < probes; ++t) {
    std::vector<double> x(f.d);
    for (auto& c : x) c = 4.0 * rng.uniform(ctr++) - 2.0;
    const auto g = f.gradV(x);
    const auto hd = f.hessDiagV(x);
    if (g.size() != f.d || hd.size() != f.d) return false;
    for (std::size_t i = 0; i < f.d; ++i) {
      const double step = 1e-4 * (1.0 + std::fabs(x[i]));
      std::vector<double> xp = x, xm = x;
      xp[i] += step;
      xm[i] -= step;
      const double vp = f.V(xp), vm = f.V(xm), v0 = f.V(x);
      const double fd1 = (vp - vm) / (2 * step);
      const double fd2 = (vp - 2 * v0 + vm) / (step * step);
      if (std::fabs(fd1 - g[i]) > 1e-4 * (1.0 + std::fabs(fd1))) return false;
      if (std::fabs(fd2 - hd[i]) > 1e-3 * (1.0 + std::fabs(fd2))) return false;
    }
  }
  return true;
}

}  // namespace ineqlab
