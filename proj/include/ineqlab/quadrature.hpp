#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <queue>
#include <vector>

#include "ineqlab/core.hpp"

namespace ineqlab {

struct QuadResult {
  double value = 0;
  double error = 0;   // estimated absolute error
  bool converged = true;
  int panels = 0;
};

namespace detail {

// Gauss 7 / Kronrod 15 pair (QUADPACK abscissae, positive half).
inline constexpr double kXgk[8] = {
    0.9914553711208126, 0.9491079123427585, 0.8648644233597691,
    0.7415311855993944, 0.5860872354676911, 0.4058451513773972,
    0.2077849550078985, 0.0};
inline constexpr double kWgk[8] = {
    0.0229353220105292, 0.0630920926299785, 0.1047900103222502,
    0.1406532597155259, 0.1690047266392679, 0.1903505780647854,
    0.2044329400752989, 0.2094821410847278};
inline constexpr double kWg[4] = {
    0.1294849661688697, 0.2797053914892767, 0.3818300505051189,
    0.4179591836734694};

// One K15 panel on [a,b]; err is |K15 - G7| sharpened the QUADPACK way.
template <class F>
inline void gk_panel(F&& f, double a, double b, double& value, double& err) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  const double fc = f(c);
  double resk = kWgk[7] * fc;
  double resg = kWg[3] * fc;
  double resabs = kWgk[7] * std::fabs(fc);
  for (int j = 0; j < 7; ++j) {
    const double dx = h * kXgk[j];
    const double f1 = f(c - dx), f2 = f(c + dx);
    resk += kWgk[j] * (f1 + f2);
    resabs += kWgk[j] * (std::fabs(f1) + std::fabs(f2));
    if (j % 2 == 1) resg += kWg[j / 2] * (f1 + f2);
  }
  value = resk * h;
  err = std::fabs((resk - resg) * h);
  resabs *= std::fabs(h);
  if (resabs > 0 && err > 0) {
    const double scaled = 200.0 * err / resabs;
    err = resabs * std::min(1.0, std::sqrt(scaled) * scaled);
  }
}

}  // namespace detail

// Adaptive bisection, worst panel first.  Stops when the summed error
// estimate drops under max(abs_tol, rel_tol*|integral|) or the panel budget
// runs out (converged=false then; no throw, callers decide).
template <class F>
inline QuadResult gk_adaptive(F&& f, double a, double b, double abs_tol,
                              double rel_tol, int max_panels = 4000) {
  QuadResult out;
  if (a == b) return out;
  struct Seg {
    double a, b, value, err;
    bool operator<(const Seg& o) const { return err < o.err; }
  };
  std::priority_queue<Seg> heap;
  Seg s{a, b, 0, 0};
  detail::gk_panel(f, a, b, s.value, s.err);
  heap.push(s);
  double total = s.value, toterr = s.err;
  int panels = 1;
  while (toterr > std::max(abs_tol, rel_tol * std::fabs(total)) &&
         panels < max_panels) {
    Seg worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b) {  // interval at double resolution
      heap.push(worst);
      break;
    }
    Seg l{worst.a, mid, 0, 0}, r{mid, worst.b, 0, 0};
    detail::gk_panel(f, l.a, l.b, l.value, l.err);
    detail::gk_panel(f, r.a, r.b, r.value, r.err);
    total += l.value + r.value - worst.value;
    toterr += l.err + r.err - worst.err;
    heap.push(l);
    heap.push(r);
    ++panels;
  }
  out.value = total;
  out.error = toterr;
  out.panels = panels;
  out.converged = toterr <= std::max(abs_tol, rel_tol * std::fabs(total));
  return out;
}

inline double integrate_or_throw(const std::function<double(double)>& f,
                                 double a, double b, double abs_tol,
                                 double rel_tol, const char* what) {
  QuadResult r = gk_adaptive(f, a, b, abs_tol, rel_tol);
  if (!r.converged)
    throw NumericError(std::string("quadrature failed to converge in ") + what);
  return r.value;
}

}  // namespace ineqlab
