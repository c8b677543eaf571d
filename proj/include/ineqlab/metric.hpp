#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "ineqlab/core.hpp"
#include "ineqlab/weight.hpp"

namespace ineqlab {

// n factors of R^d, row-major: coordinates[i*d + j] is x_{i,j}.
struct ProductPoint {
  std::size_t n = 1;
  std::size_t d = 1;
  std::vector<double> coordinates;

  double at(std::size_t i, std::size_t j) const { return coordinates[i * d + j]; }
  double& at(std::size_t i, std::size_t j) { return coordinates[i * d + j]; }

  void validate() const {
    if (n < 1 || d < 1) throw InvalidParameter("ProductPoint: n,d must be >= 1");
    if (coordinates.size() != n * d)
      throw SizeError("ProductPoint: coordinate count does not match n*d");
    for (double c : coordinates)
      if (!std::isfinite(c)) throw InvalidParameter("ProductPoint: non-finite entry");
  }
};

// {x : x_{i,j} <= m} or {x : x_{i,j} >= m} — the only set family with an
// exact enlargement infimum (all other coordinates are free).
struct HalfSpaceSet {
  std::size_t i = 0;
  std::size_t j = 0;
  double m = 0;
  bool leq = true;
};

inline double d_omega(const std::vector<double>& x, const std::vector<double>& y,
                      const WeightFunction& w) {
  if (x.size() != y.size()) throw SizeError("d_omega: dimension mismatch");
  double s = 0;
  for (std::size_t k = 0; k < x.size(); ++k) s += sq(w.eval(x[k]) - w.eval(y[k]));
  return std::sqrt(s);
}

// [sum_i grad_i^2 / w'(x_i)^2]^{1/2}
inline double grad_length_weighted(const std::vector<double>& gradient,
                                   const std::vector<double>& x,
                                   const WeightFunction& w) {
  if (gradient.size() != x.size())
    throw SizeError("grad_length_weighted: dimension mismatch");
  double s = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double dp = w.deriv1(x[k]);
    if (dp == 0) throw SingularWeight("grad_length_weighted: w' vanishes");
    s += sq(gradient[k] / dp);
  }
  return std::sqrt(s);
}

// inf over a in A of sum_{i,j} alpha(w(|y_{i,j} - a_{i,j}|/2)).  For a
// half-space only the pinned coordinate contributes: alpha(w((y-m)_+ / 2)).
inline double enlargement_cost(const ProductPoint& y, const HalfSpaceSet& A,
                               const WeightFunction& w) {
  y.validate();
  if (A.i >= y.n || A.j >= y.d)
    throw UnsupportedSet("enlargement_cost: half-space coordinate out of range");
  const double c = y.at(A.i, A.j);
  const double excess = A.leq ? c - A.m : A.m - c;
  if (excess <= 0) return 0.0;
  return alpha(w.eval(excess / 2.0));
}

struct BallSumResult {
  bool member = false;
  double v2sq = 0;  // |v|_2^2 over the small entries (|u_k| <= 1)
  double wpp = 0;   // |w|_p^p over the large entries
};

// Constructive split of u into v (entries with |u_k| <= 1) and w (the rest);
// certifies u in sqrt(h) B_2 + h^{1/p} B_p when |v|_2 <= sqrt(h) and
// |w|_p <= h^{1/p}.
inline BallSumResult ball_sum_membership(const std::vector<double>& u, double h,
                                         double p) {
  if (!(h >= 0)) throw InvalidParameter("ball_sum_membership: h must be >= 0");
  if (!(p >= 1.0) || !(p <= 2.0))
    throw InvalidParameter("ball_sum_membership: p must lie in [1,2]");
  BallSumResult r;
  for (double uk : u) {
    const double a = std::fabs(uk);
    if (a <= 1.0)
      r.v2sq += a * a;
    else
      r.wpp += std::pow(a, p);
  }
  r.member = r.v2sq <= h && r.wpp <= h;
  return r;
}

}  // namespace ineqlab
