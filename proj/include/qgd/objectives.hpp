#pragma once

#include <optional>
#include <vector>

#include "qgd/bits.hpp"
#include "qgd/geometry.hpp"
#include "qgd/rng.hpp"
#include "qgd/vec.hpp"

namespace qgd {

/// One term a * ||x - y||^2 of a quadratic sum.
struct QuadraticTerm {
  double weight = 0;  // a >= 0
  Vec center;         // y
};

/// F(x) = sum_j a_j ||x - y_j||^2 over a common dimension.
struct QuadraticSum {
  int d = 0;
  std::vector<QuadraticTerm> terms;

  static QuadraticSum make(int d, std::vector<QuadraticTerm> terms);

  double total_weight() const;  // A = sum a_j
};

/// F(x) = A ||x - xstar||^2 + C with A > 0.
struct CanonicalQuadratic {
  double curvature = 0;  // A
  Vec minimiser;         // xstar
  double min_value = 0;  // C
};

double quad_eval(const QuadraticSum& f, const Vec& x);
Vec quad_grad(const QuadraticSum& f, const Vec& x);
CanonicalQuadratic canonical_form(const QuadraticSum& f);

/// Sampled check of alpha-strong convexity and beta-strong smoothness via the
/// gradient inequalities. A violation is reported with the witness pair, not
/// thrown.
struct ProbeResult {
  bool pass = true;
  Vec witness_x, witness_y;
  double lhs = 0, rhs = 0;
  std::string which;  // "convexity" or "smoothness"
};

template <typename EvalGrad>
ProbeResult convexity_smoothness_probe(const EvalGrad& grad, int d, double alpha,
                                       double beta, int sample_pairs,
                                       uint64_t seed) {
  Rng rng(seed);
  const double rel_tol = 1e-9;
  for (int s = 0; s < sample_pairs; ++s) {
    Vec x(static_cast<size_t>(d)), y(static_cast<size_t>(d));
    for (auto& v : x) v = rng.unit();
    for (auto& v : y) v = rng.unit();
    Vec gx = grad(x), gy = grad(y);
    Vec dg = sub(gx, gy), dx = sub(x, y);
    double dd = norm2_sq(dx);
    if (dd == 0) continue;
    double inner = dot(dg, dx);
    double conv_rhs = alpha * dd;
    if (inner < conv_rhs * (1.0 - rel_tol) - 1e-15)
      return {false, x, y, inner, conv_rhs, "convexity"};
    double gnorm = norm2(dg);
    double smooth_rhs = beta * std::sqrt(dd);
    if (gnorm > smooth_rhs * (1.0 + rel_tol) + 1e-15)
      return {false, x, y, gnorm, smooth_rhs, "smoothness"};
  }
  return {};
}

ProbeResult probe_quadratic(const QuadraticSum& f, double alpha, double beta,
                            int sample_pairs, uint64_t seed);

/// Non-convex objective of the disjointness construction: rises linearly away
/// from each selected packing point, capped at the plateau level eps.
///   f(x) = beta * ||x - s||  if the nearest selected s has ||x - s|| < eps/beta
///   f(x) = eps               otherwise
class ConeObjective {
 public:
  ConeObjective(const PackingSet& packing, const BitString& selected,
                double beta, double eps);

  double eval(const Vec& x) const;
  Vec grad(const Vec& x) const;  // 0 on the plateau and at apexes

  double beta() const { return beta_; }
  double eps() const { return eps_; }
  int dim() const { return d_; }
  const PointSet& selected_points() const { return selected_pts_; }

 private:
  int d_;
  double beta_, eps_;
  PointSet selected_pts_;
};

ProbeResult probe_cone(const ConeObjective& f, double alpha, double beta,
                       int sample_pairs, uint64_t seed);

}  // namespace qgd
