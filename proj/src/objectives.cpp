#include "qgd/objectives.hpp"

#include <cmath>

#include "qgd/kernels.hpp"

namespace qgd {

QuadraticSum QuadraticSum::make(int d, std::vector<QuadraticTerm> terms) {
  if (d < 1) fail(Errc::domain, "dimension must be >= 1");
  for (const auto& t : terms) {
    if (!(t.weight >= 0)) fail(Errc::domain, "term weight must be >= 0");
    if (static_cast<int>(t.center.size()) != d)
      fail(Errc::shape_mismatch, "term center dimension mismatch");
    if (!all_finite(t.center)) fail(Errc::domain, "term center must be finite");
  }
  QuadraticSum f;
  f.d = d;
  f.terms = std::move(terms);
  return f;
}

double QuadraticSum::total_weight() const {
  double a = 0;
  for (const auto& t : terms) a += t.weight;
  return a;
}

double quad_eval(const QuadraticSum& f, const Vec& x) {
  if (static_cast<int>(x.size()) != f.d)
    fail(Errc::shape_mismatch, "evaluation point dimension mismatch");
  double v = 0;
  for (const auto& t : f.terms) v += t.weight * dist2_sq(x, t.center);
  return v;
}

Vec quad_grad(const QuadraticSum& f, const Vec& x) {
  if (static_cast<int>(x.size()) != f.d)
    fail(Errc::shape_mismatch, "evaluation point dimension mismatch");
  Vec g(x.size(), 0.0);
  for (const auto& t : f.terms)
    for (size_t k = 0; k < x.size(); ++k)
      g[k] += 2.0 * t.weight * (x[k] - t.center[k]);
  return g;
}

CanonicalQuadratic canonical_form(const QuadraticSum& f) {
  double a = f.total_weight();
  if (!(a > 0)) fail(Errc::degenerate_curvature, "sum of weights is zero");
  Vec xstar(static_cast<size_t>(f.d), 0.0);
  for (const auto& t : f.terms)
    for (size_t k = 0; k < xstar.size(); ++k)
      xstar[k] += t.weight * t.center[k];
  for (auto& v : xstar) v /= a;
  return {a, xstar, quad_eval(f, xstar)};
}

ProbeResult probe_quadratic(const QuadraticSum& f, double alpha, double beta,
                            int sample_pairs, uint64_t seed) {
  return convexity_smoothness_probe([&](const Vec& x) { return quad_grad(f, x); },
                                    f.d, alpha, beta, sample_pairs, seed);
}

ConeObjective::ConeObjective(const PackingSet& packing, const BitString& selected,
                             double beta, double eps)
    : d_(packing.d), beta_(beta), eps_(eps), selected_pts_(packing.d) {
  if (!(beta > 0) || !(eps > 0)) fail(Errc::domain, "beta and eps must be positive");
  if (selected.size() != packing.size())
    fail(Errc::shape_mismatch, "selection string length != packing size");
  if (packing.size() >= 2 && !(packing.delta >= 2.0 * eps / beta))
    fail(Errc::ill_posed_cone,
         "packing separation below 2*eps/beta; cones would overlap");
  for (size_t i = 0; i < packing.size(); ++i)
    if (selected.get(i)) selected_pts_.push(packing.points[i]);
}

double ConeObjective::eval(const Vec& x) const {
  if (static_cast<int>(x.size()) != d_)
    fail(Errc::shape_mismatch, "evaluation point dimension mismatch");
  if (selected_pts_.size() == 0) return eps_;
  size_t j = kernels::nearest_index(selected_pts_, x);
  double dist = std::sqrt(dist2_sq(selected_pts_[j], x));
  return dist < eps_ / beta_ ? beta_ * dist : eps_;
}

Vec ConeObjective::grad(const Vec& x) const {
  if (static_cast<int>(x.size()) != d_)
    fail(Errc::shape_mismatch, "evaluation point dimension mismatch");
  Vec g(x.size(), 0.0);
  if (selected_pts_.size() == 0) return g;
  size_t j = kernels::nearest_index(selected_pts_, x);
  double dist = std::sqrt(dist2_sq(selected_pts_[j], x));
  if (dist == 0.0 || dist >= eps_ / beta_) return g;
  auto s = selected_pts_[j];
  for (size_t k = 0; k < x.size(); ++k) g[k] = beta_ * (x[k] - s[k]) / dist;
  return g;
}

ProbeResult probe_cone(const ConeObjective& f, double alpha, double beta,
                       int sample_pairs, uint64_t seed) {
  return convexity_smoothness_probe([&](const Vec& x) { return f.grad(x); },
                                    f.dim(), alpha, beta, sample_pairs, seed);
}

}  // namespace qgd
