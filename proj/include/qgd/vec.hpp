#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "qgd/error.hpp"

namespace qgd {

using Vec = std::vector<double>;

inline void require_same_dim(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) fail(Errc::shape_mismatch, "dimension mismatch");
}

inline bool all_finite(std::span<const double> v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

inline double dot(const Vec& a, const Vec& b) {
  require_same_dim(a, b);
  double s = 0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm2_sq(std::span<const double> v) {
  double s = 0;
  for (double x : v) s += x * x;
  return s;
}

inline double norm2(std::span<const double> v) { return std::sqrt(norm2_sq(v)); }

inline double dist2_sq(std::span<const double> a, std::span<const double> b) {
  double s = 0;
  for (size_t i = 0; i < a.size(); ++i) {
    double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

inline double dist2(const Vec& a, const Vec& b) {
  require_same_dim(a, b);
  return std::sqrt(dist2_sq(a, b));
}

inline Vec sub(const Vec& a, const Vec& b) {
  require_same_dim(a, b);
  Vec r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

inline Vec add(const Vec& a, const Vec& b) {
  require_same_dim(a, b);
  Vec r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

inline Vec scaled(const Vec& a, double c) {
  Vec r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = c * a[i];
  return r;
}

inline void add_scaled_inplace(Vec& a, double c, const Vec& b) {
  require_same_dim(a, b);
  for (size_t i = 0; i < a.size(); ++i) a[i] += c * b[i];
}

/// Flat, cache-friendly storage for n points of equal dimension.
struct PointSet {
  int dim = 0;
  std::vector<double> data;  // size() * dim doubles, point-major

  PointSet() = default;
  explicit PointSet(int d) : dim(d) {}

  size_t size() const { return dim == 0 ? 0 : data.size() / dim; }

  std::span<const double> operator[](size_t i) const {
    return {data.data() + i * dim, static_cast<size_t>(dim)};
  }

  Vec point(size_t i) const {
    auto s = (*this)[i];
    return Vec(s.begin(), s.end());
  }

  void push(std::span<const double> p) {
    if (static_cast<int>(p.size()) != dim)
      fail(Errc::shape_mismatch, "point dimension mismatch");
    data.insert(data.end(), p.begin(), p.end());
  }
};

}  // namespace qgd
