#include "qgd/geometry.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <unordered_map>

#include "qgd/kernels.hpp"

namespace qgd {

namespace {

constexpr double kSpacingInflation = 1.0 + 0x1.0p-30;
constexpr size_t kMaxPackingPoints = size_t{1} << 26;

// Per-axis values {0, s, 2s, ...} capped to [0,1].
std::vector<double> axis_values(double s) {
  std::vector<double> vals;
  int64_t m = static_cast<int64_t>(std::floor(1.0 / s));
  while (m > 0 && static_cast<double>(m) * s > 1.0) --m;
  for (int64_t i = 0; i <= m; ++i) vals.push_back(static_cast<double>(i) * s);
  return vals;
}

PointSet product_grid(int d, const std::vector<double>& axis) {
  const size_t per = axis.size();
  double total_log = d * std::log2(static_cast<double>(per));
  if (total_log > std::log2(static_cast<double>(kMaxPackingPoints)))
    fail(Errc::params_out_of_range, "grid would exceed the point budget");
  size_t total = 1;
  for (int k = 0; k < d; ++k) total *= per;
  PointSet pts(d);
  pts.data.reserve(total * d);
  std::vector<size_t> digit(static_cast<size_t>(d), 0);
  std::vector<double> p(static_cast<size_t>(d), axis[0]);
  for (size_t i = 0; i < total; ++i) {
    pts.push(p);
    // lexicographic order: last coordinate fastest
    for (int k = d - 1; k >= 0; --k) {
      if (++digit[k] < per) {
        p[k] = axis[digit[k]];
        break;
      }
      digit[k] = 0;
      p[k] = axis[0];
    }
  }
  return pts;
}

void certify(const PackingSet& s) {
  if (s.size() < 2) return;
  double got = kernels::min_pairwise_distance(s.points);
  if (!(got > s.delta))
    fail(Errc::infeasible_packing, "certification failed: min distance " +
                                       std::to_string(got) + " <= delta");
}

}  // namespace

int PackingSet::codeword_bits() const {
  if (size() < 2) fail(Errc::degenerate_input, "packing has fewer than 2 points");
  uint64_t n = size();
  return static_cast<int>(std::bit_width(n - 1));
}

PackingSet grid_packing(int d, double delta) {
  if (d < 1) fail(Errc::domain, "dimension must be >= 1");
  if (!(delta > 0)) fail(Errc::domain, "delta must be positive");
  if (!(delta < std::sqrt(static_cast<double>(d))))
    fail(Errc::infeasible_packing,
         "delta >= sqrt(d): no two points of the cube are that far apart");
  double s = delta * kSpacingInflation;
  std::vector<double> axis =
      s > 1.0 ? std::vector<double>{0.0} : axis_values(s);
  PackingSet out;
  out.d = d;
  out.delta = delta;
  out.points = product_grid(d, axis);
  certify(out);
  return out;
}

PackingSet packing_from_points(PointSet pts, double delta) {
  PackingSet out;
  out.d = pts.dim;
  out.delta = delta;
  out.points = std::move(pts);
  certify(out);
  return out;
}

double packing_volume_bound(int d, double delta) {
  const double c = std::sqrt(M_PI * M_E / 2.0);
  return std::pow(std::sqrt(static_cast<double>(d)) / (c * delta),
                  static_cast<double>(d));
}

PackingSet greedy_packing_oracle(int d, double delta, double candidate_spacing) {
  if (d < 1 || d > 3) fail(Errc::oracle_scale, "greedy oracle supports d <= 3");
  if (!(delta > 0) || !(delta < std::sqrt(static_cast<double>(d))))
    fail(Errc::infeasible_packing, "delta out of range");
  if (!(candidate_spacing > 0) || candidate_spacing > delta / 4.0)
    fail(Errc::params_out_of_range, "candidate spacing must be in (0, delta/4]");

  std::vector<double> axis = axis_values(candidate_spacing);
  const size_t per = axis.size();

  // Bucket admitted points by cells of size delta so each admission check
  // touches only the 3^d neighbouring cells.
  const int cells = static_cast<int>(std::floor(1.0 / delta)) + 1;
  auto cell_of = [&](double v) {
    int c = static_cast<int>(std::floor(v / delta));
    return std::min(std::max(c, 0), cells - 1);
  };
  auto cell_key = [&](const double* p) {
    int key = 0;
    for (int k = 0; k < d; ++k) key = key * cells + cell_of(p[k]);
    return key;
  };
  std::vector<std::vector<int32_t>> buckets(
      static_cast<size_t>(std::pow(cells, d)));

  PointSet admitted(d);
  const double delta_sq = delta * delta;
  std::vector<double> p(static_cast<size_t>(d));
  std::vector<size_t> digit(static_cast<size_t>(d), 0);
  for (int k = 0; k < d; ++k) p[k] = axis[0];

  size_t total = 1;
  for (int k = 0; k < d; ++k) total *= per;
  std::vector<int> lo(static_cast<size_t>(d)), hi(static_cast<size_t>(d));
  for (size_t iter = 0; iter < total; ++iter) {
    bool blocked = false;
    for (int k = 0; k < d; ++k) {
      int c = cell_of(p[k]);
      lo[k] = std::max(0, c - 1);
      hi[k] = std::min(cells - 1, c + 1);
    }
    std::vector<int> cur(lo.begin(), lo.end());
    while (!blocked) {
      int key = 0;
      for (int k = 0; k < d; ++k) key = key * cells + cur[k];
      for (int32_t idx : buckets[key]) {
        if (dist2_sq(admitted[idx], p) <= delta_sq) {
          blocked = true;
          break;
        }
      }
      int k = d - 1;
      while (k >= 0) {
        if (++cur[k] <= hi[k]) break;
        cur[k] = lo[k];
        --k;
      }
      if (k < 0) break;
    }
    if (!blocked) {
      buckets[cell_key(p.data())].push_back(
          static_cast<int32_t>(admitted.size()));
      admitted.push(p);
    }
    for (int k = d - 1; k >= 0; --k) {
      if (++digit[k] < per) {
        p[k] = axis[digit[k]];
        break;
      }
      digit[k] = 0;
      p[k] = axis[0];
    }
  }

  PackingSet out;
  out.d = d;
  out.delta = delta;
  out.points = std::move(admitted);
  certify(out);
  return out;
}

NetSet epsilon_net(int d, double radius) {
  if (d < 1) fail(Errc::domain, "dimension must be >= 1");
  if (!(radius > 0)) fail(Errc::domain, "radius must be positive");
  double h = 2.0 * radius / std::sqrt(static_cast<double>(d));
  std::vector<double> axis;
  if (h >= 1.0) {
    axis = {0.5};  // single cell: the midpoint covers [0,1] within h/2
  } else {
    axis = axis_values(h);
    if (axis.back() < 1.0) axis.push_back(1.0);
  }
  NetSet out;
  out.d = d;
  out.radius = radius;
  out.points = product_grid(d, axis);
  return out;
}

Vec index_to_point(const PackingSet& s, uint64_t index) {
  if (index >= s.size())
    fail(Errc::out_of_range, "codeword indexes past the packing");
  return s.points.point(index);
}

uint64_t point_to_index(const PackingSet& s, const Vec& p) {
  if (static_cast<int>(p.size()) != s.d)
    fail(Errc::shape_mismatch, "point dimension mismatch");
  for (size_t i = 0; i < s.size(); ++i) {
    auto q = s.points[i];
    if (std::memcmp(q.data(), p.data(), sizeof(double) * p.size()) == 0)
      return i;
  }
  fail(Errc::out_of_range, "point is not a member of the packing");
}

Vec codeword_to_point(const PackingSet& s, const BitString& b) {
  if (static_cast<int>(b.size()) != s.codeword_bits())
    fail(Errc::format, "codeword width does not match the packing");
  return index_to_point(s, b.as_uint());
}

BitString point_to_codeword(const PackingSet& s, const Vec& p) {
  uint64_t idx = point_to_index(s, p);
  return BitString::from_uint(idx, s.codeword_bits());
}

double min_pairwise_distance(const PointSet& pts) {
  return kernels::min_pairwise_distance(pts);
}

}  // namespace qgd
