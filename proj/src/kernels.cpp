#include "qgd/kernels.hpp"

#include <cmath>
#include <limits>

namespace qgd::kernels {

namespace {

inline double pair_dist2_sq(const double* a, const double* b, int d) {
  double s = 0;
  for (int k = 0; k < d; ++k) {
    double t = a[k] - b[k];
    s += t * t;
  }
  return s;
}

}  // namespace

double min_pairwise_distance_serial(const PointSet& pts) {
  const size_t n = pts.size();
  if (n < 2) fail(Errc::degenerate_input, "need at least 2 points");
  const int d = pts.dim;
  const double* base = pts.data.data();
  double best = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i + 1 < n; ++i)
    for (size_t j = i + 1; j < n; ++j)
      best = std::min(best, pair_dist2_sq(base + i * d, base + j * d, d));
  return std::sqrt(best);
}

double min_pairwise_distance(const PointSet& pts) {
  const size_t n = pts.size();
  if (n < 2) fail(Errc::degenerate_input, "need at least 2 points");
  const int d = pts.dim;
  const double* base = pts.data.data();
  double best = std::numeric_limits<double>::infinity();
#pragma omp parallel for schedule(dynamic, 64) reduction(min : best)
  for (int64_t i = 0; i < static_cast<int64_t>(n) - 1; ++i)
    for (size_t j = static_cast<size_t>(i) + 1; j < n; ++j)
      best = std::min(best, pair_dist2_sq(base + i * d, base + j * d, d));
  return std::sqrt(best);
}

size_t nearest_index_serial(const PointSet& pts, std::span<const double> x) {
  const size_t n = pts.size();
  if (n == 0) fail(Errc::degenerate_input, "empty point set");
  const int d = pts.dim;
  const double* base = pts.data.data();
  size_t best_i = 0;
  double best = pair_dist2_sq(base, x.data(), d);
  for (size_t i = 1; i < n; ++i) {
    double v = pair_dist2_sq(base + i * d, x.data(), d);
    if (v < best) {
      best = v;
      best_i = i;
    }
  }
  return best_i;
}

size_t nearest_index(const PointSet& pts, std::span<const double> x) {
  const size_t n = pts.size();
  if (n == 0) fail(Errc::degenerate_input, "empty point set");
  const int d = pts.dim;
  const double* base = pts.data.data();
  // Fixed-size blocks with an ordered combine keep the argmin deterministic
  // (ties resolve to the lowest index) for any thread count.
  const size_t block = 1024;
  const size_t nblocks = (n + block - 1) / block;
  std::vector<double> bbest(nblocks);
  std::vector<size_t> bidx(nblocks);
#pragma omp parallel for schedule(static)
  for (int64_t b = 0; b < static_cast<int64_t>(nblocks); ++b) {
    size_t lo = static_cast<size_t>(b) * block;
    size_t hi = std::min(n, lo + block);
    size_t best_i = lo;
    double best = pair_dist2_sq(base + lo * d, x.data(), d);
    for (size_t i = lo + 1; i < hi; ++i) {
      double v = pair_dist2_sq(base + i * d, x.data(), d);
      if (v < best) {
        best = v;
        best_i = i;
      }
    }
    bbest[b] = best;
    bidx[b] = best_i;
  }
  size_t best_i = bidx[0];
  double best = bbest[0];
  for (size_t b = 1; b < nblocks; ++b) {
    if (bbest[b] < best) {
      best = bbest[b];
      best_i = bidx[b];
    }
  }
  return best_i;
}

double max_cover_distance_serial(const PointSet& net, const PointSet& samples) {
  const size_t n = samples.size();
  if (net.size() == 0) fail(Errc::degenerate_input, "empty net");
  double worst = 0;
  for (size_t i = 0; i < n; ++i) {
    size_t j = nearest_index_serial(net, samples[i]);
    worst = std::max(worst, dist2_sq(net[j], samples[i]));
  }
  return std::sqrt(worst);
}

double max_cover_distance(const PointSet& net, const PointSet& samples) {
  const size_t n = samples.size();
  if (net.size() == 0) fail(Errc::degenerate_input, "empty net");
  double worst = 0;
#pragma omp parallel for schedule(static) reduction(max : worst)
  for (int64_t i = 0; i < static_cast<int64_t>(n); ++i) {
    size_t j = nearest_index_serial(net, samples[i]);
    worst = std::max(worst, dist2_sq(net[j], samples[i]));
  }
  return std::sqrt(worst);
}

void nearest_site_map_serial(const PointSet& sites, const PointSet& queries,
                             std::vector<int32_t>& idx, std::vector<double>& dist) {
  const size_t n = queries.size();
  idx.resize(n);
  dist.resize(n);
  for (size_t i = 0; i < n; ++i) {
    size_t j = nearest_index_serial(sites, queries[i]);
    idx[i] = static_cast<int32_t>(j);
    dist[i] = std::sqrt(dist2_sq(sites[j], queries[i]));
  }
}

void nearest_site_map(const PointSet& sites, const PointSet& queries,
                      std::vector<int32_t>& idx, std::vector<double>& dist) {
  const size_t n = queries.size();
  idx.resize(n);
  dist.resize(n);
#pragma omp parallel for schedule(static)
  for (int64_t i = 0; i < static_cast<int64_t>(n); ++i) {
    size_t j = nearest_index_serial(sites, queries[i]);
    idx[i] = static_cast<int32_t>(j);
    dist[i] = std::sqrt(dist2_sq(sites[j], queries[i]));
  }
}

}  // namespace qgd::kernels
