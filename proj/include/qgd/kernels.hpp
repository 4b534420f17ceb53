#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "qgd/vec.hpp"

namespace qgd::kernels {

// Data-parallel scan kernels. Each has a serial reference implementation and
// an OpenMP variant; the unsuffixed name dispatches to the OpenMP build when
// available. All reductions here are exact (min/max/argmin on doubles), so
// serial and parallel variants return bit-identical results for any thread
// count; tests assert this and benchmarks/ compares their throughput.

/// Exact O(n^2) minimum pairwise L2 distance. Throws degenerate_input if n < 2.
double min_pairwise_distance_serial(const PointSet& pts);
double min_pairwise_distance(const PointSet& pts);

/// Index of the point closest to x (ties: lowest index).
size_t nearest_index_serial(const PointSet& pts, std::span<const double> x);
size_t nearest_index(const PointSet& pts, std::span<const double> x);

/// max over samples of (min distance to net); the covering radius estimate.
double max_cover_distance_serial(const PointSet& net, const PointSet& samples);
double max_cover_distance(const PointSet& net, const PointSet& samples);

/// For each query point: index of and distance to the nearest site.
void nearest_site_map_serial(const PointSet& sites, const PointSet& queries,
                             std::vector<int32_t>& idx, std::vector<double>& dist);
void nearest_site_map(const PointSet& sites, const PointSet& queries,
                      std::vector<int32_t>& idx, std::vector<double>& dist);

}  // namespace qgd::kernels
