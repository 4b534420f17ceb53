#pragma once

#include <cstdint>
#include <vector>

#include "qgd/bits.hpp"
#include "qgd/vec.hpp"

namespace qgd {

/// Finite point set in [0,1]^d whose pairwise L2 distances all exceed `delta`.
/// The bound is certified (exact O(n^2) scan) whenever a set is constructed.
struct PackingSet {
  int d = 0;
  double delta = 0;
  PointSet points;

  size_t size() const { return points.size(); }

  /// Number of codeword bits: ceil(log2 |S|). Requires |S| >= 2.
  int codeword_bits() const;
};

/// Finite set covering [0,1]^d: every x is within `radius` of some point.
struct NetSet {
  int d = 0;
  double radius = 0;
  PointSet points;

  size_t size() const { return points.size(); }
};

/// Axis-aligned grid packing with per-coordinate spacing delta*(1+2^-30).
/// The inflation makes the certified distance strictly greater than delta
/// under floating-point rounding. Point count is (floor(1/spacing)+1)^d,
/// points enumerated lexicographically (last coordinate fastest).
PackingSet grid_packing(int d, double delta);

/// Wrap explicitly given points as a packing; certifies min distance > delta.
PackingSet packing_from_points(PointSet pts, double delta);

/// Greedy first-fit packing over a lexicographically ordered candidate grid
/// with per-coordinate step `candidate_spacing`. Test oracle for the packing
/// volume bound; restricted to d <= 3.
PackingSet greedy_packing_oracle(int d, double delta, double candidate_spacing);

/// Volume lower bound (d^(1/2) / (C*delta))^d with C = (pi*e/2)^(1/2).
double packing_volume_bound(int d, double delta);

/// Grid net with per-coordinate spacing 2*radius/sqrt(d); covering radius is
/// at most `radius` (half-diagonal of a cell).
NetSet epsilon_net(int d, double radius);

/// sigma: codewords (little-endian index, ceil(log2 |S|) bits) <-> points of S
/// in enumeration order.
Vec codeword_to_point(const PackingSet& s, const BitString& b);
BitString point_to_codeword(const PackingSet& s, const Vec& p);
Vec index_to_point(const PackingSet& s, uint64_t index);
uint64_t point_to_index(const PackingSet& s, const Vec& p);

/// Exact O(n^2) minimum pairwise distance (certification oracle).
double min_pairwise_distance(const PointSet& pts);

}  // namespace qgd
