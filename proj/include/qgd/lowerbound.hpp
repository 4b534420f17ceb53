#pragma once

#include <cstdint>
#include <vector>

#include "qgd/descent.hpp"
#include "qgd/geometry.hpp"
#include "qgd/objectives.hpp"
#include "qgd/vec.hpp"

namespace qgd {

// ---------------------------------------------------------------------------
// AVG: output a net point within sqrt(eps/beta) of the average of the nodes'
// packing points.
// ---------------------------------------------------------------------------

struct AvgParams {
  int n_nodes = 0;
  int d = 0;
  double eps = 0;
  double beta = 0;
};

struct AvgInstance {
  AvgParams params;
  PackingSet packing;  // separation 3N*sqrt(eps/beta)
  NetSet net;          // covering radius sqrt(eps/(4 beta))
  std::vector<uint64_t> codewords;  // packing indices b_1..b_N
  Vec xstar;                        // mean of the selected points

  double answer_radius() const;    // sqrt(eps/beta)
  double recovery_radius() const;  // N*sqrt(eps/beta)
};

/// Seeded instance with codewords drawn uniformly from the packing index
/// space. Throws params_out_of_range when the packing is infeasible or has
/// fewer than two points.
AvgInstance make_avg_instance(const AvgParams& params, uint64_t seed);

/// True iff t is a net point within sqrt(eps/beta) of the true average.
/// Non-net t is a domain error.
bool avg_output_valid(const AvgInstance& inst, const Vec& t);

Vec nearest_net_point(const AvgInstance& inst, const Vec& x);

/// Recover b_1 from a valid output t and the other nodes' codewords via
/// v = N t - (N-1) y: returns the index of the unique packing point within
/// N*sqrt(eps/beta) of v, or throws recovery_failure.
uint64_t symmetrisation_recover(const AvgInstance& inst, const Vec& t,
                                const std::vector<uint64_t>& others);

// ---------------------------------------------------------------------------
// EQ: equality decided through an eps-approximate minimum-value estimate.
// ---------------------------------------------------------------------------

struct EqParams {
  int n_nodes = 0;
  int d = 0;
  double eps = 0;
  double beta = 0;  // beta0 * N
};

/// Inputs f_i = beta0 ||x - tau(b_i)||^2 over a packing separated enough that
/// any two distinct inputs force min F > 2 eps. A separation of
/// (2 eps/beta)^(1/2) would leave the closest-pair midpoint value at only
/// eps/N, so instances use delta_eq = 2 (N eps/beta)^(1/2) (1+1e-6) and the
/// gap is asserted numerically at construction.
struct EqInstance {
  EqParams params;
  double beta0 = 0;
  double delta_eq = 0;
  PackingSet packing;
  std::vector<uint64_t> codewords;
  std::vector<QuadraticSum> objectives;

  bool all_equal() const;
};

EqInstance make_eq_instance(const EqParams& params, uint64_t seed);

/// Build from explicit parts; asserts the construction gap (evaluates the two
/// closest distinct selected centers' pair sum at their midpoint) and throws
/// instance_construction when it is not above 2 eps.
EqInstance make_eq_instance_with(PackingSet packing,
                                 std::vector<uint64_t> codewords, double beta,
                                 double eps);

/// 1 iff r <= 2 eps (equal inputs force r <= 2 eps, distinct force r > 2 eps).
int eq_adjudicate(double r, double eps);

enum class EqSolver { exact, quantised_gd };

struct EqResult {
  int bit = 0;
  double r = 0;           // minimum-value estimate fed to the adjudicator
  bool ground_truth = false;
  bool matches = false;
};

EqResult eq_end_to_end(const EqInstance& inst, EqSolver solver);

// ---------------------------------------------------------------------------
// DISJ: set disjointness through cone objectives.
// ---------------------------------------------------------------------------

struct DisjResult {
  double infimum = 0;       // grid-search estimate of inf sum f_i
  bool intersecting = false;  // classification: infimum below eps/2
};

/// Brute-force grid search (spacing <= eps/(4 beta sqrt(d)), plus the packing
/// points themselves as candidates) over [0,1]^d. Restricted to d <= 2.
DisjResult disj_gap_check(const std::vector<BitString>& selections,
                          const PackingSet& packing, double beta, double eps);

/// Instance-independent part of the grid search: per candidate point, the
/// nearest packing site and beta * distance. Reusing it across an exhaustive
/// sweep gives values identical to disj_gap_check (the nearest selected site
/// of any point inside a cone is the globally nearest site).
struct DisjGridCache {
  int n_sites = 0;
  double beta = 0, eps = 0;
  std::vector<int32_t> site;
  std::vector<double> beta_dist;
};

DisjGridCache build_disj_cache(const PackingSet& packing, double beta, double eps);
DisjResult disj_gap_check_cached(const DisjGridCache& cache,
                                 const std::vector<BitString>& selections);

/// Ground truth: is there a site selected by every node?
bool selections_intersect(const std::vector<BitString>& selections, size_t n_sites);

// ---------------------------------------------------------------------------
// Raw bound magnitudes for report plotting (no hidden constants claimed).
// ---------------------------------------------------------------------------

struct BoundValues {
  double lower_rand_raw = 0;  // N d log2(beta d / (N eps))
  double lower_det_raw = 0;   // N d log2(beta d / eps)
  double upper_raw = 0;       // N d kappa log2(kappa) log2(beta W / eps)
};

/// Each log2 argument evaluates with a floor of 1 on the log value.
BoundValues bound_values(int n_nodes, int d, double eps, double beta,
                         double kappa, double W);

}  // namespace qgd
