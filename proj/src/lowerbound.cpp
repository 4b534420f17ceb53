#include "qgd/lowerbound.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "qgd/kernels.hpp"

namespace qgd {

double AvgInstance::answer_radius() const {
  return std::sqrt(params.eps / params.beta);
}

double AvgInstance::recovery_radius() const {
  return params.n_nodes * answer_radius();
}

AvgInstance make_avg_instance(const AvgParams& params, uint64_t seed) {
  if (params.n_nodes < 2 || params.d < 1 || !(params.eps > 0) ||
      !(params.beta > 0))
    fail(Errc::params_out_of_range, "need N >= 2, d >= 1, eps > 0, beta > 0");
  double root = std::sqrt(params.eps / params.beta);
  double delta = 3.0 * params.n_nodes * root;
  AvgInstance inst;
  inst.params = params;
  try {
    inst.packing = grid_packing(params.d, delta);
  } catch (const Error& e) {
    fail(Errc::params_out_of_range,
         std::string("packing with delta = 3N sqrt(eps/beta) infeasible: ") +
             e.what());
  }
  if (inst.packing.size() < 2)
    fail(Errc::params_out_of_range,
         "packing has a single point; needs d beta/(N^2 eps) large enough");
  inst.net = epsilon_net(params.d, root / 2.0);
  Rng rng(seed);
  for (int i = 0; i < params.n_nodes; ++i)
    inst.codewords.push_back(rng.below(inst.packing.size()));
  inst.xstar.assign(static_cast<size_t>(params.d), 0.0);
  for (uint64_t b : inst.codewords) {
    auto p = inst.packing.points[b];
    for (int k = 0; k < params.d; ++k) inst.xstar[static_cast<size_t>(k)] += p[k];
  }
  for (auto& v : inst.xstar) v /= params.n_nodes;
  return inst;
}

bool avg_output_valid(const AvgInstance& inst, const Vec& t) {
  if (static_cast<int>(t.size()) != inst.params.d)
    fail(Errc::shape_mismatch, "output dimension mismatch");
  bool member = false;
  for (size_t i = 0; i < inst.net.size() && !member; ++i) {
    auto p = inst.net.points[i];
    member = std::memcmp(p.data(), t.data(), sizeof(double) * t.size()) == 0;
  }
  if (!member) fail(Errc::domain, "candidate output is not a net point");
  return dist2(inst.xstar, t) <= inst.answer_radius();
}

Vec nearest_net_point(const AvgInstance& inst, const Vec& x) {
  return inst.net.points.point(kernels::nearest_index(inst.net.points, x));
}

uint64_t symmetrisation_recover(const AvgInstance& inst, const Vec& t,
                                const std::vector<uint64_t>& others) {
  const int n = inst.params.n_nodes;
  if (static_cast<int>(others.size()) != n - 1)
    fail(Errc::shape_mismatch, "expected N-1 other codewords");
  Vec y(static_cast<size_t>(inst.params.d), 0.0);
  for (uint64_t b : others) {
    auto p = inst.packing.points[b];
    for (int k = 0; k < inst.params.d; ++k) y[static_cast<size_t>(k)] += p[k];
  }
  for (auto& v : y) v /= (n - 1);
  Vec v(static_cast<size_t>(inst.params.d));
  for (size_t k = 0; k < v.size(); ++k) v[k] = n * t[k] - (n - 1) * y[k];

  double tol = inst.recovery_radius();
  int64_t found = -1;
  int count = 0;
  for (size_t i = 0; i < inst.packing.size(); ++i) {
    if (std::sqrt(dist2_sq(inst.packing.points[i], v)) <= tol) {
      ++count;
      found = static_cast<int64_t>(i);
    }
  }
  if (count > 1)
    fail(Errc::invariant_failure, "recovery window holds two packing points");
  if (count == 0)
    fail(Errc::recovery_failure, "no packing point within N sqrt(eps/beta)");
  return static_cast<uint64_t>(found);
}

bool EqInstance::all_equal() const {
  for (uint64_t b : codewords)
    if (b != codewords[0]) return false;
  return true;
}

namespace {

void assert_eq_gap(const EqInstance& inst) {
  const auto& cw = inst.codewords;
  double best = -1;
  size_t bi = 0, bj = 0;
  for (size_t i = 0; i < cw.size(); ++i)
    for (size_t j = i + 1; j < cw.size(); ++j) {
      if (cw[i] == cw[j]) continue;
      double d = std::sqrt(dist2_sq(inst.packing.points[cw[i]],
                                    inst.packing.points[cw[j]]));
      if (best < 0 || d < best) {
        best = d;
        bi = i;
        bj = j;
      }
    }
  if (best < 0) return;  // all inputs equal; nothing to separate
  Vec mid = add(inst.packing.points.point(cw[bi]),
                inst.packing.points.point(cw[bj]));
  for (auto& v : mid) v *= 0.5;
  double pair_sum = quad_eval(inst.objectives[bi], mid) +
                    quad_eval(inst.objectives[bj], mid);
  if (!(pair_sum > 2.0 * inst.params.eps))
    fail(Errc::instance_construction,
         "closest-pair midpoint value " + std::to_string(pair_sum) +
             " does not exceed 2 eps; packing under-separated");
}

}  // namespace

EqInstance make_eq_instance_with(PackingSet packing,
                                 std::vector<uint64_t> codewords, double beta,
                                 double eps) {
  EqInstance inst;
  inst.params.n_nodes = static_cast<int>(codewords.size());
  inst.params.d = packing.d;
  inst.params.eps = eps;
  inst.params.beta = beta;
  if (inst.params.n_nodes < 2 || !(eps > 0) || !(beta > 0))
    fail(Errc::params_out_of_range, "need N >= 2, eps > 0, beta > 0");
  inst.beta0 = beta / inst.params.n_nodes;
  inst.delta_eq = 2.0 * std::sqrt(inst.params.n_nodes * eps / beta) *
                  (1.0 + 1e-6);
  for (uint64_t b : codewords)
    if (b >= packing.size())
      fail(Errc::out_of_range, "codeword indexes past the packing");
  inst.packing = std::move(packing);
  inst.codewords = std::move(codewords);
  for (uint64_t b : inst.codewords)
    inst.objectives.push_back(QuadraticSum::make(
        inst.params.d, {{inst.beta0, inst.packing.points.point(b)}}));
  assert_eq_gap(inst);
  return inst;
}

EqInstance make_eq_instance(const EqParams& params, uint64_t seed) {
  if (params.n_nodes < 2 || params.d < 1 || !(params.eps > 0) ||
      !(params.beta > 0))
    fail(Errc::params_out_of_range, "need N >= 2, d >= 1, eps > 0, beta > 0");
  double delta_eq = 2.0 *
                    std::sqrt(params.n_nodes * params.eps / params.beta) *
                    (1.0 + 1e-6);
  PackingSet packing;
  try {
    packing = grid_packing(params.d, delta_eq);
  } catch (const Error& e) {
    fail(Errc::params_out_of_range,
         std::string("equality packing infeasible: ") + e.what());
  }
  if (packing.size() < 2)
    fail(Errc::params_out_of_range, "equality packing has a single point");
  Rng rng(seed);
  std::vector<uint64_t> cw;
  for (int i = 0; i < params.n_nodes; ++i) cw.push_back(rng.below(packing.size()));
  return make_eq_instance_with(std::move(packing), std::move(cw), params.beta,
                               params.eps);
}

int eq_adjudicate(double r, double eps) { return r <= 2.0 * eps ? 1 : 0; }

EqResult eq_end_to_end(const EqInstance& inst, EqSolver solver) {
  std::vector<QuadraticTerm> all;
  for (const auto& f : inst.objectives)
    all.insert(all.end(), f.terms.begin(), f.terms.end());
  QuadraticSum total = QuadraticSum::make(inst.params.d, std::move(all));

  EqResult res;
  res.ground_truth = inst.all_equal();
  if (solver == EqSolver::exact) {
    res.r = canonical_form(total).min_value;
  } else {
    // run the quantised protocol to value accuracy eps: with curvature
    // A = beta (weight convention), ||x - x*|| <= sqrt(eps/beta) suffices.
    QgdInstance qinst;
    qinst.d = inst.params.d;
    qinst.objectives = inst.objectives;
    double w = std::sqrt(static_cast<double>(inst.params.d));
    double eps_gd = std::sqrt(inst.params.eps / inst.params.beta);
    QgdParams p = params_for_instance(qinst, 2.0, w, std::min(eps_gd, w / 2));
    RunTrace trace = run_qgd(qinst, p);
    res.r = quad_eval(total, trace.final_state.x);
  }
  res.bit = eq_adjudicate(res.r, inst.params.eps);
  res.matches = (res.bit == (res.ground_truth ? 1 : 0));
  return res;
}

bool selections_intersect(const std::vector<BitString>& selections,
                          size_t n_sites) {
  for (size_t s = 0; s < n_sites; ++s) {
    bool common = true;
    for (const auto& b : selections)
      if (!b.get(s)) {
        common = false;
        break;
      }
    if (common) return true;
  }
  return false;
}

namespace {

PointSet disj_candidates(const PackingSet& packing, double beta, double eps) {
  const int d = packing.d;
  double h = eps / (4.0 * beta * std::sqrt(static_cast<double>(d)));
  std::vector<double> axis;
  for (int64_t i = 0; static_cast<double>(i) * h <= 1.0; ++i)
    axis.push_back(static_cast<double>(i) * h);
  if (axis.back() < 1.0) axis.push_back(1.0);
  PointSet grid(d);
  if (d == 1) {
    for (double v : axis) grid.push(std::vector<double>{v});
  } else {
    for (double a : axis)
      for (double b : axis) grid.push(std::vector<double>{a, b});
  }
  for (size_t i = 0; i < packing.size(); ++i) grid.push(packing.points[i]);
  return grid;
}

}  // namespace

DisjGridCache build_disj_cache(const PackingSet& packing, double beta,
                               double eps) {
  if (packing.d > 2) fail(Errc::oracle_scale, "grid-search oracle supports d <= 2");
  if (!(beta > 0) || !(eps > 0)) fail(Errc::domain, "beta and eps must be positive");
  if (packing.size() >= 2 && !(packing.delta >= 2.0 * eps / beta))
    fail(Errc::ill_posed_cone, "packing separation below 2 eps/beta");
  DisjGridCache cache;
  cache.n_sites = static_cast<int>(packing.size());
  cache.beta = beta;
  cache.eps = eps;
  PointSet grid = disj_candidates(packing, beta, eps);
  std::vector<double> dist;
  kernels::nearest_site_map(packing.points, grid, cache.site, dist);
  cache.beta_dist.resize(dist.size());
  for (size_t i = 0; i < dist.size(); ++i) cache.beta_dist[i] = beta * dist[i];
  return cache;
}

DisjResult disj_gap_check_cached(const DisjGridCache& cache,
                                 const std::vector<BitString>& selections) {
  const int n = static_cast<int>(selections.size());
  for (const auto& b : selections)
    if (b.size() != static_cast<size_t>(cache.n_sites))
      fail(Errc::shape_mismatch, "selection length != packing size");
  // per-site count of nodes selecting it
  std::vector<int> cnt(static_cast<size_t>(cache.n_sites), 0);
  for (const auto& b : selections)
    for (int s = 0; s < cache.n_sites; ++s)
      if (b.get(static_cast<size_t>(s))) ++cnt[static_cast<size_t>(s)];
  const double eps = cache.eps;
  double best = n * eps;
  for (size_t g = 0; g < cache.beta_dist.size(); ++g) {
    double bd = cache.beta_dist[g];
    if (bd >= eps) continue;
    int c = cnt[static_cast<size_t>(cache.site[g])];
    double val = c * bd + (n - c) * eps;
    best = std::min(best, val);
  }
  DisjResult res;
  res.infimum = best;
  res.intersecting = best <= eps / 2.0;
  return res;
}

DisjResult disj_gap_check(const std::vector<BitString>& selections,
                          const PackingSet& packing, double beta, double eps) {
  if (packing.d > 2) fail(Errc::oracle_scale, "grid-search oracle supports d <= 2");
  if (selections.empty()) fail(Errc::degenerate_input, "no selections");
  std::vector<ConeObjective> cones;
  for (const auto& b : selections) cones.emplace_back(packing, b, beta, eps);
  PointSet grid = disj_candidates(packing, beta, eps);
  double best = selections.size() * eps;
  Vec x(static_cast<size_t>(packing.d));
  for (size_t g = 0; g < grid.size(); ++g) {
    auto p = grid[g];
    std::copy(p.begin(), p.end(), x.begin());
    double v = 0;
    for (const auto& c : cones) v += c.eval(x);
    best = std::min(best, v);
  }
  DisjResult res;
  res.infimum = best;
  res.intersecting = best <= eps / 2.0;
  return res;
}

namespace {
double log2_clamped(double x) {
  if (!(x > 0)) fail(Errc::domain, "bound expression argument must be positive");
  return std::max(1.0, std::log2(x));
}
}  // namespace

BoundValues bound_values(int n_nodes, int d, double eps, double beta,
                         double kappa, double W) {
  if (n_nodes < 1 || d < 1 || !(eps > 0) || !(beta > 0) || !(kappa > 0) ||
      !(W > 0))
    fail(Errc::domain, "bound arguments must be positive");
  double nd = static_cast<double>(n_nodes) * d;
  BoundValues b;
  b.lower_rand_raw = nd * log2_clamped(beta * d / (n_nodes * eps));
  b.lower_det_raw = nd * log2_clamped(beta * d / eps);
  b.upper_raw = nd * kappa * log2_clamped(kappa) * log2_clamped(beta * W / eps);
  return b;
}

}  // namespace qgd
