// Acceptance suite: one checker per numbered criterion, each printing a
// single PASS/FAIL line. Run with a criterion number, a list of numbers, or
// no arguments for the whole suite. Exit status is the number of failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <vector>

#include "qgd/io.hpp"
#include "qgd/lowerbound.hpp"
#include "qgd/runtime.hpp"

using namespace qgd;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) {
      pass = false;
      detail = what;
    }
  }
};

double elapsed_s(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

// --------------------------------------------------------------------------
// 1. codec contract: validity, accuracy and exact cost over 10^4 seeded cases
// --------------------------------------------------------------------------
Outcome criterion1() {
  Outcome out;
  auto start = std::chrono::steady_clock::now();
  const int cases = 10000;
  std::vector<uint8_t> ok(cases, 0);
#pragma omp parallel for schedule(dynamic, 64)
  for (int it = 0; it < cases; ++it) {
    Rng rng(900000 + static_cast<uint64_t>(it));
    int d = 1 + static_cast<int>(rng.below(64));
    double lambda = std::exp(rng.uniform(std::log(0x1.0p-10), std::log(0.9)));
    double radius = std::exp(rng.uniform(std::log(1e-3), std::log(1e3)));
    double eps = lambda * radius;
    QuantiserConfig cfg = QuantiserConfig::create(d, eps, radius);
    Vec q(static_cast<size_t>(d)), x(static_cast<size_t>(d));
    for (auto& v : q) v = rng.uniform(-100, 100);
    Vec dir = rng.unit_vector(d);
    double dist = radius * rng.unit();
    for (int k = 0; k < d; ++k)
      x[static_cast<size_t>(k)] =
          q[static_cast<size_t>(k)] + dist * dir[static_cast<size_t>(k)];

    EncodedVector enc = encode(cfg, x);
    Vec dec = decode(cfg, q, enc);
    Vec quant = quantise(cfg, x, q);
    bool validity = dec == quant;
    bool accuracy = dist2(quant, x) <= eps;
    int64_t want_bits =
        static_cast<int64_t>(d) *
        static_cast<int64_t>(std::ceil(std::log2(
            std::ceil(radius * std::sqrt(static_cast<double>(d)) / eps) + 2)));
    bool cost = static_cast<int64_t>(enc.bits.size()) == want_bits;
    ok[it] = validity && accuracy && cost;
  }
  for (int it = 0; it < cases; ++it)
    out.require(ok[it] != 0, "case " + std::to_string(it) + " failed");
  double secs = elapsed_s(start);
  out.require(secs < 10.0, "runtime " + std::to_string(secs) + "s >= 10s");
  return out;
}

// --------------------------------------------------------------------------
// Shared sweep for criteria 2-5: N x d x kappa x eps_target, W = sqrt(d)
// --------------------------------------------------------------------------
struct SweepRun {
  int n, d;
  double kappa, eps_target;
  RunTrace trace;
};

const std::vector<SweepRun>& sweep_runs() {
  static std::vector<SweepRun> runs = [] {
    std::vector<SweepRun> rs;
    uint64_t seed = 0;
    for (int n : {2, 4, 8})
      for (int d : {1, 4, 32})
        for (double kappa : {2.0, 10.0})
          for (double eps_target : {1e-3, 1e-6}) {
            QgdInstance inst = gen_instance(n, d, 7000 + seed);
            double w = std::sqrt(static_cast<double>(d));
            QgdParams p = params_for_instance(inst, kappa, w, eps_target);
            RunOptions opt;
            opt.enforce_invariants = false;  // criteria check margins below
            SweepRun run{n, d, kappa, eps_target, run_qgd(inst, p, opt)};
            rs.push_back(std::move(run));
            ++seed;
          }
    return rs;
  }();
  return runs;
}

// 2. convergence within T rounds on the whole grid
Outcome criterion2() {
  Outcome out;
  auto start = std::chrono::steady_clock::now();
  for (const auto& run : sweep_runs()) {
    std::ostringstream tag;
    tag << "N=" << run.n << " d=" << run.d << " kappa=" << run.kappa
        << " eps=" << run.eps_target;
    out.require(run.trace.final_err <= run.eps_target,
                tag.str() + ": final err " + io::g17(run.trace.final_err));
  }
  double secs = elapsed_s(start);
  out.require(secs < 60.0, "runtime " + std::to_string(secs) + "s >= 60s");
  return out;
}

// 3. Q1/Q2/Q3 margins nonnegative within 1e-10 R(t) in every round
Outcome criterion3() {
  Outcome out;
  for (const auto& run : sweep_runs())
    for (const auto& rec : run.trace.records) {
      double slack = 1e-10 * rec.R_t;
      std::ostringstream tag;
      tag << "N=" << run.n << " d=" << run.d << " kappa=" << run.kappa
          << " eps=" << run.eps_target << " t=" << rec.t;
      out.require(rec.q1_margin >= -slack, tag.str() + ": Q1 margin " +
                                               io::g17(rec.q1_margin));
      out.require(rec.q2_margin >= -slack, tag.str() + ": Q2 margin " +
                                               io::g17(rec.q2_margin));
      out.require(rec.q3_margin >= -slack, tag.str() + ": Q3 margin " +
                                               io::g17(rec.q3_margin));
    }
  return out;
}

// 4. bit-cost envelope with a single constant c <= 8, constant per-round
//    bits, and bootstrap within 4 rounds' worth
Outcome criterion4() {
  Outcome out;
  double worst_c = 0;
  for (const auto& run : sweep_runs()) {
    const auto& p = run.trace.params;
    double w = std::sqrt(static_cast<double>(run.d));
    double envelope = run.n * run.d *
                      (run.kappa * std::log2(run.kappa) + std::log2(run.d) + 4) *
                      std::log2(p.beta * w / run.eps_target);
    double c = static_cast<double>(run.trace.bits_total) / envelope;
    worst_c = std::max(worst_c, c);

    std::ostringstream tag;
    tag << "N=" << run.n << " d=" << run.d << " kappa=" << run.kappa
        << " eps=" << run.eps_target;
    out.require(c <= 8.0, tag.str() + ": c = " + io::g17(c));

    int64_t per_round = -1;
    for (const auto& rec : run.trace.records) {
      if (rec.t == 0) continue;
      if (per_round < 0) per_round = rec.bits_round;
      out.require(rec.bits_round == per_round,
                  tag.str() + ": bits vary across rounds");
    }
    out.require(run.trace.bits_bootstrap <= 4 * per_round,
                tag.str() + ": bootstrap " +
                    std::to_string(run.trace.bits_bootstrap) + " > 4 rounds");
  }
  if (out.pass) out.detail = "max c = " + io::g17(worst_c);
  return out;
}

// 5. realized per-round contraction ratio below mu + 1e-9 whenever the
//    previous error exceeds 1e-12 W
Outcome criterion5() {
  Outcome out;
  double worst_excess = 0;
  int64_t checked = 0, violating = 0;
  for (const auto& run : sweep_runs()) {
    const auto& p = run.trace.params;
    double prev_err = -1;
    for (const auto& rec : run.trace.records) {
      if (rec.t > 0 && prev_err > 1e-12 * p.W) {
        ++checked;
        double ratio = rec.err / prev_err;
        if (!(ratio <= p.mu + 1e-9)) {
          ++violating;
          worst_excess = std::max(worst_excess, ratio - p.mu);
          std::ostringstream tag;
          tag << "N=" << run.n << " d=" << run.d << " kappa=" << run.kappa
              << " eps=" << run.eps_target << " t=" << rec.t << ": ratio "
              << io::g17(ratio) << " > mu = " << io::g17(p.mu);
          out.require(false, tag.str());
        }
      }
      prev_err = rec.err;
    }
  }
  if (!out.pass) {
    std::ostringstream extra;
    extra << " [" << violating << "/" << checked
          << " round transitions exceed mu; worst excess " << io::g17(worst_excess)
          << "; the envelope form of this bound is criterion 3's Q1]";
    out.detail += extra.str();
  }
  return out;
}

// --------------------------------------------------------------------------
// 6. symmetrisation recovery, exact and perturbed
// --------------------------------------------------------------------------
Outcome criterion6() {
  Outcome out;
  auto start = std::chrono::steady_clock::now();
  int trials = 0;
  for (int n : {2, 4, 8}) {
    // keep the packing feasible: delta = 3N sqrt(eps/beta) < sqrt(2)
    double root = n == 2 ? 0.05 : (n == 4 ? 0.028 : 0.014);
    AvgParams params{n, 2, root * root, 1.0};
    for (uint64_t seed = 0; seed < 334; ++seed) {
      AvgInstance inst = make_avg_instance(params, 1000 * n + seed);
      std::vector<uint64_t> others(inst.codewords.begin() + 1,
                                   inst.codewords.end());
      Vec t = nearest_net_point(inst, inst.xstar);
      bool ok1 = symmetrisation_recover(inst, t, others) == inst.codewords[0];

      Rng rng(55 * n + seed);
      Vec dir = rng.unit_vector(2);
      Vec tp = inst.xstar;
      add_scaled_inplace(tp, 0.9 * inst.answer_radius() * rng.unit(), dir);
      bool ok2 = symmetrisation_recover(inst, tp, others) == inst.codewords[0];

      std::ostringstream tag;
      tag << "N=" << n << " seed=" << seed;
      out.require(ok1, tag.str() + ": nearest-net recovery failed");
      out.require(ok2, tag.str() + ": perturbed recovery failed");
      trials += 2;
    }
  }
  out.require(trials >= 2000, "fewer than 2x10^3 trials executed");
  double secs = elapsed_s(start);
  out.require(secs < 20.0, "runtime " + std::to_string(secs) + "s >= 20s");
  if (out.pass) out.detail = std::to_string(trials) + " recoveries";
  return out;
}

// --------------------------------------------------------------------------
// 7. equality reduction, exhaustive with the corrected separation
// --------------------------------------------------------------------------
Outcome criterion7() {
  Outcome out;
  int64_t cases = 0;
  for (size_t m : {2, 3, 5, 8}) {
    PackingSet s = grid_packing(1, 1.0 / (static_cast<double>(m) - 0.5));
    out.require(s.size() == m, "packing size != requested site count");
    double delta = s.delta;
    for (int n = 2; n <= 3; ++n) {
      double beta = static_cast<double>(n);  // beta0 = 1
      double eps = 0.98 * std::pow(delta / (2 * (1 + 1e-6)), 2);
      std::vector<uint64_t> cw(static_cast<size_t>(n), 0);
      size_t total = 1;
      for (int i = 0; i < n; ++i) total *= s.size();
      for (size_t code = 0; code < total; ++code) {
        size_t c = code;
        for (int i = 0; i < n; ++i) {
          cw[static_cast<size_t>(i)] = c % s.size();
          c /= s.size();
        }
        EqInstance inst = make_eq_instance_with(s, cw, beta, eps);
        out.require(inst.beta0 * inst.delta_eq * inst.delta_eq / 2 > 2 * eps,
                    "construction gap violated");
        EqResult r = eq_end_to_end(inst, EqSolver::exact);
        std::ostringstream tag;
        tag << "|S|=" << s.size() << " N=" << n << " code=" << code;
        out.require(r.matches, tag.str() + ": adjudication mismatch");
        ++cases;
      }
    }
  }
  if (out.pass) out.detail = std::to_string(cases) + " tuples";
  return out;
}

// --------------------------------------------------------------------------
// 8. disjointness construction, exhaustive over selection tuples
// --------------------------------------------------------------------------
Outcome criterion8() {
  Outcome out;
  auto start = std::chrono::steady_clock::now();
  int64_t cases = 0;
  for (int d = 1; d <= 2; ++d) {
    for (size_t m = 2; m <= 6; ++m) {
      // take the first m points of a grid packing as the site set
      double delta = d == 1 ? 0.19 : 0.45;
      PackingSet grid = grid_packing(d, delta);
      if (grid.size() < m) continue;
      PointSet pts(d);
      for (size_t i = 0; i < m; ++i) pts.push(grid.points[i]);
      PackingSet s = packing_from_points(std::move(pts), delta);
      double beta = 1.0, eps = beta * delta / 2;
      DisjGridCache cache = build_disj_cache(s, beta, eps);
      for (int n = 2; n <= 3; ++n) {
        size_t tuples = size_t{1} << (m * static_cast<size_t>(n));
        std::vector<uint8_t> ok(tuples, 0);
#pragma omp parallel for schedule(dynamic, 256)
        for (int64_t code = 0; code < static_cast<int64_t>(tuples); ++code) {
          std::vector<BitString> sel;
          uint64_t c = static_cast<uint64_t>(code);
          for (int i = 0; i < n; ++i) {
            sel.push_back(
                BitString::from_uint(c & ((uint64_t{1} << m) - 1),
                                     static_cast<int>(m)));
            c >>= m;
          }
          DisjResult r = disj_gap_check_cached(cache, sel);
          bool truth = selections_intersect(sel, m);
          bool good = r.intersecting == truth;
          if (truth) good = good && r.infimum <= 1e-9;
          else good = good && r.infimum >= eps - 1e-9;
          ok[static_cast<size_t>(code)] = good;
        }
        for (size_t i = 0; i < tuples; ++i)
          out.require(ok[i] != 0, "d=" + std::to_string(d) +
                                      " |S|=" + std::to_string(m) +
                                      " N=" + std::to_string(n) +
                                      " code=" + std::to_string(i));
        cases += static_cast<int64_t>(tuples);
      }
    }
  }
  double secs = elapsed_s(start);
  out.require(secs < 60.0, "runtime " + std::to_string(secs) + "s >= 60s");
  if (out.pass) out.detail = std::to_string(cases) + " tuples";
  return out;
}

// --------------------------------------------------------------------------
// 9. packing bound: greedy oracle vs the volume bound; emitted packings
//    certify their separation
// --------------------------------------------------------------------------
Outcome criterion9() {
  Outcome out;
  for (int d = 1; d <= 3; ++d)
    for (double delta : {0.05, 0.1, 0.3}) {
      double spacing = d == 3 ? delta / 8 : delta / 4;
      PackingSet g = greedy_packing_oracle(d, delta, spacing);
      double bound = packing_volume_bound(d, delta);
      std::ostringstream tag;
      tag << "d=" << d << " delta=" << delta;
      out.require(static_cast<double>(g.size()) >= bound,
                  tag.str() + ": greedy size " + std::to_string(g.size()) +
                      " below bound " + io::g17(bound));
      out.require(min_pairwise_distance(g.points) > delta,
                  tag.str() + ": separation not certified");

      PackingSet grid = grid_packing(d, delta);
      out.require(min_pairwise_distance(grid.points) > delta,
                  tag.str() + ": grid separation not certified");
    }
  return out;
}

// --------------------------------------------------------------------------
// 10. determinism: identical seeds give identical transcripts and CSV
// --------------------------------------------------------------------------
Outcome criterion10() {
  Outcome out;

  // protocol transcripts and per-round CSV
  QgdInstance inst = gen_instance(4, 8, 2024);
  QgdParams p = params_for_instance(inst, 10.0, std::sqrt(8.0), 1e-5);
  QgdProtocol pr1(inst, p), pr2(inst, p);
  std::vector<BitString> inputs(4);
  RunResult r1 = run_protocol(pr1, inputs, 99);
  RunResult r2 = run_protocol(pr2, inputs, 99);
  for (size_t i = 0; i < r1.transcripts.size(); ++i)
    out.require(io::transcript_dump(r1.transcripts[i]) ==
                    io::transcript_dump(r2.transcripts[i]),
                "transcript " + std::to_string(i) + " differs");
  RunTrace t1 = run_qgd(inst, p), t2 = run_qgd(inst, p);
  out.require(io::round_csv(t1.records) == io::round_csv(t2.records),
              "round CSV differs between reruns");

  // codec corpus determinism
  Rng rng(31337);
  for (int it = 0; it < 200; ++it) {
    int d = 1 + static_cast<int>(rng.below(64));
    QuantiserConfig cfg = QuantiserConfig::create(d, 0.01, 1.0);
    Vec x(static_cast<size_t>(d));
    for (auto& v : x) v = rng.uniform(-0.9, 0.9);
    out.require(encode(cfg, x).bits == encode(cfg, x).bits,
                "encode not deterministic");
  }

  // instance generation determinism
  AvgParams ap{2, 2, 0.0025, 1.0};
  out.require(make_avg_instance(ap, 77).codewords ==
                  make_avg_instance(ap, 77).codewords,
              "avg instance draws differ");
  return out;
}

const std::map<int, std::pair<const char*, std::function<Outcome()>>> kCriteria = {
    {1, {"codec validity/accuracy/cost over 10^4 seeded cases", criterion1}},
    {2, {"convergence within T rounds across the sweep", criterion2}},
    {3, {"Q1/Q2/Q3 margins nonnegative in every round", criterion3}},
    {4, {"total bits within the envelope (c <= 8), constant per round",
         criterion4}},
    {5, {"per-round error ratio at most mu + 1e-9", criterion5}},
    {6, {"symmetrisation recovery, exact and perturbed", criterion6}},
    {7, {"equality reduction exhaustive with corrected separation", criterion7}},
    {8, {"disjointness gap and classification, exhaustive", criterion8}},
    {9, {"greedy packing meets the volume bound, separations certified",
         criterion9}},
    {10, {"bit-identical transcripts and CSV on reruns", criterion10}},
};

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> which;
  for (int i = 1; i < argc; ++i) which.push_back(std::atoi(argv[i]));
  if (which.empty())
    for (const auto& [num, _] : kCriteria) which.push_back(num);

  int failures = 0;
  for (int num : which) {
    auto it = kCriteria.find(num);
    if (it == kCriteria.end()) {
      std::cerr << "unknown criterion " << num << "\n";
      return 64;
    }
    Outcome out = it->second.second();
    std::printf("%s criterion %2d: %s%s%s\n", out.pass ? "PASS" : "FAIL", num,
                it->second.first, out.detail.empty() ? "" : " -- ",
                out.detail.c_str());
    std::fflush(stdout);
    if (!out.pass) ++failures;
  }
  return failures;
}
