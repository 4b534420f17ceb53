#include "qgd/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "qgd/io.hpp"
#include "qgd/kernels.hpp"
#include "qgd/lowerbound.hpp"
#include "qgd/runtime.hpp"

namespace qgd {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string out_dir_default() {
  const char* env = std::getenv("QGD_OUT_DIR");
  return env && *env ? env : ".";
}

fs::path prepare_out(const std::string& dir) {
  fs::path p(dir);
  fs::create_directories(p);
  return p;
}

json bound_values_json(const BoundValues& b) {
  return {{"lower_rand_raw", b.lower_rand_raw},
          {"lower_det_raw", b.lower_det_raw},
          {"upper_raw", b.upper_raw}};
}

struct RunSetup {
  QgdInstance inst;
  QgdParams params;
  uint64_t seed = 0;
};

// Build per-round records from protocol snapshots plus the meter.
std::vector<RoundRecord> records_from_snapshots(
    const std::vector<RoundState>& snaps, const QgdInstance& inst,
    const QgdParams& params, const Vec& xstar, const BitMeter& meter) {
  std::vector<RoundRecord> records;
  int64_t cum = 0;
  double prev_err = 0;
  for (const auto& s : snaps) {
    RoundRecord r;
    r.t = s.t;
    r.err = dist2(s.x, xstar);
    r.R_t = s.R_t;
    InvariantReport rep = check_invariants(s, inst, params, xstar);
    r.q1_margin = rep.q1.margin;
    r.q2_margin = rep.q2.empty() ? 0 : rep.q2[0].margin;
    for (const auto& c : rep.q2) r.q2_margin = std::min(r.q2_margin, c.margin);
    r.q3_margin = rep.q3.margin;
    r.ratio = (s.t > 0 && prev_err > 0) ? r.err / prev_err : 0.0;
    auto it = meter.per_tag.find(s.t);
    r.bits_round = it == meter.per_tag.end() ? 0 : it->second;
    cum += r.bits_round;
    r.bits_cum = cum;
    prev_err = r.err;
    records.push_back(r);
  }
  return records;
}

std::string first_invariant_failure(const std::vector<RoundRecord>& records) {
  for (const auto& r : records) {
    double slack = 1e-10 * r.R_t;
    if (r.q1_margin < -slack) return "Q1 at round " + std::to_string(r.t);
    if (r.q2_margin < -slack) return "Q2 at round " + std::to_string(r.t);
    if (r.q3_margin < -slack) return "Q3 at round " + std::to_string(r.t);
  }
  return "";
}

int cmd_run(const RunSetup& setup, const std::string& out,
            const std::string& codec_name, int64_t inject_round,
            double inject_scale) {
  fs::path dir = prepare_out(out);
  make_codec(codec_name);  // validates the choice
  const QgdInstance& inst = setup.inst;
  const QgdParams& params = setup.params;
  Vec xstar = canonical_form(inst.total()).minimiser;

  std::vector<RoundRecord> records;
  int64_t bits_total_run = 0, bits_boot = 0;
  Vec final_x;

  if (inject_round >= 0) {
    // test hook runs the in-process engine so the perturbation can be applied
    RunOptions opt;
    opt.inject_q3_round = inject_round;
    opt.inject_q3_scale = inject_scale;
    RunTrace trace = run_qgd(inst, params, opt);  // throws invariant_failure
    records = trace.records;
    bits_total_run = trace.bits_total;
    bits_boot = trace.bits_bootstrap;
    final_x = trace.final_state.x;
  } else {
    QgdProtocol proto(inst, params);
    std::vector<RoundState> snaps;
    proto.on_round = [&](const RoundState& s) { snaps.push_back(s); };
    std::vector<BitString> inputs(static_cast<size_t>(inst.nodes()));
    for (auto& in : inputs) in.push_back(false);
    RunResult res = run_protocol(proto, inputs, setup.seed);
    records = records_from_snapshots(snaps, inst, params, xstar, res.meter);
    bits_total_run = res.meter.total;
    auto it = res.meter.per_tag.find(0);
    bits_boot = it == res.meter.per_tag.end() ? 0 : it->second;
    final_x = res.output;

    io::write_text_file((dir / "transcript.txt").string(),
                        io::transcript_dump(res.transcripts[0]));
    io::write_text_file((dir / "meter.json").string(), io::meter_json(res.meter));
  }

  io::write_text_file((dir / "rounds.csv").string(), io::round_csv(records));

  double final_err = dist2(final_x, xstar);
  bool converged = final_err <= params.eps_target;
  std::string failure = first_invariant_failure(records);

  BoundValues bounds =
      bound_values(inst.nodes(), inst.d, params.eps_target, params.beta,
                   params.kappa, params.W);
  json summary;
  summary["n_nodes"] = inst.nodes();
  summary["dim"] = inst.d;
  summary["alpha"] = params.alpha;
  summary["beta"] = params.beta;
  summary["kappa"] = params.kappa;
  summary["W"] = params.W;
  summary["eps_target"] = params.eps_target;
  summary["seed"] = setup.seed;
  summary["codec"] = codec_name;
  summary["rounds"] = params.rounds;
  summary["bits_total"] = bits_total_run;
  summary["bits_bootstrap"] = bits_boot;
  summary["bits_per_round"] = bits_per_round(params, inst.d, inst.nodes());
  summary["final_err"] = final_err;
  summary["converged"] = converged;
  summary["invariants_ok"] = failure.empty();
  summary["bound_values"] = bound_values_json(bounds);
  summary["bits_to_upper_ratio"] =
      static_cast<double>(bits_total_run) / bounds.upper_raw;
  summary["timestamp"] = static_cast<int64_t>(std::time(nullptr));
  io::write_text_file((dir / "summary.json").string(), summary.dump(2));

  std::cout << summary.dump(2) << '\n';
  if (!failure.empty()) {
    std::cerr << "invariant failure: " << failure << '\n';
    return 1;
  }
  if (!converged) {
    std::cerr << "final error " << final_err << " above eps_target\n";
    return 1;
  }
  return 0;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

template <typename T>
std::vector<T> parse_list(const std::string& s, const std::string& flag) {
  std::vector<T> out;
  for (const auto& tok : split_list(s)) {
    try {
      if constexpr (std::is_same_v<T, int>)
        out.push_back(std::stoi(tok));
      else
        out.push_back(std::stod(tok));
    } catch (const std::exception&) {
      fail(Errc::usage, "bad value '" + tok + "' in " + flag);
    }
  }
  return out;
}

int cmd_sweep(const std::string& nodes_list, const std::string& dims_list,
              const std::string& kappas_list, const std::string& eps_list,
              uint64_t seed, const std::string& out) {
  auto ns = parse_list<int>(nodes_list, "--n-nodes");
  auto ds = parse_list<int>(dims_list, "--dim");
  auto ks = parse_list<double>(kappas_list, "--kappa");
  auto es = parse_list<double>(eps_list, "--eps");
  if (ns.empty() || ds.empty() || ks.empty() || es.empty())
    fail(Errc::usage, "sweep grid must be nonempty");
  fs::path dir = prepare_out(out);
  std::ostringstream csv;
  csv << "run_id,n_nodes,dim,kappa,eps_target,seed,rounds,bits_total,"
         "bits_bootstrap,final_err,ratio,status\n";
  int run_id = 0;
  for (int n : ns)
    for (int d : ds)
      for (double kap : ks)
        for (double eps : es) {
          uint64_t run_seed = seed + static_cast<uint64_t>(run_id);
          csv << run_id << ',' << n << ',' << d << ',' << io::g17(kap) << ','
              << io::g17(eps) << ',' << run_seed << ',';
          try {
            QgdInstance inst = gen_instance(n, d, run_seed);
            double w = std::sqrt(static_cast<double>(d));
            QgdParams p = params_for_instance(inst, kap, w, eps);
            RunTrace trace = run_qgd(inst, p);
            BoundValues b = bound_values(n, d, eps, p.beta, p.kappa, w);
            csv << p.rounds << ',' << trace.bits_total << ','
                << trace.bits_bootstrap << ',' << io::g17(trace.final_err)
                << ','
                << io::g17(static_cast<double>(trace.bits_total) / b.upper_raw)
                << ',' << (trace.converged ? "ok" : "not-converged") << '\n';
          } catch (const Error& e) {
            csv << "0,0,0,nan,nan,error:" << errc_name(e.code()) << '\n';
          }
          ++run_id;
        }
  io::write_text_file((dir / "sweep.csv").string(), csv.str());
  std::cout << csv.str();
  return 0;
}

// ---------------------------------------------------------------------------
// verify: self-contained property suites over seeded corpora
// ---------------------------------------------------------------------------

struct CheckList {
  json checks = json::array();
  bool all = true;

  void add(const std::string& name, bool pass, const std::string& detail = "") {
    checks.push_back({{"name", name}, {"pass", pass}, {"detail", detail}});
    all = all && pass;
  }
};

void verify_codec(CheckList& out) {
  Rng rng(20240001);
  bool validity = true, accuracy = true, determinism = true, cost = true;
  for (int cases = 0; cases < 2000; ++cases) {
    int d = 1 + static_cast<int>(rng.below(64));
    double lambda = std::exp(rng.uniform(std::log(0x1.0p-10), std::log(0.9)));
    double radius = std::exp(rng.uniform(std::log(1e-3), std::log(1e3)));
    QuantiserConfig cfg = QuantiserConfig::create(d, lambda * radius, radius);
    Vec q(static_cast<size_t>(d)), x(static_cast<size_t>(d));
    for (auto& v : q) v = rng.uniform(-10, 10);
    Vec dir = rng.unit_vector(d);
    double dist = radius * rng.unit();
    for (int k = 0; k < d; ++k) x[static_cast<size_t>(k)] =
        q[static_cast<size_t>(k)] + dist * dir[static_cast<size_t>(k)];
    EncodedVector enc1 = encode(cfg, x);
    EncodedVector enc2 = encode(cfg, x);
    determinism = determinism && enc1.bits == enc2.bits;
    Vec dec = decode(cfg, q, enc1);
    Vec quant = quantise(cfg, x, q);
    validity = validity && dec == quant;
    accuracy = accuracy && dist2(quant, x) <= cfg.eps;
    double sqd = std::sqrt(static_cast<double>(d));
    int64_t m = static_cast<int64_t>(std::ceil(radius * sqd / cfg.eps)) + 2;
    int64_t expect = d * static_cast<int64_t>(std::ceil(std::log2(
                             static_cast<double>(m))));
    cost = cost && static_cast<int64_t>(enc1.bits.size()) == cfg.total_bits &&
           cfg.total_bits == expect;
  }
  out.add("codec validity (decode-encode equals quantise bit-exactly)", validity);
  out.add("codec accuracy (error within eps)", accuracy);
  out.add("codec determinism (identical bit strings)", determinism);
  out.add("codec cost (bit length matches the grid formula)", cost);
}

void verify_packing(CheckList& out) {
  bool certified = true;
  for (int d = 1; d <= 3; ++d)
    for (double delta : {0.11, 0.29}) {
      PackingSet s = grid_packing(d, delta);
      certified = certified && min_pairwise_distance(s.points) > delta;
    }
  out.add("grid packings certify min pairwise distance > delta", certified);

  bool volume = true;
  for (int d = 1; d <= 2; ++d)
    for (double delta : {0.1, 0.3}) {
      PackingSet g = greedy_packing_oracle(d, delta, delta / 4.0);
      volume = volume && static_cast<double>(g.size()) >=
                             packing_volume_bound(d, delta);
    }
  out.add("greedy oracle attains the volume bound (d <= 2 spot checks)", volume);

  bool cover = true;
  for (int d : {1, 2, 4}) {
    NetSet net = epsilon_net(d, 0.3);
    PointSet samples(d);
    Rng rng(7);
    for (int i = 0; i < 2000; ++i) {
      Vec x(static_cast<size_t>(d));
      for (auto& v : x) v = rng.unit();
      samples.push(x);
    }
    cover = cover &&
            kernels::max_cover_distance(net.points, samples) <= net.radius;
  }
  out.add("epsilon net covers seeded samples within its radius", cover);

  bool roundtrip = true;
  PackingSet s = grid_packing(2, 0.3);
  for (uint64_t i = 0; i < s.size(); ++i) {
    BitString cw = BitString::from_uint(i, s.codeword_bits());
    roundtrip = roundtrip && point_to_codeword(s, codeword_to_point(s, cw)) == cw;
  }
  out.add("codeword maps are mutually inverse", roundtrip);
}

void verify_qgd(CheckList& out) {
  bool converged = true, invariants = true, identity = true;
  for (uint64_t seed : {1u, 2u, 3u}) {
    for (double kap : {2.0, 10.0}) {
      QgdInstance inst = gen_instance(4, 4, seed);
      QgdParams p = params_for_instance(inst, kap, 2.0, 1e-5);
      identity = identity && std::abs(2 * p.delta / p.xi + p.xi - p.mu) < 1e-12;
      try {
        RunTrace trace = run_qgd(inst, p);
        converged = converged && trace.converged;
      } catch (const Error&) {
        invariants = false;
      }
    }
  }
  out.add("qgd converges within T rounds on seeded instances", converged);
  out.add("qgd Q1-Q3 margins stay nonnegative", invariants);
  out.add("parameter identity 2 delta/xi + xi = mu", identity);
}

void verify_lbi(CheckList& out) {
  bool recovery = true;
  for (uint64_t seed = 0; seed < 100; ++seed) {
    AvgParams ap{2, 2, 0.0025, 1.0};
    AvgInstance inst = make_avg_instance(ap, seed);
    Vec t = nearest_net_point(inst, inst.xstar);
    std::vector<uint64_t> others(inst.codewords.begin() + 1,
                                 inst.codewords.end());
    recovery = recovery &&
               symmetrisation_recover(inst, t, others) == inst.codewords[0];
  }
  out.add("symmetrisation recovers b1 from the nearest net point", recovery);

  bool eq = true;
  PackingSet s = grid_packing(1, 0.26);
  double beta = 2.0, eps = beta / 2 * std::pow(0.26 / (2 * (1 + 1e-6)), 2);
  for (uint64_t a = 0; a < s.size(); ++a)
    for (uint64_t b = 0; b < s.size(); ++b) {
      EqInstance inst = make_eq_instance_with(s, {a, b}, beta, eps);
      eq = eq && eq_end_to_end(inst, EqSolver::exact).matches;
    }
  out.add("equality reduction matches ground truth exhaustively", eq);

  bool disj = true;
  PackingSet sp = grid_packing(1, 0.3);
  double dbeta = 1.0, deps = 0.15;
  DisjGridCache cache = build_disj_cache(sp, dbeta, deps);
  int n_sel = 1 << sp.size();
  for (int b1 = 0; b1 < n_sel; ++b1)
    for (int b2 = 0; b2 < n_sel; ++b2) {
      std::vector<BitString> sel = {
          BitString::from_uint(static_cast<uint64_t>(b1),
                               static_cast<int>(sp.size())),
          BitString::from_uint(static_cast<uint64_t>(b2),
                               static_cast<int>(sp.size()))};
      DisjResult r = disj_gap_check_cached(cache, sel);
      disj = disj && r.intersecting == selections_intersect(sel, sp.size());
    }
  out.add("disjointness classification matches set intersection", disj);
}

int cmd_verify(const std::string& suite, const std::string& out) {
  CheckList checks;
  if (suite == "codec") verify_codec(checks);
  else if (suite == "packing") verify_packing(checks);
  else if (suite == "qgd") verify_qgd(checks);
  else if (suite == "lbi") verify_lbi(checks);
  else if (suite == "all") {
    verify_codec(checks);
    verify_packing(checks);
    verify_qgd(checks);
    verify_lbi(checks);
  } else {
    fail(Errc::usage, "unknown suite '" + suite +
                          "' (expected codec|packing|qgd|lbi|all)");
  }
  json j;
  j["suite"] = suite;
  j["checks"] = checks.checks;
  j["pass"] = checks.all;
  std::cout << j.dump(2) << '\n';
  if (!out.empty())
    io::write_text_file((prepare_out(out) / ("verify_" + suite + ".json")).string(),
                        j.dump(2));
  return checks.all ? 0 : 1;
}

// ---------------------------------------------------------------------------
// lb-demo
// ---------------------------------------------------------------------------

int cmd_lb_demo(const std::string& kind, uint64_t seed, const std::string& out) {
  json j;
  j["kind"] = kind;
  j["seed"] = seed;
  std::ostringstream text;
  if (kind == "recover") {
    AvgParams ap{2, 2, 0.0025, 1.0};
    AvgInstance inst = make_avg_instance(ap, seed);
    Vec t = nearest_net_point(inst, inst.xstar);
    std::vector<uint64_t> others(inst.codewords.begin() + 1,
                                 inst.codewords.end());
    uint64_t rec = symmetrisation_recover(inst, t, others);
    text << "packing: " << inst.packing.size()
         << " points, separation > " << io::g17(inst.packing.delta) << "\n";
    text << "codewords:";
    for (uint64_t b : inst.codewords) text << ' ' << b;
    text << "\nx* (average):";
    for (double v : inst.xstar) text << ' ' << io::g17(v);
    text << "\noutput t = nearest net point, |t - x*| = "
         << io::g17(dist2(t, inst.xstar)) << "\n";
    Vec y = inst.packing.points.point(others[0]);
    text << "v = N t - (N-1) y recovers codeword " << rec
         << (rec == inst.codewords[0] ? " == b1 (verified)\n"
                                      : " != b1 (FAILED)\n");
    j["codewords"] = inst.codewords;
    j["recovered"] = rec;
    j["verified"] = rec == inst.codewords[0];
  } else if (kind == "eq") {
    PackingSet s = grid_packing(1, 0.26);
    double beta = 2.0, eps = beta / 2 * std::pow(0.26 / (2 * (1 + 1e-6)), 2);
    EqInstance equal = make_eq_instance_with(s, {1, 1}, beta, eps);
    EqInstance diff = make_eq_instance_with(s, {0, 2}, beta, eps);
    EqResult r_eq = eq_end_to_end(equal, EqSolver::exact);
    EqResult r_df = eq_end_to_end(diff, EqSolver::exact);
    text << "equal inputs: r = " << io::g17(r_eq.r) << " -> bit "
         << r_eq.bit << "\n";
    text << "distinct inputs: r = " << io::g17(r_df.r) << " -> bit "
         << r_df.bit << "\n";
    j["equal_bit"] = r_eq.bit;
    j["distinct_bit"] = r_df.bit;
    j["verified"] = r_eq.matches && r_df.matches;
  } else if (kind == "disj") {
    PackingSet s = grid_packing(1, 0.3);
    double beta = 1.0, eps = 0.15;
    std::vector<BitString> no_inst = {
        BitString::from_uint(0b0011, static_cast<int>(s.size())),
        BitString::from_uint(0b0001, static_cast<int>(s.size()))};
    std::vector<BitString> yes_inst = {
        BitString::from_uint(0b0001, static_cast<int>(s.size())),
        BitString::from_uint(0b0010, static_cast<int>(s.size()))};
    DisjResult rn = disj_gap_check(no_inst, s, beta, eps);
    DisjResult ry = disj_gap_check(yes_inst, s, beta, eps);
    text << "NO instance (common site): infimum = " << io::g17(rn.infimum)
         << "\n";
    text << "YES instance (disjoint): infimum = " << io::g17(ry.infimum)
         << " >= eps = " << io::g17(eps) << "\n";
    j["no_infimum"] = rn.infimum;
    j["yes_infimum"] = ry.infimum;
    j["verified"] = rn.intersecting && !ry.intersecting;
  } else {
    fail(Errc::usage, "unknown demo '" + kind + "' (expected recover|eq|disj)");
  }
  std::cout << text.str();
  std::cout << j.dump(2) << '\n';
  if (!out.empty())
    io::write_text_file(
        (prepare_out(out) / ("lb_demo_" + kind + ".json")).string(), j.dump(2));
  return j.value("verified", false) ? 0 : 1;
}

}  // namespace

int cli_main(const std::vector<std::string>& args) {
  CLI::App app{"quantised gradient descent in a bit-metered coordinator model"};
  app.require_subcommand(1);

  // run
  auto* run = app.add_subcommand("run", "run one protocol execution");
  int run_n = 2, run_d = 1;
  double run_kappa = 2, run_alpha = 0, run_beta = 0, run_eps = 1e-6, run_w = 0;
  uint64_t run_seed = 0;
  std::string run_out = out_dir_default(), run_codec = "grid";
  std::string run_manifest;
  std::vector<std::string> run_objectives;
  int64_t inject_round = -1;
  double inject_scale = 10.0;
  run->add_option("--n-nodes", run_n, "number of nodes");
  run->add_option("--dim", run_d, "dimension");
  run->add_option("--kappa", run_kappa, "condition number for the generator");
  run->add_option("--alpha", run_alpha, "strong convexity of the sum");
  run->add_option("--beta", run_beta, "strong smoothness of the sum");
  run->add_option("--eps", run_eps, "target distance to the minimiser");
  run->add_option("--w", run_w, "initial distance bound (default sqrt(dim))");
  run->add_option("--seed", run_seed, "instance seed");
  run->add_option("--out", run_out, "output directory");
  run->add_option("--codec", run_codec, "codec name (grid)");
  run->add_option("--manifest", run_manifest, "run manifest file");
  run->add_option("--objectives", run_objectives, "objective files, one per node");
  run->add_option("--inject-q3-round", inject_round,
                  "test hook: perturb q after this round");
  run->add_option("--inject-q3-scale", inject_scale,
                  "perturbation scale in units of delta R");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "grid of runs with a merged CSV");
  std::string sw_nodes = "2,4", sw_dims = "1,4", sw_kappas = "2",
              sw_eps = "1e-4";
  uint64_t sw_seed = 0;
  std::string sw_out = out_dir_default();
  sweep->add_option("--n-nodes", sw_nodes, "comma list of node counts");
  sweep->add_option("--dim", sw_dims, "comma list of dimensions");
  sweep->add_option("--kappa", sw_kappas, "comma list of condition numbers");
  sweep->add_option("--eps", sw_eps, "comma list of targets");
  sweep->add_option("--seed", sw_seed, "base seed");
  sweep->add_option("--out", sw_out, "output directory");

  // verify
  auto* verify = app.add_subcommand("verify", "run a property suite");
  std::string vf_suite;
  std::string vf_out;
  verify->add_option("suite", vf_suite, "codec|packing|qgd|lbi|all")->required();
  verify->add_option("--out", vf_out, "directory for the JSON report");

  // lb-demo
  auto* demo = app.add_subcommand("lb-demo", "lower-bound reduction demos");
  std::string demo_kind;
  uint64_t demo_seed = 1;
  std::string demo_out;
  demo->add_option("kind", demo_kind, "recover|eq|disj")->required();
  demo->add_option("--seed", demo_seed, "instance seed");
  demo->add_option("--out", demo_out, "directory for the JSON report");

  // pack / net
  auto* pack = app.add_subcommand("pack", "emit a packing file");
  int pk_d = 1;
  double pk_delta = 0.3;
  std::string pk_out = "packing.txt";
  pack->add_option("--dim", pk_d, "dimension");
  pack->add_option("--delta", pk_delta, "required separation");
  pack->add_option("--out", pk_out, "output file");

  auto* net = app.add_subcommand("net", "emit a net file");
  int nt_d = 1;
  double nt_radius = 0.25;
  std::string nt_out = "net.txt";
  net->add_option("--dim", nt_d, "dimension");
  net->add_option("--radius", nt_radius, "covering radius");
  net->add_option("--out", nt_out, "output file");

  std::vector<const char*> argv;
  argv.push_back("qgd");
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (run->parsed()) {
      RunSetup setup;
      setup.seed = run_seed;
      if (!run_manifest.empty()) {
        io::RunManifest m = io::read_manifest_file(run_manifest);
        setup.seed = m.seed;
        setup.inst.d = m.d;
        for (const auto& p : m.objective_paths)
          setup.inst.objectives.push_back(io::read_quadsum_file(p));
        if (setup.inst.nodes() != m.n_nodes)
          fail(Errc::usage, "manifest node count != objective file count");
        setup.params = derive_params(m.alpha, m.beta, m.W, m.eps_target);
      } else if (!run_objectives.empty()) {
        for (const auto& p : run_objectives)
          setup.inst.objectives.push_back(io::read_quadsum_file(p));
        setup.inst.d = setup.inst.objectives[0].d;
        double w = run_w > 0 ? run_w
                             : std::sqrt(static_cast<double>(setup.inst.d));
        if (run_alpha > 0 && run_beta > 0)
          setup.params = derive_params(run_alpha, run_beta, w, run_eps);
        else
          setup.params = params_for_instance(setup.inst, run_kappa, w, run_eps);
      } else {
        setup.inst = gen_instance(run_n, run_d, run_seed);
        double w = run_w > 0 ? run_w : std::sqrt(static_cast<double>(run_d));
        setup.params = params_for_instance(setup.inst, run_kappa, w, run_eps);
      }
      return cmd_run(setup, run_out, run_codec, inject_round, inject_scale);
    }
    if (sweep->parsed())
      return cmd_sweep(sw_nodes, sw_dims, sw_kappas, sw_eps, sw_seed, sw_out);
    if (verify->parsed()) return cmd_verify(vf_suite, vf_out);
    if (demo->parsed()) return cmd_lb_demo(demo_kind, demo_seed, demo_out);
    if (pack->parsed()) {
      io::write_packing_file(pk_out, grid_packing(pk_d, pk_delta));
      std::cout << "wrote " << pk_out << '\n';
      return 0;
    }
    if (net->parsed()) {
      io::write_net_file(nt_out, epsilon_net(nt_d, nt_radius));
      std::cout << "wrote " << nt_out << '\n';
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    switch (e.code()) {
      case Errc::usage:
      case Errc::domain:
      case Errc::format:  // unreadable or malformed input files
      case Errc::params_out_of_range:
        return 2;
      default:
        return 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace qgd
