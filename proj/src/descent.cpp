#include "qgd/descent.hpp"

#include <cmath>

namespace qgd {

namespace {

void check_identity(const QgdParams& p) {
  double lhs = 2.0 * p.delta / p.xi + p.xi;
  if (std::abs(lhs - p.mu) > 1e-12)
    fail(Errc::invariant_failure, "parameter identity 2d/xi + xi = mu violated");
  if (p.gamma * p.beta > 2.0 + 1e-12)
    fail(Errc::invariant_failure, "gamma*beta <= 2 violated");
}

}  // namespace

QgdParams derive_params(double alpha, double beta, double W, double eps_target) {
  if (!std::isfinite(alpha) || !std::isfinite(beta) || !(alpha > 0) ||
      beta < alpha)
    fail(Errc::invalid_spectrum, "need 0 < alpha <= beta");
  if (!(W > 0)) fail(Errc::domain, "W must be positive");
  if (!(eps_target > 0) || !(eps_target < W))
    fail(Errc::domain, "need 0 < eps_target < W");
  QgdParams p;
  p.beta = beta;
  p.kappa = beta / alpha;
  if (p.kappa < 2.0) {
    p.kappa = 2.0;
    p.alpha = beta / 2.0;
    p.clamped = true;
  } else {
    p.alpha = alpha;
  }
  p.gamma = 2.0 / (p.alpha + p.beta);
  p.xi = (p.kappa - 1.0) / (p.kappa + 1.0);
  p.mu = 1.0 - 1.0 / (p.kappa + 1.0);
  p.delta = p.xi * (1.0 - p.xi) / 4.0;
  p.W = W;
  p.eps_target = eps_target;
  p.rounds =
      static_cast<int64_t>(std::ceil((p.kappa + 1.0) * std::log(W / eps_target)));
  check_identity(p);
  return p;
}

double radius_schedule(const QgdParams& p, int64_t t) {
  if (t < 0) fail(Errc::domain, "round index must be >= 0");
  return (2.0 * p.beta / p.xi) * std::pow(p.mu, static_cast<double>(t)) * p.W;
}

QuadraticSum QgdInstance::total() const {
  std::vector<QuadraticTerm> all;
  for (const auto& f : objectives)
    all.insert(all.end(), f.terms.begin(), f.terms.end());
  return QuadraticSum::make(d, std::move(all));
}

Vec QgdInstance::grad_sum(const Vec& x) const {
  Vec g(x.size(), 0.0);
  for (const auto& f : objectives) {
    Vec gi = quad_grad(f, x);
    for (size_t k = 0; k < g.size(); ++k) g[k] += gi[k];
  }
  return g;
}

double QgdInstance::max_node_weight() const {
  double m = 0;
  for (const auto& f : objectives) m = std::max(m, f.total_weight());
  return m;
}

QgdInstance gen_instance(int N, int d, uint64_t seed, int max_terms) {
  if (N < 1 || d < 1 || max_terms < 1)
    fail(Errc::domain, "instance shape out of range");
  Rng rng(seed);
  QgdInstance inst;
  inst.d = d;
  for (int i = 0; i < N; ++i) {
    int k = max_terms == 1 ? 1 : 1 + static_cast<int>(rng.below(max_terms));
    std::vector<QuadraticTerm> terms;
    for (int j = 0; j < k; ++j) {
      QuadraticTerm t;
      t.weight = rng.uniform(0.5, 1.5);
      t.center.resize(static_cast<size_t>(d));
      for (auto& c : t.center) c = rng.unit();
      terms.push_back(std::move(t));
    }
    inst.objectives.push_back(QuadraticSum::make(d, std::move(terms)));
  }
  return inst;
}

QgdParams params_for_instance(const QgdInstance& inst, double kappa_target,
                              double W, double eps_target) {
  if (kappa_target < 1) fail(Errc::domain, "kappa_target must be >= 1");
  double a = 0;
  for (const auto& f : inst.objectives) a += f.total_weight();
  double beta = 2.0 * a;
  if (!(beta > 0)) fail(Errc::invalid_spectrum, "instance has zero curvature");
  return derive_params(beta / kappa_target, beta, W, eps_target);
}

StageConfigs round_configs(const QgdParams& p, int d, int n_nodes, int64_t t) {
  double r = radius_schedule(p, t);
  return {QuantiserConfig::create_scaled(d, r / n_nodes, p.delta / 2.0),
          QuantiserConfig::create_scaled(d, 2.0 * r, p.delta / 4.0)};
}

StageConfigs bootstrap_configs(const QgdParams& p, int d, int n_nodes, double G0) {
  if (!(G0 > 0)) fail(Errc::domain, "bootstrap needs a positive gradient bound");
  double r0 = radius_schedule(p, 0);
  double eps1 = p.delta * r0 / (2.0 * n_nodes);
  double eps2 = p.delta * r0 / 2.0;
  return {QuantiserConfig::create(d, eps1, G0),
          QuantiserConfig::create(d, eps2, n_nodes * G0 + eps2)};
}

int64_t bits_per_round(const QgdParams& p, int d, int n_nodes) {
  StageConfigs cfg = round_configs(p, d, n_nodes, 1);
  return n_nodes * (cfg.gather.total_bits + cfg.broadcast.total_bits);
}

int64_t bits_bootstrap(const QgdParams& p, int d, int n_nodes, double G0) {
  if (G0 == 0) return 0;
  StageConfigs cfg = bootstrap_configs(p, d, n_nodes, G0);
  return n_nodes * (cfg.gather.total_bits + cfg.broadcast.total_bits);
}

RoundState bootstrap_round(const QgdInstance& inst, const QgdParams& p,
                           const Vec& x0, double G0) {
  const int n = inst.nodes();
  if (static_cast<int>(x0.size()) != inst.d)
    fail(Errc::shape_mismatch, "x0 dimension mismatch");
  RoundState st;
  st.t = 0;
  st.x = x0;
  st.R_t = radius_schedule(p, 0);
  st.q_local.resize(static_cast<size_t>(n));

  std::vector<Vec> grads(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    grads[i] = quad_grad(inst.objectives[i], x0);
    if (norm2(grads[i]) > G0)
      fail(Errc::contract_violation,
           "gradient norm exceeds the declared bound G0 at node " +
               std::to_string(i));
  }

  const Vec origin(static_cast<size_t>(inst.d), 0.0);
  if (G0 == 0) {
    // all gradients are exactly zero; nothing needs to be communicated
    for (int i = 0; i < n; ++i) st.q_local[i] = origin;
    st.q_global = origin;
    return st;
  }

  StageConfigs cfg = bootstrap_configs(p, inst.d, n, G0);
  Vec r(static_cast<size_t>(inst.d), 0.0);
  for (int i = 0; i < n; ++i) {
    st.q_local[i] = decode(cfg.gather, origin, encode(cfg.gather, grads[i]));
    for (size_t k = 0; k < r.size(); ++k) r[k] += st.q_local[i][k];
  }
  st.q_global = decode(cfg.broadcast, origin, encode(cfg.broadcast, r));
  return st;
}

RoundState qgd_round(const RoundState& state, const QgdInstance& inst,
                     const QgdParams& p) {
  const int n = inst.nodes();
  RoundState next;
  next.t = state.t + 1;
  next.R_t = radius_schedule(p, next.t);
  next.x = state.x;
  add_scaled_inplace(next.x, -p.gamma, state.q_global);
  next.q_local.resize(static_cast<size_t>(n));

  StageConfigs cfg = round_configs(p, inst.d, n, next.t);
  Vec r(static_cast<size_t>(inst.d), 0.0);
  for (int i = 0; i < n; ++i) {
    Vec g = quad_grad(inst.objectives[i], next.x);
    try {
      next.q_local[i] = quantise(cfg.gather, g, state.q_local[i]);
    } catch (const Error& e) {
      if (e.code() != Errc::out_of_radius) throw;
      fail(Errc::invariant_failure,
           "node " + std::to_string(i) +
               " gradient left the decode window; Q2 (or Q1) must have failed "
               "upstream of round " +
               std::to_string(next.t));
    }
    for (size_t k = 0; k < r.size(); ++k) r[k] += next.q_local[i][k];
  }
  try {
    next.q_global = quantise(cfg.broadcast, r, state.q_global);
  } catch (const Error& e) {
    if (e.code() != Errc::out_of_radius) throw;
    fail(Errc::invariant_failure,
         "gradient sum left the decode window; Q3 (or Q1) must have failed "
         "upstream of round " +
             std::to_string(next.t));
  }
  return next;
}

bool InvariantReport::all_pass() const {
  if (!q1.pass || !q3.pass) return false;
  for (const auto& c : q2)
    if (!c.pass) return false;
  return true;
}

std::string InvariantReport::first_failure() const {
  if (!q1.pass) return "Q1";
  for (size_t i = 0; i < q2.size(); ++i)
    if (!q2[i].pass) return "Q2[" + std::to_string(i) + "]";
  if (!q3.pass) return "Q3";
  return "";
}

InvariantReport check_invariants(const RoundState& state, const QgdInstance& inst,
                                 const QgdParams& p, const Vec& xstar) {
  const int n = inst.nodes();
  InvariantReport rep;
  rep.slack = 1e-10 * state.R_t;
  auto mk = [&](double lhs, double rhs) {
    InvariantCheck c;
    c.lhs = lhs;
    c.rhs = rhs;
    c.margin = rhs - lhs;
    c.pass = c.margin >= -rep.slack;
    return c;
  };
  rep.q1 = mk(dist2(state.x, xstar),
              std::pow(p.mu, static_cast<double>(state.t)) * p.W);
  Vec grad_f(state.x.size(), 0.0);
  double q2_rhs = p.delta * state.R_t / (2.0 * n);
  for (int i = 0; i < n; ++i) {
    Vec g = quad_grad(inst.objectives[i], state.x);
    rep.q2.push_back(mk(dist2(g, state.q_local[i]), q2_rhs));
    for (size_t k = 0; k < grad_f.size(); ++k) grad_f[k] += g[k];
  }
  rep.q3 = mk(dist2(grad_f, state.q_global), p.delta * state.R_t);
  return rep;
}

RunTrace run_qgd(const QgdInstance& inst, const QgdParams& p,
                 const RunOptions& opt) {
  const int n = inst.nodes();
  if (n < 1) fail(Errc::degenerate_input, "instance has no nodes");
  RunTrace trace;
  trace.params = p;
  trace.xstar = canonical_form(inst.total()).minimiser;

  Vec x0 = opt.x0.empty() ? Vec(static_cast<size_t>(inst.d), 0.0) : opt.x0;
  double g0 = inst.grad_norm_bound(p.W);
  RoundState st = bootstrap_round(inst, p, x0, g0);
  trace.bits_bootstrap = bits_bootstrap(p, inst.d, n, g0);
  int64_t bits_cum = 0;
  int64_t round_bits = bits_per_round(p, inst.d, n);

  auto record = [&](const RoundState& s, double prev_err, int64_t bits) {
    RoundRecord rec;
    rec.t = s.t;
    rec.err = dist2(s.x, trace.xstar);
    rec.R_t = s.R_t;
    InvariantReport rep = check_invariants(s, inst, p, trace.xstar);
    rec.q1_margin = rep.q1.margin;
    rec.q2_margin = rep.q2.empty() ? 0 : rep.q2[0].margin;
    for (const auto& c : rep.q2) rec.q2_margin = std::min(rec.q2_margin, c.margin);
    rec.q3_margin = rep.q3.margin;
    rec.ratio = (s.t > 0 && prev_err > 0) ? rec.err / prev_err : 0.0;
    rec.bits_round = bits;
    bits_cum += bits;
    rec.bits_cum = bits_cum;
    trace.records.push_back(rec);
    if (opt.enforce_invariants && !rep.all_pass())
      fail(Errc::invariant_failure,
           rep.first_failure() + " failed at round " + std::to_string(s.t));
    return rec.err;
  };

  double err = record(st, 0.0, trace.bits_bootstrap);
  for (int64_t t = 0; t < p.rounds; ++t) {
    if (opt.inject_q3_round == st.t) {
      // test hook: push the global estimate outside its certified band
      Vec dir = Rng(1234).unit_vector(inst.d);
      add_scaled_inplace(st.q_global, opt.inject_q3_scale * p.delta * st.R_t, dir);
      err = record(st, err, 0);
    }
    st = qgd_round(st, inst, p);
    err = record(st, err, round_bits);
  }
  trace.final_state = st;
  trace.bits_total = bits_cum;
  trace.final_err = err;
  trace.converged = err <= p.eps_target;
  return trace;
}

}  // namespace qgd
