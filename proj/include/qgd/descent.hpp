#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "qgd/codec.hpp"
#include "qgd/objectives.hpp"
#include "qgd/vec.hpp"

namespace qgd {

/// Parameter block of quantised gradient descent for a sum objective that is
/// alpha-strongly convex and beta-strongly smooth. Condition numbers below 2
/// are clamped up to 2 by treating alpha as beta/2; beta is never altered, so
/// smoothness-based bounds stay valid.
struct QgdParams {
  double alpha = 0;  // effective strong convexity (after clamping)
  double beta = 0;
  double kappa = 0;  // beta/alpha, >= 2
  bool clamped = false;
  double gamma = 0;  // step size 2/(alpha+beta)
  double xi = 0;     // (kappa-1)/(kappa+1): plain GD contraction factor
  double mu = 0;     // 1 - 1/(kappa+1): quantised contraction rate
  double delta = 0;  // xi(1-xi)/4: quantisation budget factor
  double W = 0;      // bound on ||x0 - xstar||
  double eps_target = 0;
  int64_t rounds = 0;  // T = ceil((kappa+1) ln(W/eps_target))
};

QgdParams derive_params(double alpha, double beta, double W, double eps_target);

/// Trust radius R(t) = (2*beta/xi) * mu^t * W.
double radius_schedule(const QgdParams& p, int64_t t);

/// The nodes' objectives; node i holds objectives[i].
struct QgdInstance {
  int d = 0;
  std::vector<QuadraticSum> objectives;

  int nodes() const { return static_cast<int>(objectives.size()); }
  QuadraticSum total() const;
  Vec grad_sum(const Vec& x) const;
  double max_node_weight() const;  // max_i (sum of node i's term weights)

  /// Bound on ||grad f_i(x0)||: 2 * max_i A_i * W, valid when x0 and all
  /// centers lie in the domain of diameter W.
  double grad_norm_bound(double W) const { return 2.0 * max_node_weight() * W; }
};

/// Seeded test instance: per node up to max_terms quadratic terms with
/// weights in [0.5, 1.5] and centers in [0,1]^d.
QgdInstance gen_instance(int N, int d, uint64_t seed, int max_terms = 1);

/// Parameters for an instance run at a prescribed condition number: the true
/// curvature of the sum is 2*sum(A_i) in both directions, so feeding
/// alpha = beta/kappa_target is a valid (conservative) strong-convexity bound.
QgdParams params_for_instance(const QgdInstance& inst, double kappa_target,
                              double W, double eps_target);

/// Full protocol state after round t (the lab's omniscient view).
struct RoundState {
  int64_t t = 0;
  Vec x;                     // iterate x(t), identical at all endpoints
  Vec q_global;              // q(t)
  std::vector<Vec> q_local;  // q_i(t), held by the coordinator
  double R_t = 0;
};

/// Quantiser configs of one exchange: nodes -> coordinator, then broadcast.
struct StageConfigs {
  QuantiserConfig gather;
  QuantiserConfig broadcast;
};

/// Round t >= 1 configs: (eps1, rho1) = (delta R(t)/2N, R(t)/N) and
/// (eps2, rho2) = (delta R(t)/2, 2 R(t)). Built scale-free so the bit widths
/// are identical in every round.
StageConfigs round_configs(const QgdParams& p, int d, int n_nodes, int64_t t);

/// Bootstrap configs: gradients are encoded against estimate 0 with radius
/// G0 >= ||grad f_i(x0)||; the re-quantised sum uses radius N*G0 + delta*R(0)/2
/// (the provable bound on ||r(0)||) and accuracy delta*R(0)/2.
StageConfigs bootstrap_configs(const QgdParams& p, int d, int n_nodes, double G0);

/// Metered payload bits of one regular round (2N codec messages).
int64_t bits_per_round(const QgdParams& p, int d, int n_nodes);
int64_t bits_bootstrap(const QgdParams& p, int d, int n_nodes, double G0);

/// t=0 exchange making Q2/Q3 hold before the first round. Throws
/// contract_violation if some ||grad f_i(x0)|| exceeds G0.
RoundState bootstrap_round(const QgdInstance& inst, const QgdParams& p,
                           const Vec& x0, double G0);

/// One round: x <- x - gamma q, gather quantised gradients, broadcast the
/// re-quantised sum. A decode-radius violation is surfaced as an
/// invariant_failure naming the inequality that must have broken upstream.
RoundState qgd_round(const RoundState& state, const QgdInstance& inst,
                     const QgdParams& p);

struct InvariantCheck {
  double lhs = 0, rhs = 0, margin = 0;
  bool pass = true;
};

/// Q1/Q2/Q3 margins at a state; pass flags allow slack 1e-10 * R(t).
struct InvariantReport {
  InvariantCheck q1, q3;
  std::vector<InvariantCheck> q2;
  double slack = 0;

  bool all_pass() const;
  std::string first_failure() const;  // "Q1", "Q2[i]", "Q3" or ""
};

InvariantReport check_invariants(const RoundState& state, const QgdInstance& inst,
                                 const QgdParams& p, const Vec& xstar);

struct RoundRecord {
  int64_t t = 0;
  double err = 0;  // ||x - xstar||
  double R_t = 0;
  double q1_margin = 0, q2_margin = 0, q3_margin = 0;
  double ratio = 0;  // err(t) / err(t-1), 0 for t = 0
  int64_t bits_round = 0, bits_cum = 0;
};

struct RunOptions {
  Vec x0;                      // empty: zeros
  bool enforce_invariants = true;
  int64_t inject_q3_round = -1;  // test hook: perturb q(t) after this round
  double inject_q3_scale = 0;    // perturbation in units of delta*R(t)
};

struct RunTrace {
  QgdParams params;
  Vec xstar;
  std::vector<RoundRecord> records;  // t = 0 .. T
  RoundState final_state;
  int64_t bits_bootstrap = 0;
  int64_t bits_total = 0;
  double final_err = 0;
  bool converged = false;
};

/// Run bootstrap + T rounds, checking invariants each round against the
/// canonical minimiser.
RunTrace run_qgd(const QgdInstance& inst, const QgdParams& p,
                 const RunOptions& opt = {});

}  // namespace qgd
