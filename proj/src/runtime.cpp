#include "qgd/runtime.hpp"

#include <cmath>

namespace qgd {

RunResult run_protocol(Protocol& proto, const std::vector<BitString>& inputs,
                       uint64_t seed, int64_t step_budget) {
  const int n = proto.nodes();
  if (static_cast<int>(inputs.size()) != n)
    fail(Errc::shape_mismatch, "inputs length must equal the node count");

  RunResult res;
  res.transcripts.resize(static_cast<size_t>(n) + 1);
  res.meter.sent.assign(static_cast<size_t>(n) + 1, 0);
  res.meter.received.assign(static_cast<size_t>(n) + 1, 0);

  Rng coord_rng = Rng::fork(seed, 0);
  std::vector<Rng> node_rngs;
  for (int i = 1; i <= n; ++i) node_rngs.push_back(Rng::fork(seed, i));

  auto deliver = [&](bool from_coordinator, int node, const Payload& pl,
                     int64_t round) {
    if (!pl.control && pl.bits.size() == 0)
      fail(Errc::schedule_violation, "data message with empty payload");
    Message m{round, from_coordinator, node, pl};
    res.transcripts[0].messages.push_back(m);
    res.transcripts[static_cast<size_t>(node)].messages.push_back(m);
    if (!pl.control) {
      int64_t bits = static_cast<int64_t>(pl.bits.size());
      size_t sender = from_coordinator ? 0 : static_cast<size_t>(node);
      size_t receiver = from_coordinator ? static_cast<size_t>(node) : 0;
      res.transcripts[sender].sent_bits += bits;
      res.transcripts[receiver].received_bits += bits;
      res.meter.sent[sender] += bits;
      res.meter.received[receiver] += bits;
      res.meter.total += bits;
      res.meter.per_tag[pl.tag] += bits;
    }
  };

  int64_t messages = 0;
  for (int64_t round = 1;; ++round) {
    CoordAction act = proto.coordinator_act(res.transcripts[0], coord_rng);
    if (act.is_output) {
      res.output = std::move(act.output);
      res.model_rounds = round - 1;
      return res;
    }
    if (act.node < 1 || act.node > n)
      fail(Errc::schedule_violation, "coordinator addressed an unknown node");
    deliver(true, act.node, act.payload, round);
    Payload reply = proto.node_respond(
        act.node, inputs[static_cast<size_t>(act.node) - 1],
        res.transcripts[static_cast<size_t>(act.node)],
        node_rngs[static_cast<size_t>(act.node) - 1]);
    deliver(false, act.node, reply, round);
    messages += 2;
    if (messages > step_budget)
      fail(Errc::step_budget_exceeded, "message budget exhausted");
  }
}

int64_t bits_total(const std::vector<Transcript>& transcripts) {
  int64_t total = 0;
  for (const auto& tr : transcripts) total += tr.sent_bits;
  return total;
}

QgdProtocol::QgdProtocol(QgdInstance inst, QgdParams params, Vec x0)
    : inst_(std::move(inst)), params_(params) {
  const int n = inst_.nodes();
  if (n < 1) fail(Errc::degenerate_input, "instance has no nodes");
  if (x0.empty()) x0.assign(static_cast<size_t>(inst_.d), 0.0);
  if (static_cast<int>(x0.size()) != inst_.d)
    fail(Errc::shape_mismatch, "x0 dimension mismatch");
  g0_ = inst_.grad_norm_bound(params_.W);
  if (!(g0_ > 0)) fail(Errc::invalid_spectrum, "instance has zero curvature");
  x_ = x0;
  q_global_.assign(static_cast<size_t>(inst_.d), 0.0);
  r_.assign(static_cast<size_t>(inst_.d), 0.0);
  q_local_.assign(static_cast<size_t>(n), Vec(static_cast<size_t>(inst_.d), 0.0));
  nodes_.assign(static_cast<size_t>(n), NodeState{x0, Vec(static_cast<size_t>(inst_.d), 0.0), 0, 0});
}

StageConfigs QgdProtocol::configs(int64_t t) const {
  return t == 0 ? bootstrap_configs(params_, inst_.d, nodes(), g0_)
                : round_configs(params_, inst_.d, nodes(), t);
}

CoordAction QgdProtocol::coordinator_act(const Transcript&, Rng&) {
  if (phase_ == Phase::done) return CoordAction::make_output(x_);

  if (phase_ == Phase::poll) {
    if (next_node_ == 1) {
      if (t_ >= 1) add_scaled_inplace(x_, -params_.gamma, q_global_);
      std::fill(r_.begin(), r_.end(), 0.0);
    }
    Payload poll;
    poll.control = true;
    poll.tag = t_;
    return CoordAction::send(next_node_, poll);
  }

  // Phase::send: broadcast the re-quantised gradient sum
  if (next_node_ == 1) {
    StageConfigs cfg = configs(t_);
    const Vec origin(static_cast<size_t>(inst_.d), 0.0);
    const Vec& est = t_ == 0 ? origin : q_global_;
    EncodedVector msg = encode(cfg.broadcast, r_);
    q_global_ = decode(cfg.broadcast, est, msg);
    broadcast_bits_ = msg.bits;
  }
  Payload out;
  out.bits = broadcast_bits_;
  out.tag = t_;
  return CoordAction::send(next_node_, out);
}

Payload QgdProtocol::node_respond(int node, const BitString&,
                                  const Transcript& tr, Rng&) {
  NodeState& st = nodes_[static_cast<size_t>(node) - 1];
  const Message& last = tr.messages.back();
  if (!last.from_coordinator || last.node != node)
    fail(Errc::schedule_violation, "node answered out of turn");

  if (last.payload.control) {
    // poll: advance the iterate and reply with the encoded local gradient
    int64_t t = st.polls++;
    if (t >= 1) add_scaled_inplace(st.x, -params_.gamma, st.q_global);
    Vec g = quad_grad(inst_.objectives[static_cast<size_t>(node) - 1], st.x);
    if (t == 0 && norm2(g) > g0_)
      fail(Errc::contract_violation, "initial gradient exceeds G0");
    StageConfigs cfg = configs(t);
    EncodedVector enc_msg = encode(cfg.gather, g);
    Payload reply;
    reply.bits = enc_msg.bits;
    reply.tag = t;

    // the coordinator decodes against its stored estimate
    const Vec origin(static_cast<size_t>(inst_.d), 0.0);
    const Vec& est = t == 0 ? origin : q_local_[static_cast<size_t>(node) - 1];
    q_local_[static_cast<size_t>(node) - 1] = decode(cfg.gather, est, enc_msg);
    for (size_t k = 0; k < r_.size(); ++k)
      r_[k] += q_local_[static_cast<size_t>(node) - 1][k];
    if (next_node_ == nodes()) {
      next_node_ = 1;
      phase_ = Phase::send;
    } else {
      ++next_node_;
    }
    return reply;
  }

  // broadcast: decode the new global estimate and ack
  int64_t t = st.broadcasts++;
  StageConfigs cfg = configs(t);
  const Vec origin(static_cast<size_t>(inst_.d), 0.0);
  const Vec& est = t == 0 ? origin : st.q_global;
  EncodedVector msg{last.payload.bits, inst_.d, cfg.broadcast.eps,
                    cfg.broadcast.R};
  st.q_global = decode(cfg.broadcast, est, msg);
  Payload ack;
  ack.control = true;
  ack.tag = t_;
  if (next_node_ == nodes()) {
    // logical round complete
    if (on_round) {
      RoundState snap;
      snap.t = t_;
      snap.x = x_;
      snap.q_global = q_global_;
      snap.q_local = q_local_;
      snap.R_t = radius_schedule(params_, t_);
      on_round(snap);
    }
    next_node_ = 1;
    phase_ = (t_ == params_.rounds) ? Phase::done : Phase::poll;
    ++t_;
  } else {
    ++next_node_;
  }
  return ack;
}

}  // namespace qgd
