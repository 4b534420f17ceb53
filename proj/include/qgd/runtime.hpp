#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <vector>

#include "qgd/bits.hpp"
#include "qgd/descent.hpp"
#include "qgd/rng.hpp"
#include "qgd/vec.hpp"

namespace qgd {

/// One message body. Control messages (polls, acks) carry no information and
/// are never metered; data payloads must hold at least one bit. `tag` groups
/// messages into logical protocol rounds for per-round accounting.
struct Payload {
  BitString bits;
  bool control = false;
  int64_t tag = -1;
};

struct Message {
  int64_t round = 0;  // model-round index (coordinator action count)
  bool from_coordinator = false;
  int node = 0;  // 1-based
  Payload payload;
};

/// Ordered message log for one endpoint with exact metered bit counters.
struct Transcript {
  std::vector<Message> messages;
  int64_t sent_bits = 0;
  int64_t received_bits = 0;
};

struct BitMeter {
  int64_t total = 0;
  std::vector<int64_t> sent;      // [0] coordinator, [i] node i
  std::vector<int64_t> received;  // same layout
  std::map<int64_t, int64_t> per_tag;
};

struct CoordAction {
  bool is_output = false;
  Vec output;
  int node = 0;
  Payload payload;

  static CoordAction make_output(Vec v) {
    CoordAction a;
    a.is_output = true;
    a.output = std::move(v);
    return a;
  }
  static CoordAction send(int node, Payload p) {
    CoordAction a;
    a.node = node;
    a.payload = std::move(p);
    return a;
  }
};

/// A protocol in the coordinator model: per model-round the coordinator either
/// outputs or messages one node, and that node responds. Actions may depend
/// only on the endpoint's transcript, its input, and its private randomness.
class Protocol {
 public:
  virtual ~Protocol() = default;
  virtual int nodes() const = 0;
  /// Declared length of each endpoint's private random string.
  virtual int randomness_bits() const { return 0; }
  virtual CoordAction coordinator_act(const Transcript& tr, Rng& rng) = 0;
  virtual Payload node_respond(int node, const BitString& input,
                               const Transcript& tr, Rng& rng) = 0;
};

struct RunResult {
  Vec output;
  std::vector<Transcript> transcripts;  // [0] coordinator, [1..N] nodes
  BitMeter meter;
  int64_t model_rounds = 0;
};

/// Execute the alternating schedule until the coordinator outputs.
/// Deterministic given (protocol, inputs, seed). Throws schedule_violation on
/// malformed actions and step_budget_exceeded past `step_budget` messages.
RunResult run_protocol(Protocol& proto, const std::vector<BitString>& inputs,
                       uint64_t seed, int64_t step_budget = 10'000'000);

/// Exact total of metered payload bits across transcripts (counting each
/// message once, at its sender).
int64_t bits_total(const std::vector<Transcript>& transcripts);

/// Quantised gradient descent as a coordinator-model protocol. Each logical
/// round is sequentialised as N polls (control) answered by encoded gradients,
/// then N copies of the broadcast message (identical payload, counted once per
/// recipient) answered by acks. Logical round 0 is the bootstrap exchange.
/// The coordinator's final output is x(T).
class QgdProtocol final : public Protocol {
 public:
  QgdProtocol(QgdInstance inst, QgdParams params, Vec x0 = {});

  int nodes() const override { return static_cast<int>(nodes_.size()); }
  CoordAction coordinator_act(const Transcript& tr, Rng& rng) override;
  Payload node_respond(int node, const BitString& input, const Transcript& tr,
                       Rng& rng) override;

  /// Observer fired after each logical round completes (omniscient state).
  std::function<void(const RoundState&)> on_round;

  int64_t logical_rounds() const { return params_.rounds; }

  /// The replicated (x, q) pair node i currently holds.
  std::pair<Vec, Vec> node_view(int node) const {
    const NodeState& st = nodes_.at(static_cast<size_t>(node) - 1);
    return {st.x, st.q_global};
  }

 private:
  StageConfigs configs(int64_t t) const;

  QgdInstance inst_;
  QgdParams params_;
  double g0_ = 0;

  // coordinator state
  enum class Phase { poll, send, done };
  Phase phase_ = Phase::poll;
  int64_t t_ = 0;  // current logical round, 0 = bootstrap
  int next_node_ = 1;
  Vec x_;
  Vec q_global_;
  std::vector<Vec> q_local_;
  Vec r_;
  BitString broadcast_bits_;

  // per-node replicated state
  struct NodeState {
    Vec x;
    Vec q_global;
    int64_t polls = 0;
    int64_t broadcasts = 0;
  };
  std::vector<NodeState> nodes_;
};

}  // namespace qgd
