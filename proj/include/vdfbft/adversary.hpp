#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "vdfbft/common.hpp"
#include "vdfbft/simnet.hpp"
#include "vdfbft/sortition.hpp"
#include "vdfbft/vdf.hpp"

// Weakly adaptive adversary: a corruption budget, captured-key bookkeeping,
// and pluggable attack strategies. Corruption is irreversible, takes effect
// immediately for new messages, and never retracts envelopes already handed
// to the network.
namespace vdfbft::adversary {

// Timer tags at or above this value are routed to the strategy instead of a
// replica's protocol logic.
constexpr uint32_t kAdvTimerBase = 0x80000000u;

struct CorruptionEvent {
  ReplicaId replica = 0;
  SimTime at = 0.0;
};

class Controller {
 public:
  Controller(net::Network& net, const sortition::Registry& registry, uint32_t budget_f)
      : net_(&net), registry_(&registry), budget_(budget_f) {}

  // Corrupt a replica, capturing its secret key. Refused (returns false)
  // when the budget is exhausted; a no-op on an already-corrupted replica.
  bool corrupt(ReplicaId id);

  bool is_corrupted(ReplicaId id) const { return net_->corrupted(id); }
  uint32_t budget() const { return budget_; }
  uint32_t corrupted_count() const { return net_->corrupted_count(); }

  // Key secrecy: the only path by which strategy code obtains a secret.
  uint64_t captured_sk(ReplicaId id) const;

  const std::vector<CorruptionEvent>& corruptions() const { return corruptions_; }

  void record_attack_attempt() { ++attack_attempts_; }
  void record_attack_success() { ++attack_successes_; }
  uint64_t attack_attempts() const { return attack_attempts_; }
  uint64_t attack_successes() const { return attack_successes_; }

 private:
  net::Network* net_;
  const sortition::Registry* registry_;
  uint32_t budget_;
  std::unordered_map<ReplicaId, uint64_t> captured_;
  std::vector<CorruptionEvent> corruptions_;
  uint64_t attack_attempts_ = 0;
  uint64_t attack_successes_ = 0;
};

// One strategy per trial, invoked from the trial's single event loop at
// observation points. Strategies see every message at send time and may
// corrupt, reschedule deliveries, or send Byzantine messages.
class Strategy : public net::NetObserver {
 public:
  virtual void attach(net::Network& net, Controller& ctl, const sortition::Registry& registry,
                      vdf::VdfOracle& oracle) {
    net_ = &net;
    ctl_ = &ctl;
    registry_ = &registry;
    oracle_ = &oracle;
  }
  virtual void on_trial_start() {}
  virtual void on_adv_timer(ReplicaId replica, uint32_t tag, uint64_t data, SimTime now) {
    (void)replica, (void)tag, (void)data, (void)now;
  }
  virtual void on_deliver_to_corrupted(const net::Envelope& env, ReplicaId recipient,
                                       SimTime now) {
    (void)env, (void)recipient, (void)now;
  }

 protected:
  net::Network* net_ = nullptr;
  Controller* ctl_ = nullptr;
  const sortition::Registry* registry_ = nullptr;
  vdf::VdfOracle* oracle_ = nullptr;
};

class PassiveStrategy : public Strategy {};

// Statically corrupts f replicas at trial start; they stay silent. Used to
// stress quorum margins without any active attack.
class StaticSilentStrategy : public Strategy {
 public:
  void on_trial_start() override;
};

// Pre-GST message control that walls off everyone outside a favored set of
// |favored| replicas: traffic among the favored is delivered promptly, all
// other deliveries are dropped. The favored group can keep forming quorums
// and advancing rounds while the rest stay behind, which exercises
// certificate adoption and the overlap invariant after GST. Corrupts nobody.
class PartitionAdvanceStrategy : public Strategy {
 public:
  explicit PartitionAdvanceStrategy(uint32_t favored) : favored_(favored) {}
  void on_sent(net::Network& net, net::Envelope& env) override;

 private:
  uint32_t favored_;
};

// Pre-GST chaos: each delivery is independently dropped (GST mode) or pushed
// to the edge of the legal window, driven by a deterministic coin.
class ChaosStrategy : public Strategy {
 public:
  explicit ChaosStrategy(double drop_fraction = 0.5) : drop_fraction_(drop_fraction) {}
  void attach(net::Network& net, Controller& ctl, const sortition::Registry& registry,
              vdf::VdfOracle& oracle) override {
    Strategy::attach(net, ctl, registry, oracle);
    seed_ = hash_words(0x63686165u, net.mode().gst_time == 0 ? 1 : 2, {net.n()});
  }
  void on_sent(net::Network& net, net::Envelope& env) override;

 private:
  double drop_fraction_;
  uint64_t seed_ = 0;
};

// Fast-forwarding setup: corrupts f replicas up front (silent, keys
// captured) and, in the GST model, expedites every pre-GST delivery so the
// round counter advances as fast as the waves allow. In the random-drop
// model it has no scheduling power beyond delta, so it stays passive; the
// harness compares how often each mode reaches an adversary-dominated
// committee round.
class FastForwardStrategy : public Strategy {
 public:
  explicit FastForwardStrategy(uint32_t corrupt_upfront) : corrupt_n_(corrupt_upfront) {}
  void on_trial_start() override;
  void on_sent(net::Network& net, net::Envelope& env) override;

 private:
  uint32_t corrupt_n_;
};

}  // namespace vdfbft::adversary
