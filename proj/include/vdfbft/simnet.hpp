#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <queue>
#include <vector>

#include "vdfbft/common.hpp"
#include "vdfbft/wire.hpp"

// Deterministic discrete-event network. Three modes:
//  - Synchronous: every message reaches every recipient within delta; the
//    adversary may reorder/expedite within (sent, sent+delta].
//  - PartialSyncGst: before gst_time the adversary may delay or drop
//    anything; from gst_time on, synchronous rules apply and in-flight
//    deliveries are pulled back to at most gst_time+delta.
//  - PartialSyncRandomDrop: per-(message,recipient) i.i.d. Bernoulli(p)
//    drops before gst_time, message delay capped at delta throughout, and
//    per-replica activation lag in [0, phi] applied to timers. The adversary
//    cannot request drops in this mode.
// All randomness is counter-based off the trial seed, so a (config, seed)
// pair fully determines the trace.
namespace vdfbft::net {

struct LivelockGuardTripped : std::runtime_error {
  explicit LivelockGuardTripped(const std::string& what) : std::runtime_error(what) {}
};

struct NetworkMode {
  enum class Kind : uint8_t { kSynchronous, kPartialSyncGst, kPartialSyncRandomDrop };
  Kind kind = Kind::kSynchronous;
  double delta = 1.0;
  double phi = 0.0;
  SimTime gst_time = 0.0;
  double drop_p = 0.0;
  uint64_t round_cap = 0;  // pre-GST round cap T, enforced by the protocols

  static NetworkMode synchronous(double delta);
  static NetworkMode partial_sync_gst(double delta, SimTime gst, uint64_t round_cap);
  static NetworkMode random_drop(double delta, double phi, SimTime gst, double p,
                                 uint64_t round_cap);

  bool post_gst(SimTime t) const {
    return kind == Kind::kSynchronous || t >= gst_time;
  }
  void validate() const;
};

struct Delivery {
  ReplicaId recipient = 0;
  SimTime deliver_at = 0.0;  // kNever means dropped
  uint32_t version = 0;      // bumped on reschedule; stale queue entries are skipped
  bool done = false;
};

struct Envelope {
  uint64_t msg_id = 0;
  ReplicaId sender = 0;
  bool sender_honest = true;
  SimTime sent_at = 0.0;
  std::vector<uint8_t> payload;
  std::optional<wire::Message> parsed;  // decoded once at send
  std::vector<Delivery> deliveries;
  uint32_t pending = 0;
  // Protocol-side cache for recipient-independent validity (-1 unknown).
  mutable int8_t static_valid_cache = -1;

  const Delivery* delivery_for(ReplicaId r) const;
};

class Network;

// Observation points for adversary controllers and trace audits. on_sent
// fires after the envelope is queued, inside the legal rescheduling window.
struct NetObserver {
  virtual ~NetObserver() = default;
  virtual void on_sent(Network&, Envelope&) {}
  virtual void on_delivered(Network&, const Envelope&, ReplicaId recipient) {}
};

class Network {
 public:
  using DeliverFn = std::function<void(const Envelope&, ReplicaId recipient, SimTime now)>;
  using TimerFn = std::function<void(ReplicaId, uint32_t tag, uint64_t data, SimTime now)>;

  Network(const NetworkMode& mode, uint32_t n, uint64_t trial_seed);

  void set_handlers(DeliverFn on_deliver, TimerFn on_timer);
  void add_observer(NetObserver* obs) { observers_.push_back(obs); }
  void set_event_cap(uint64_t cap) { event_cap_ = cap; }

  SimTime now() const { return now_; }
  const NetworkMode& mode() const { return mode_; }
  uint32_t n() const { return n_; }

  // Honest multicast to all n replicas (self-delivery is immediate and
  // outside adversary control). Bumps the honest multicast counter.
  Envelope& multicast(ReplicaId sender, std::vector<uint8_t> payload);

  // Byzantine point-to-point send; never counted as a multicast.
  Envelope& adversary_send(ReplicaId sender, std::vector<uint8_t> payload,
                           const std::vector<ReplicaId>& recipients);

  // Reschedule one pending delivery. deliver_at = kNever requests a drop.
  // Legality depends on the mode; an out-of-envelope request throws
  // ContractViolation and fails the trial.
  void adversary_schedule(Envelope& env, ReplicaId recipient, SimTime new_deliver_at);

  void set_timer(ReplicaId replica, double delay, uint32_t tag, uint64_t data);

  void mark_corrupted(ReplicaId id);
  bool corrupted(ReplicaId id) const { return corrupted_[id]; }
  uint32_t corrupted_count() const { return corrupted_count_; }

  uint64_t honest_multicast_count() const { return honest_multicasts_; }
  uint64_t drops_total() const { return drops_; }
  uint64_t events_processed() const { return events_processed_; }
  uint64_t trace_hash() const { return trace_hash_; }

  enum class StopReason { kTimeExhausted, kPredicateMet, kQueueEmpty };
  StopReason run_until(SimTime stop_time, const std::function<bool()>& stop_pred = {});

  // Activation lag of a replica (0 unless the mode has phi > 0).
  double lag_of(ReplicaId id) const { return lags_[id]; }

 private:
  struct Event {
    SimTime time;
    uint8_t klass;  // 0 delivery, 1 timer
    uint64_t key1;  // delivery: sender  | timer: replica
    uint64_t key2;  // delivery: msg_id*kMaxN+recipient | timer: tag
    uint64_t seq;
    std::shared_ptr<Envelope> env;  // delivery only
    uint32_t recipient_idx = 0;
    uint32_t version = 0;
    uint32_t timer_tag = 0;
    uint64_t timer_data = 0;
    ReplicaId timer_replica = 0;
  };
  struct EventAfter {
    bool operator()(const Event& a, const Event& b) const {
      if (a.time != b.time) return a.time > b.time;
      if (a.klass != b.klass) return a.klass > b.klass;
      if (a.key1 != b.key1) return a.key1 > b.key1;
      if (a.key2 != b.key2) return a.key2 > b.key2;
      return a.seq > b.seq;
    }
  };

  std::shared_ptr<Envelope> make_envelope(ReplicaId sender, std::vector<uint8_t> payload,
                                          bool honest);
  void queue_delivery(const std::shared_ptr<Envelope>& env, uint32_t idx);
  bool drop_coin(uint64_t msg_id, ReplicaId recipient) const;
  void sweep_in_flight_at_gst();
  void note(uint64_t a, uint64_t b, uint64_t c) {
    trace_hash_ = mix_into(trace_hash_, a);
    trace_hash_ = mix_into(trace_hash_, b ^ (c << 1));
  }

  NetworkMode mode_;
  uint32_t n_;
  uint64_t trial_seed_;
  SimTime now_ = 0.0;
  uint64_t next_msg_id_ = 1;
  uint64_t next_seq_ = 1;
  uint64_t honest_multicasts_ = 0;
  uint64_t drops_ = 0;
  uint64_t events_processed_ = 0;
  uint64_t event_cap_ = 400'000'000;
  uint64_t trace_hash_ = 0x74726163656d6978ull;
  bool gst_swept_ = false;

  std::priority_queue<Event, std::vector<Event>, EventAfter> queue_;
  std::vector<std::shared_ptr<Envelope>> in_flight_;
  std::vector<char> corrupted_;
  uint32_t corrupted_count_ = 0;
  std::vector<double> lags_;
  std::vector<NetObserver*> observers_;
  DeliverFn on_deliver_;
  TimerFn on_timer_;
};

}  // namespace vdfbft::net
