#include "vdfbft/simnet.hpp"

#include <algorithm>
#include <sstream>

namespace vdfbft::net {

namespace {
constexpr uint64_t kMaxN = 1u << 13;
constexpr uint64_t kDropK = 0x64726f702d636f69ull;  // "drop-coi"
constexpr uint64_t kLagK = 0x6c61672d64726177ull;   // "lag-draw"
}  // namespace

NetworkMode NetworkMode::synchronous(double delta) {
  NetworkMode m;
  m.kind = Kind::kSynchronous;
  m.delta = delta;
  m.validate();
  return m;
}

NetworkMode NetworkMode::partial_sync_gst(double delta, SimTime gst, uint64_t round_cap) {
  NetworkMode m;
  m.kind = Kind::kPartialSyncGst;
  m.delta = delta;
  m.gst_time = gst;
  m.round_cap = round_cap;
  m.validate();
  return m;
}

NetworkMode NetworkMode::random_drop(double delta, double phi, SimTime gst, double p,
                                     uint64_t round_cap) {
  NetworkMode m;
  m.kind = Kind::kPartialSyncRandomDrop;
  m.delta = delta;
  m.phi = phi;
  m.gst_time = gst;
  m.drop_p = p;
  m.round_cap = round_cap;
  m.validate();
  return m;
}

void NetworkMode::validate() const {
  if (!(delta > 0.0)) throw ConfigError("NetworkMode: delta must be > 0");
  if (phi < 0.0) throw ConfigError("NetworkMode: phi must be >= 0");
  if (drop_p < 0.0 || drop_p >= 1.0) throw ConfigError("NetworkMode: drop_p must be in [0,1)");
  if (gst_time < 0.0) throw ConfigError("NetworkMode: gst_time must be >= 0");
  if (kind != Kind::kPartialSyncRandomDrop && drop_p != 0.0)
    throw ConfigError("NetworkMode: drop_p only valid in random-drop mode");
}

const Delivery* Envelope::delivery_for(ReplicaId r) const {
  for (const auto& d : deliveries)
    if (d.recipient == r) return &d;
  return nullptr;
}

Network::Network(const NetworkMode& mode, uint32_t n, uint64_t trial_seed)
    : mode_(mode), n_(n), trial_seed_(trial_seed) {
  if (n == 0 || n >= kMaxN) throw ConfigError("Network: replica count out of range");
  mode.validate();
  corrupted_.assign(n, 0);
  lags_.resize(n, 0.0);
  if (mode_.phi > 0.0) {
    for (uint32_t i = 0; i < n; ++i)
      lags_[i] = u01_from_bits(hash_words(trial_seed_, kLagK, {i})) * mode_.phi;
  }
}

void Network::set_handlers(DeliverFn on_deliver, TimerFn on_timer) {
  on_deliver_ = std::move(on_deliver);
  on_timer_ = std::move(on_timer);
}

bool Network::drop_coin(uint64_t msg_id, ReplicaId recipient) const {
  const double u = u01_from_bits(hash_words(trial_seed_, kDropK, {msg_id, recipient}));
  return u < mode_.drop_p;
}

std::shared_ptr<Envelope> Network::make_envelope(ReplicaId sender, std::vector<uint8_t> payload,
                                                 bool honest) {
  auto env = std::make_shared<Envelope>();
  env->msg_id = next_msg_id_++;
  env->sender = sender;
  env->sender_honest = honest;
  env->sent_at = now_;
  env->payload = std::move(payload);
  env->parsed = wire::decode(env->payload);
  return env;
}

void Network::queue_delivery(const std::shared_ptr<Envelope>& env, uint32_t idx) {
  const Delivery& d = env->deliveries[idx];
  if (d.deliver_at == kNever) return;
  Event ev;
  ev.time = d.deliver_at;
  ev.klass = 0;
  ev.key1 = env->sender;
  ev.key2 = env->msg_id * kMaxN + d.recipient;
  ev.seq = next_seq_++;
  ev.env = env;
  ev.recipient_idx = idx;
  ev.version = d.version;
  queue_.push(std::move(ev));
}

Envelope& Network::multicast(ReplicaId sender, std::vector<uint8_t> payload) {
  if (corrupted_[sender])
    throw ContractViolation("multicast: corrupted sender must use adversary_send");
  auto env = make_envelope(sender, std::move(payload), true);
  ++honest_multicasts_;

  const bool pre_gst_drops =
      mode_.kind == NetworkMode::Kind::kPartialSyncRandomDrop && !mode_.post_gst(now_);
  env->deliveries.reserve(n_);
  for (uint32_t r = 0; r < n_; ++r) {
    Delivery d;
    d.recipient = r;
    if (r == sender) {
      d.deliver_at = now_;  // local state, outside the network
    } else if (pre_gst_drops && drop_coin(env->msg_id, r)) {
      d.deliver_at = kNever;
      ++drops_;
      note(0xD0, env->msg_id, r);
    } else {
      d.deliver_at = now_ + mode_.delta;
    }
    env->deliveries.push_back(d);
    if (d.deliver_at != kNever) ++env->pending;
  }
  note(0x5E, env->msg_id, sender);
  in_flight_.push_back(env);
  for (uint32_t i = 0; i < n_; ++i) queue_delivery(env, i);
  for (auto* obs : observers_) obs->on_sent(*this, *env);
  return *env;
}

Envelope& Network::adversary_send(ReplicaId sender, std::vector<uint8_t> payload,
                                  const std::vector<ReplicaId>& recipients) {
  if (!corrupted_[sender])
    throw ContractViolation("adversary_send: sender is not corrupted");
  auto env = make_envelope(sender, std::move(payload), false);

  const bool pre_gst_drops =
      mode_.kind == NetworkMode::Kind::kPartialSyncRandomDrop && !mode_.post_gst(now_);
  env->deliveries.reserve(recipients.size());
  for (ReplicaId r : recipients) {
    if (r >= n_) throw ConfigError("adversary_send: recipient out of range");
    Delivery d;
    d.recipient = r;
    if (pre_gst_drops && drop_coin(env->msg_id, r)) {
      d.deliver_at = kNever;
      ++drops_;
    } else {
      d.deliver_at = now_ + mode_.delta;
    }
    env->deliveries.push_back(d);
    if (d.deliver_at != kNever) ++env->pending;
  }
  note(0xAE, env->msg_id, sender);
  in_flight_.push_back(env);
  for (uint32_t i = 0; i < env->deliveries.size(); ++i) queue_delivery(env, i);
  for (auto* obs : observers_) obs->on_sent(*this, *env);
  return *env;
}

void Network::adversary_schedule(Envelope& env, ReplicaId recipient, SimTime new_deliver_at) {
  if (recipient == env.sender)
    throw ContractViolation("adversary_schedule: cannot intercept self-delivery");
  Delivery* target = nullptr;
  uint32_t idx = 0;
  for (uint32_t i = 0; i < env.deliveries.size(); ++i) {
    if (env.deliveries[i].recipient == recipient) {
      target = &env.deliveries[i];
      idx = i;
      break;
    }
  }
  if (!target) throw ContractViolation("adversary_schedule: no such recipient");
  if (target->done) throw ContractViolation("adversary_schedule: delivery already happened");
  if (target->deliver_at == kNever && mode_.kind != NetworkMode::Kind::kPartialSyncGst)
    throw ContractViolation("adversary_schedule: delivery already dropped");

  const bool drop = new_deliver_at == kNever;
  if (!drop && new_deliver_at < now_)
    throw ContractViolation("adversary_schedule: cannot schedule into the past");

  switch (mode_.kind) {
    case NetworkMode::Kind::kSynchronous:
      if (drop) throw ContractViolation("adversary_schedule: drops forbidden in synchronous mode");
      if (!(new_deliver_at > env.sent_at) || new_deliver_at > env.sent_at + mode_.delta)
        throw ContractViolation("adversary_schedule: outside (sent, sent+delta] window");
      break;
    case NetworkMode::Kind::kPartialSyncGst:
      if (mode_.post_gst(now_)) {
        if (drop) throw ContractViolation("adversary_schedule: drops forbidden after GST");
        const SimTime hi = std::max(env.sent_at, mode_.gst_time) + mode_.delta;
        if (!(new_deliver_at > env.sent_at) || new_deliver_at > hi)
          throw ContractViolation("adversary_schedule: beyond delta window after GST");
      }
      // Before GST: arbitrary finite delay or drop is legal.
      break;
    case NetworkMode::Kind::kPartialSyncRandomDrop:
      if (drop)
        throw ContractViolation(
            "adversary_schedule: targeted drops forbidden in random-drop mode");
      if (!(new_deliver_at > env.sent_at) || new_deliver_at > env.sent_at + mode_.delta)
        throw ContractViolation("adversary_schedule: delay above delta in random-drop mode");
      break;
  }

  if (target->deliver_at != kNever) --env.pending;
  target->deliver_at = drop ? kNever : new_deliver_at;
  target->version++;
  if (drop) {
    ++drops_;
    note(0xD1, env.msg_id, recipient);
    return;
  }
  ++env.pending;
  // Re-queue under the new time; the stale entry is skipped by version check.
  std::shared_ptr<Envelope> shared;
  for (auto& e : in_flight_)
    if (e.get() == &env) {
      shared = e;
      break;
    }
  if (!shared) throw ContractViolation("adversary_schedule: envelope not in flight");
  queue_delivery(shared, idx);
  note(0xAD, env.msg_id, recipient);
}

void Network::set_timer(ReplicaId replica, double delay, uint32_t tag, uint64_t data) {
  if (delay < 0.0) throw ConfigError("set_timer: negative delay");
  Event ev;
  ev.time = now_ + delay + lags_[replica];
  ev.klass = 1;
  ev.key1 = replica;
  ev.key2 = tag;
  ev.seq = next_seq_++;
  ev.timer_tag = tag;
  ev.timer_data = data;
  ev.timer_replica = replica;
  queue_.push(std::move(ev));
}

void Network::mark_corrupted(ReplicaId id) {
  if (id >= n_) throw ConfigError("mark_corrupted: id out of range");
  if (!corrupted_[id]) {
    corrupted_[id] = 1;
    ++corrupted_count_;
    note(0xC0, id, double_bits(now_));
  }
}

void Network::sweep_in_flight_at_gst() {
  // Model enforcement: from GST on, anything still in flight lands within
  // delta. Dropped deliveries stay dropped; they were lost pre-GST.
  const SimTime latest = mode_.gst_time + mode_.delta;
  for (auto& env : in_flight_) {
    for (uint32_t i = 0; i < env->deliveries.size(); ++i) {
      Delivery& d = env->deliveries[i];
      if (d.done || d.deliver_at == kNever) continue;
      if (d.deliver_at > latest) {
        d.deliver_at = latest;
        d.version++;
        queue_delivery(env, i);
      }
    }
  }
}

Network::StopReason Network::run_until(SimTime stop_time, const std::function<bool()>& stop_pred) {
  while (!queue_.empty()) {
    const Event& top = queue_.top();
    if (top.time > stop_time) {
      now_ = stop_time;
      return StopReason::kTimeExhausted;
    }
    Event ev = top;
    queue_.pop();

    if (mode_.kind == NetworkMode::Kind::kPartialSyncGst && !gst_swept_ &&
        ev.time >= mode_.gst_time) {
      gst_swept_ = true;
      sweep_in_flight_at_gst();
      // Re-evaluate ordering: the sweep may have queued earlier deliveries.
      queue_.push(std::move(ev));
      continue;
    }

    now_ = ev.time;
    if (++events_processed_ > event_cap_) {
      std::ostringstream msg;
      msg << "livelock guard: exceeded " << event_cap_ << " events at t=" << now_
          << " (queue size " << queue_.size() << ")";
      throw LivelockGuardTripped(msg.str());
    }

    if (ev.klass == 0) {
      Delivery& d = ev.env->deliveries[ev.recipient_idx];
      if (d.version != ev.version || d.done || d.deliver_at == kNever) continue;
      d.done = true;
      --ev.env->pending;
      note(0xDE, ev.env->msg_id, d.recipient);
      for (auto* obs : observers_) obs->on_delivered(*this, *ev.env, d.recipient);
      if (on_deliver_) on_deliver_(*ev.env, d.recipient, now_);
      if (ev.env->pending == 0) {
        // Opportunistic prune of fully delivered envelopes.
        if (in_flight_.size() > 1024) {
          in_flight_.erase(std::remove_if(in_flight_.begin(), in_flight_.end(),
                                          [](const auto& e) { return e->pending == 0; }),
                           in_flight_.end());
        }
      }
    } else {
      note(0x71, ev.timer_replica, ev.timer_tag);
      if (on_timer_) on_timer_(ev.timer_replica, ev.timer_tag, ev.timer_data, now_);
    }

    if (stop_pred && stop_pred()) return StopReason::kPredicateMet;
  }
  if (stop_time != kNever && now_ < stop_time) now_ = stop_time;
  return queue_.empty() ? StopReason::kQueueEmpty : StopReason::kTimeExhausted;
}

}  // namespace vdfbft::net
