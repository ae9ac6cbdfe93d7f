#include "vdfbft/adversary.hpp"

namespace vdfbft::adversary {

bool Controller::corrupt(ReplicaId id) {
  if (net_->corrupted(id)) return false;
  if (net_->corrupted_count() >= budget_) return false;
  net_->mark_corrupted(id);
  captured_[id] = registry_->keypair(id).sk;
  corruptions_.push_back({id, net_->now()});
  return true;
}

uint64_t Controller::captured_sk(ReplicaId id) const {
  auto it = captured_.find(id);
  if (it == captured_.end())
    throw ContractViolation("adversary referenced a secret key it has not captured");
  return it->second;
}

void StaticSilentStrategy::on_trial_start() {
  for (uint32_t i = 0; i < ctl_->budget(); ++i) ctl_->corrupt(i);
}

void PartitionAdvanceStrategy::on_sent(net::Network& net, net::Envelope& env) {
  if (net.mode().post_gst(net.now())) return;
  const bool sender_favored = env.sender < favored_;
  for (const auto& d : env.deliveries) {
    if (d.recipient == env.sender) continue;
    const bool keep = sender_favored && d.recipient < favored_;
    net.adversary_schedule(env, d.recipient, keep ? net.now() + net.mode().delta * 0.25 : kNever);
  }
}

void ChaosStrategy::on_sent(net::Network& net, net::Envelope& env) {
  if (net.mode().post_gst(net.now())) return;
  const bool can_drop = net.mode().kind == net::NetworkMode::Kind::kPartialSyncGst;
  for (const auto& d : env.deliveries) {
    if (d.recipient == env.sender) continue;
    if (d.deliver_at == kNever) continue;  // random-drop coin already lost it
    const uint64_t coin = hash_words(seed_, env.msg_id, {d.recipient});
    const double u = u01_from_bits(coin);
    if (can_drop && u < drop_fraction_) {
      net.adversary_schedule(env, d.recipient, kNever);
    } else if (can_drop) {
      // Hold the message back toward (but not past) GST.
      const SimTime target = std::min(net.mode().gst_time + net.mode().delta * 0.5,
                                      net.now() + net.mode().delta * (1.0 + 8.0 * u));
      net.adversary_schedule(env, d.recipient, std::max(target, net.now()));
    } else {
      // Random-drop mode: only reorder inside the delta window.
      net.adversary_schedule(env, d.recipient,
                             env.sent_at + net.mode().delta * (0.25 + 0.75 * u));
    }
  }
}

void FastForwardStrategy::on_trial_start() {
  for (uint32_t i = 0; i < corrupt_n_; ++i) ctl_->corrupt(i);
}

void FastForwardStrategy::on_sent(net::Network& net, net::Envelope& env) {
  if (net.mode().kind != net::NetworkMode::Kind::kPartialSyncGst) return;
  if (net.mode().post_gst(net.now())) return;
  for (const auto& d : env.deliveries) {
    if (d.recipient == env.sender) continue;
    net.adversary_schedule(env, d.recipient, net.now() + net.mode().delta * 1e-3);
  }
}

}  // namespace vdfbft::adversary
