#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <unordered_map>
#include <vector>

#include "vdfbft/adversary.hpp"
#include "vdfbft/common.hpp"
#include "vdfbft/simnet.hpp"
#include "vdfbft/sortition.hpp"
#include "vdfbft/vdf.hpp"
#include "vdfbft/wire.hpp"

// Synchronous-model general consensus: an epoch loop of leader proposal plus
// three committee voting rounds, every message gated by a VDF whose
// difficulty schedule makes post-corruption double-signing finish only after
// the epoch is over.
namespace vdfbft::consensus {

struct Config {
  uint32_t n = 4;
  uint32_t f = 1;
  double eps = 0.3;
  double committee_scale = 1.0;
  vdf::DifficultySchedule schedule;
  vdf::SpeedProfile profile;
  uint64_t max_epochs = 64;

  double log2n() const { return std::log2(static_cast<double>(n)); }
  double leader_threshold() const { return 1.0 / (2.0 * n); }
  double committee_threshold() const {
    const double l2 = log2n() * log2n();
    const double t = committee_scale * 2.0 * l2 / (3.0 * (1.0 - eps) * n);
    return t < 1.0 ? t : 1.0;
  }
  uint32_t vote_quorum() const {
    const double l2 = log2n() * log2n();
    const double q = std::ceil(committee_scale * 2.0 * l2 / 3.0);
    return q < 1.0 ? 1u : static_cast<uint32_t>(q);
  }
  // 4 log^2 n / 3, the tally level that three committees reach only with
  // vanishing probability.
  double double_quorum_level() const {
    const double l2 = log2n() * log2n();
    return committee_scale * 4.0 * l2 / 3.0;
  }

  void validate() const;
};

// VDF input binds the epoch, the signer's election proof and the value being
// signed, so nothing can be evaluated before the victim's election output is
// known.
uint64_t vdf_input_digest(wire::Tag tag, uint64_t epoch, uint64_t sort_proof, uint64_t content);

sortition::Context election_context(wire::Tag tag, uint64_t epoch);

double difficulty_for(const Config& cfg, wire::Tag tag);
double threshold_for(const Config& cfg, wire::Tag tag);

// Per-trial client workload: opaque payload digests.
uint64_t workload_digest(uint64_t trial_seed, uint64_t epoch, ReplicaId proposer);
uint64_t conflicting_digest(uint64_t trial_seed, uint64_t epoch, ReplicaId proposer);

// Recipient-independent validity: identity-bound signature, election
// threshold, VDF output binding. Cached on the envelope.
bool static_valid(const wire::Message& m, const Config& cfg, const sortition::Registry& reg);
bool envelope_static_valid(const net::Envelope& env, const Config& cfg,
                           const sortition::Registry& reg);

struct CommitSink {
  virtual ~CommitSink() = default;
  virtual void on_commit(ReplicaId id, uint64_t digest, uint64_t epoch, SimTime now) = 0;
};

class Replica {
 public:
  struct Deps {
    net::Network* net = nullptr;
    vdf::VdfOracle* oracle = nullptr;
    const sortition::Registry* registry = nullptr;
    const Config* cfg = nullptr;
    uint64_t trial_seed = 0;
    CommitSink* sink = nullptr;
  };

  Replica(ReplicaId id, uint64_t sk, double speed, const Deps& deps);

  void on_start(SimTime now);
  void on_deliver(const net::Envelope& env, SimTime now);
  void on_timer(uint32_t tag, uint64_t data, SimTime now);

  bool has_committed() const { return committed_.has_value(); }
  uint64_t committed_digest() const { return *committed_; }
  uint64_t committed_epoch() const { return committed_epoch_; }
  uint64_t epoch() const { return epoch_; }

 private:
  struct Tally {
    uint64_t digest = 0;
    uint32_t count = 0;
    std::vector<uint64_t> voted;  // bitset over replica ids
  };
  struct PendingSend {
    uint64_t epoch = 0;
    wire::Message msg;
    bool armed = false;
  };

  void begin_epoch(uint64_t epoch, SimTime now);
  void handle_proposal(const wire::Message& m, SimTime now);
  void handle_phase_vote(wire::Phase phase, const wire::Message& m, SimTime now);
  void join_committee(wire::Phase phase, uint64_t target, double verify_charge, SimTime now);
  void check_advance(wire::Phase phase, SimTime now);
  Tally& tally_for(wire::Phase phase, uint64_t digest);
  bool add_vote(Tally& t, ReplicaId voter);
  bool mature(const wire::Message& m, SimTime now) const;

  ReplicaId id_;
  uint64_t sk_;
  double speed_;
  Deps d_;

  uint64_t epoch_ = 0;
  SimTime epoch_start_ = 0.0;
  bool leader_this_epoch_ = false;
  std::optional<uint64_t> s_, s1_, s2_;
  std::optional<uint64_t> committed_;
  uint64_t committed_epoch_ = 0;
  std::array<std::vector<Tally>, 3> tallies_;
  std::array<bool, 3> advanced_{};
  std::array<PendingSend, 4> pending_;  // proposal + three vote phases
};

// Reactive key-reuse attack. On seeing an honest proposal, corrupts the
// leader and races a conflicting proposal through a second VDF; on seeing
// honest committee votes in an epoch with two live proposals, corrupts the
// voters and mirrors their votes onto the other proposal. Previously
// captured replicas re-enter through their own elections in later epochs.
// Every second message is gated by eval_request at the adversary speed, so
// under a solved schedule the attack runs but never lands inside an epoch.
class KeyReuseStrategy : public adversary::Strategy {
 public:
  KeyReuseStrategy(const Config& cfg, uint64_t trial_seed)
      : cfg_(&cfg), trial_seed_(trial_seed) {}

  void on_sent(net::Network& net, net::Envelope& env) override;
  void on_adv_timer(ReplicaId replica, uint32_t tag, uint64_t data, SimTime now) override;

 private:
  struct PendingSend {
    ReplicaId sender = 0;
    std::vector<uint8_t> payload;
    bool split_order = false;  // deliver before the honest proposal on one half
  };

  uint64_t epoch_of(SimTime t) const {
    return static_cast<uint64_t>(std::floor(t / cfg_->schedule.epoch_length_X)) + 1;
  }
  SimTime epoch_end(uint64_t epoch) const { return epoch * cfg_->schedule.epoch_length_X; }

  void attack_proposal(net::Network& net, net::Envelope& env);
  void mirror_vote(net::Network& net, const wire::Message& m, SimTime now);
  void pool_phase_votes(net::Network& net, wire::Tag phase_tag, uint64_t epoch, SimTime now);
  void schedule_send(ReplicaId sender, const wire::Message& msg, SimTime at, bool split);

  const Config* cfg_;
  uint64_t trial_seed_ = 0;

  uint64_t conflict_epoch_ = 0;  // epoch with two live proposals, 0 = none
  uint64_t digest_a_ = 0, digest_b_ = 0;
  std::set<uint64_t> pool_phases_done_;  // (epoch<<2)|phase
  std::unordered_map<uint64_t, PendingSend> pending_;
  uint64_t next_key_ = 1;
};

// Trace-level oracle, independent of replica state machines. Observes every
// send, recomputes validity, and accumulates the per-trial verdicts.
class Auditor : public net::NetObserver, public CommitSink {
 public:
  Auditor(const Config& cfg, const sortition::Registry& reg, const vdf::VdfOracle& oracle)
      : cfg_(&cfg), reg_(&reg), oracle_(&oracle) {}

  void on_sent(net::Network& net, net::Envelope& env) override;
  void on_commit(ReplicaId id, uint64_t digest, uint64_t epoch, SimTime now) override;

  // verdicts and metrics
  bool safety_violation() const { return safety_violation_; }
  bool any_commit() const { return !commits_.empty(); }
  uint64_t first_commit_epoch() const { return first_commit_epoch_; }
  uint64_t honest_double_votes() const { return honest_double_votes_; }
  uint64_t adversary_double_votes() const { return adversary_double_votes_; }
  uint64_t double_proposal_epochs() const { return double_proposal_epochs_.size(); }
  uint64_t premature_vdf_refs() const { return premature_vdf_refs_; }
  uint64_t phase_overflow_events() const { return phase_overflow_events_; }
  uint64_t double_quorum_phases() const { return double_quorum_phases_; }
  const std::map<ReplicaId, uint64_t>& commits() const { return commits_; }
  // mean distinct valid voters per phase over epochs that had any votes
  std::array<double, 3> mean_committee_sizes() const;

 private:
  struct PhaseKey {
    uint64_t epoch;
    uint8_t phase;
    bool operator<(const PhaseKey& o) const {
      return epoch != o.epoch ? epoch < o.epoch : phase < o.phase;
    }
  };
  struct PhaseStats {
    std::map<uint64_t, std::vector<uint64_t>> voters_by_digest;  // digest -> bitset
    std::map<uint64_t, uint32_t> counts;
    std::vector<uint64_t> all_voters;
    uint32_t distinct_voters = 0;
    uint32_t quorum_digests = 0;
    bool overflowed = false;
  };

  const Config* cfg_;
  const sortition::Registry* reg_;
  const vdf::VdfOracle* oracle_;

  std::map<PhaseKey, PhaseStats> phases_;
  std::map<uint64_t, std::set<uint64_t>> proposals_per_epoch_;
  std::set<uint64_t> double_proposal_epochs_;
  std::map<uint64_t, std::map<ReplicaId, uint64_t>> honest_vote_digest_;  // (epoch<<2|phase)
  uint64_t honest_double_votes_ = 0;
  uint64_t adversary_double_votes_ = 0;
  uint64_t premature_vdf_refs_ = 0;
  uint64_t phase_overflow_events_ = 0;
  uint64_t double_quorum_phases_ = 0;

  std::map<ReplicaId, uint64_t> commits_;
  bool safety_violation_ = false;
  uint64_t first_commit_epoch_ = 0;
};

}  // namespace vdfbft::consensus
