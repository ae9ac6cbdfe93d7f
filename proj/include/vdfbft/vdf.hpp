#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <unordered_map>

#include "vdfbft/common.hpp"

// Simulated Verifiable Delay Function. Outputs are PRF digests; the delay is
// enforced by the simulation clock: an evaluation requested at t with solver
// speed delta on difficulty D becomes available at t + delta*D, and the
// per-trial oracle remembers every issuance so that verification can refuse
// receipts presented before any legitimate completion time. Parallel
// evaluations of the same input by the same actor do not finish any earlier.
namespace vdfbft::vdf {

struct VdfParams {
  double difficulty = 0.0;
};

struct VdfReceipt {
  uint64_t input_digest = 0;
  uint64_t output = 0;
  uint64_t proof = 0;
  SimTime ready_at = 0.0;
  double solver_speed = 0.0;
};

// Solver speeds, in time-per-unit-difficulty. Smaller is faster.
struct SpeedProfile {
  double delta_h_slow = 1.0;  // slowest honest replica
  double delta_h_fast = 1.0;  // fastest honest replica
  double delta_adv = 1.0;     // adversary
};

struct DifficultySchedule {
  double d_m = 0.0;  // proposal
  double d_v = 0.0;  // vote
  double d_p = 0.0;  // precommit
  double d_c = 0.0;  // commit
  double epoch_length_X = 0.0;
  uint64_t rounds_R = 0;

  static DifficultySchedule zeroed(double epoch_length, double delta_net);
};

VdfParams setup(double difficulty);

// Closed form of the feasibility boundary for the slowest honest speed:
// (dh + da)^4 / (dh^3 + 4 dh^2 da + 6 dh da^2 + 4 da^3).
// A schedule exists iff delta_h_slow * (1 + verif_slack) is below this.
double feasibility_bound(double delta_h, double delta_adv);

// Computes a difficulty schedule satisfying, with exact rational arithmetic:
//   (dh+da) d_m > X
//   dh (d_m+d_v) + da d_v > X
//   dh (d_m+d_v+d_p) + da d_p > X
//   dh (d_m+d_v+d_p+d_c) + da d_c > X
//   X >= dh' (sum d_i + sum ceil_log2(d_i)) + 4 delta_net     (verif_slack = 0)
//   X >= dh' (1 + verif_slack) sum d_i + 4 delta_net          (verif_slack > 0)
// d_m > d_v > d_p > d_c, X > delta_net, rounds_R = ceil(X / delta_net).
// The ceil_log2 terms upper-bound the true log2 verification charges, so the
// returned schedule also satisfies the underlying inequality.
// Throws InfeasibleScheduleError when delta_h_slow is at or past the bound.
DifficultySchedule solve_schedule(const SpeedProfile& profile, double delta_net,
                                  double verif_slack = 0.0);

// Extra send delay for a replica faster than the slowest honest one, so all
// honest completions of a common request time coincide.
double slow_replica_delay(double receipt_speed, const SpeedProfile& profile, double difficulty);

// Simulated verification cost in time units per unit speed.
inline double verify_time(double difficulty) {
  if (difficulty <= 1.0) return 0.0;
  return std::log2(difficulty);
}

// Per-trial evaluation ledger. Single event loop only.
class VdfOracle {
 public:
  VdfReceipt eval_request(const VdfParams& params, uint64_t input_digest, double speed,
                          SimTime now) {
    return eval(params.difficulty, input_digest, speed, now);
  }

  // Raw entry point; difficulty 0 is allowed here so ablation experiments can
  // run with the delay gate removed.
  VdfReceipt eval(double difficulty, uint64_t input_digest, double speed, SimTime now);

  bool verify_receipt(const VdfParams& params, uint64_t input_digest, const VdfReceipt& receipt,
                      SimTime now) const {
    return verify(params.difficulty, input_digest, receipt, now);
  }
  bool verify(double difficulty, uint64_t input_digest, const VdfReceipt& receipt,
              SimTime now) const;

  // Earliest legitimate completion time of any issued evaluation of this
  // input, or +inf if never requested. Used by the sequentiality audit.
  SimTime min_ready_of(uint64_t input_digest, double difficulty) const;

  uint64_t evals_issued() const { return evals_issued_; }

  static uint64_t output_for(uint64_t input_digest, double difficulty);

 private:
  std::unordered_map<uint64_t, SimTime> min_ready_;
  uint64_t evals_issued_ = 0;
};

}  // namespace vdfbft::vdf
