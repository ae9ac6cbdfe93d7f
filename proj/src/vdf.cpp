#include "vdfbft/vdf.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <sstream>

namespace vdfbft::vdf {

namespace mp = boost::multiprecision;
using Rational = mp::cpp_rational;

namespace {

constexpr uint64_t kVdfOutK = 0x7664662d6f757470ull;  // "vdf-outp"
constexpr uint64_t kVdfPrfK = 0x7664662d70726f66ull;  // "vdf-prof"

Rational rat_of(double d) {
  // Doubles are dyadic rationals; this conversion is exact.
  return Rational(d);
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

// Smallest non-negative integer k with 2^k >= r; upper bound on log2(r).
uint64_t ceil_log2_upper(const Rational& r) {
  if (r <= 1) return 0;
  mp::cpp_int pow = 1;
  uint64_t k = 0;
  while (Rational(pow) < r) {
    pow <<= 1;
    ++k;
  }
  return k;
}

Rational ceil_div(const Rational& a, const Rational& b) {
  Rational q = a / b;
  mp::cpp_int n = mp::numerator(q), d = mp::denominator(q);
  mp::cpp_int fl = n / d;
  if (fl * d != n && n > 0) fl += 1;
  return Rational(fl);
}

struct RationalSolution {
  Rational d[4];
  Rational x;
};

void check_exact(const RationalSolution& s, const Rational& dh, const Rational& da,
                 const Rational& dhs, const Rational& dnet, const Rational& slack) {
  Rational running = 0;
  for (int i = 0; i < 4; ++i) {
    running += s.d[i];
    if (!(dh * running + da * s.d[i] > s.x))
      throw std::logic_error("schedule solver: constraint " + std::to_string(i + 1) + " violated");
  }
  Rational budget = 0;
  if (slack > 0) {
    budget = dhs * (1 + slack) * running + 4 * dnet;
  } else {
    Rational logs = 0;
    for (int i = 0; i < 4; ++i) logs += Rational(ceil_log2_upper(s.d[i]));
    budget = dhs * (running + logs) + 4 * dnet;
  }
  if (!(s.x >= budget)) throw std::logic_error("schedule solver: epoch-length budget violated");
  for (int i = 0; i + 1 < 4; ++i)
    if (!(s.d[i] > s.d[i + 1])) throw std::logic_error("schedule solver: ordering violated");
  if (!(s.x > dnet)) throw std::logic_error("schedule solver: X <= delta_net");
}

}  // namespace

DifficultySchedule DifficultySchedule::zeroed(double epoch_length, double delta_net) {
  DifficultySchedule s;
  s.epoch_length_X = epoch_length;
  s.rounds_R = static_cast<uint64_t>(std::ceil(epoch_length / delta_net));
  return s;
}

VdfParams setup(double difficulty) {
  if (!(difficulty > 0.0)) throw ConfigError("vdf::setup: difficulty must be positive");
  return VdfParams{difficulty};
}

double feasibility_bound(double delta_h, double delta_adv) {
  if (!(delta_h > 0.0) || !(delta_adv > 0.0))
    throw ConfigError("feasibility_bound: speeds must be positive");
  const double s = delta_h + delta_adv;
  const double num = s * s * s * s;
  const double den = delta_h * delta_h * delta_h + 4.0 * delta_h * delta_h * delta_adv +
                     6.0 * delta_h * delta_adv * delta_adv +
                     4.0 * delta_adv * delta_adv * delta_adv;
  return num / den;
}

DifficultySchedule solve_schedule(const SpeedProfile& profile, double delta_net,
                                  double verif_slack) {
  if (!(profile.delta_h_fast > 0.0) || !(profile.delta_h_slow > 0.0) ||
      !(profile.delta_adv > 0.0))
    throw ConfigError("solve_schedule: all speeds must be positive");
  if (profile.delta_h_fast > profile.delta_h_slow)
    throw ConfigError("solve_schedule: delta_h_fast must be <= delta_h_slow");
  if (!(delta_net > 0.0)) throw ConfigError("solve_schedule: delta_net must be positive");
  if (verif_slack < 0.0) throw ConfigError("solve_schedule: verif_slack must be >= 0");

  const Rational dh = rat_of(profile.delta_h_fast);
  const Rational da = rat_of(profile.delta_adv);
  const Rational dhs = rat_of(profile.delta_h_slow);
  const Rational dnet = rat_of(delta_net);
  const Rational slack = rat_of(verif_slack);

  // Feasibility boundary, exact form of the closed-form bound.
  const Rational s4 = mp::pow(dh + da, 4);
  const Rational den = mp::pow(dh, 3) + 4 * mp::pow(dh, 2) * da + 6 * dh * mp::pow(da, 2) +
                       4 * mp::pow(da, 3);
  const Rational bound = s4 / den;
  if (!(dhs * (1 + slack) < bound)) {
    std::ostringstream msg;
    msg << "solve_schedule: infeasible speed profile: delta_h_slow";
    if (verif_slack > 0) msg << " * (1+verif_slack)";
    msg << " = " << to_double(dhs * (1 + slack))
        << " is not below the closed-form bound (delta_h + delta_adv)^4 / (delta_h^3 + "
           "4 delta_h^2 delta_adv + 6 delta_h delta_adv^2 + 4 delta_adv^3) = "
        << to_double(bound);
    throw InfeasibleScheduleError(msg.str());
  }

  // Minimal per-difficulty coefficients c_i = a * r^(i-1): equality points of
  // the four timing constraints, a geometric sequence with ratio < 1.
  const Rational a = Rational(1) / (dh + da);
  const Rational r = da / (dh + da);
  Rational c[4];
  c[0] = a;
  for (int i = 1; i < 4; ++i) c[i] = c[i - 1] * r;
  const Rational csum = c[0] + c[1] + c[2] + c[3];

  // Headroom factor above the minimal coefficients. Near the feasibility
  // boundary the fixed 1% margin would overshoot, so split whatever slack
  // remains instead.
  const Rational q = dhs * (1 + slack) * csum;
  Rational g = Rational(101) / 100;
  if (g * q >= 1) g = (1 + Rational(1) / q) / 2;

  const Rational one_minus = 1 - g * q;

  RationalSolution sol;
  Rational x = (4 * dnet) / one_minus;
  for (int iter = 0; iter < 200; ++iter) {
    for (int i = 0; i < 4; ++i) sol.d[i] = g * c[i] * x;
    Rational extra = 0;
    if (slack == 0)
      for (int i = 0; i < 4; ++i) extra += Rational(ceil_log2_upper(sol.d[i]));
    const Rational need = (dhs * extra + 4 * dnet) / one_minus;
    if (x >= need) break;
    x = need;
  }
  sol.x = x;
  check_exact(sol, dh, da, dhs, dnet, slack);

  DifficultySchedule out;
  out.d_m = to_double(sol.d[0]);
  out.d_v = to_double(sol.d[1]);
  out.d_p = to_double(sol.d[2]);
  out.d_c = to_double(sol.d[3]);
  out.epoch_length_X = to_double(sol.x);

  // Re-check on the rounded values; nudge by ulps if rounding landed on the
  // wrong side of a strict inequality.
  for (int attempt = 0; attempt < 64; ++attempt) {
    RationalSolution chk;
    chk.d[0] = rat_of(out.d_m);
    chk.d[1] = rat_of(out.d_v);
    chk.d[2] = rat_of(out.d_p);
    chk.d[3] = rat_of(out.d_c);
    chk.x = rat_of(out.epoch_length_X);
    try {
      check_exact(chk, dh, da, dhs, dnet, slack);
      out.rounds_R = static_cast<uint64_t>(ceil_div(chk.x, dnet));
      return out;
    } catch (const std::logic_error&) {
      out.d_m = std::nextafter(out.d_m, HUGE_VAL);
      out.d_v = std::nextafter(out.d_v, HUGE_VAL);
      out.d_p = std::nextafter(out.d_p, HUGE_VAL);
      out.d_c = std::nextafter(out.d_c, HUGE_VAL);
      out.epoch_length_X = std::nextafter(out.epoch_length_X, HUGE_VAL);
    }
  }
  throw InfeasibleScheduleError(
      "solve_schedule: profile is numerically too close to the feasibility boundary");
}

double slow_replica_delay(double receipt_speed, const SpeedProfile& profile, double difficulty) {
  if (receipt_speed > profile.delta_h_slow + 1e-12)
    throw ContractViolation("slow_replica_delay: replica slower than delta_h_slow");
  double d = (profile.delta_h_slow - receipt_speed) * difficulty;
  return d > 0.0 ? d : 0.0;
}

uint64_t VdfOracle::output_for(uint64_t input_digest, double difficulty) {
  return hash_words(kVdfOutK, double_bits(difficulty), {input_digest});
}

VdfReceipt VdfOracle::eval(double difficulty, uint64_t input_digest, double speed, SimTime now) {
  if (!(speed > 0.0)) throw ConfigError("VdfOracle::eval: speed must be positive");
  if (difficulty < 0.0) throw ConfigError("VdfOracle::eval: negative difficulty");
  VdfReceipt r;
  r.input_digest = input_digest;
  r.output = output_for(input_digest, difficulty);
  r.proof = hash_words(kVdfPrfK, r.output, {input_digest});
  r.ready_at = now + speed * difficulty;
  r.solver_speed = speed;
  const uint64_t key = hash_words(input_digest, double_bits(difficulty), {0});
  auto it = min_ready_.find(key);
  if (it == min_ready_.end() || r.ready_at < it->second) min_ready_[key] = r.ready_at;
  ++evals_issued_;
  return r;
}

bool VdfOracle::verify(double difficulty, uint64_t input_digest, const VdfReceipt& receipt,
                       SimTime now) const {
  if (receipt.output != output_for(input_digest, difficulty)) return false;
  if (receipt.proof != hash_words(kVdfPrfK, receipt.output, {input_digest})) return false;
  // Sequentiality: nothing verifies before some legitimate evaluation of this
  // exact input has completed. The receipt's own ready_at field is untrusted.
  return min_ready_of(input_digest, difficulty) <= now + 1e-12;
}

SimTime VdfOracle::min_ready_of(uint64_t input_digest, double difficulty) const {
  const uint64_t key = hash_words(input_digest, double_bits(difficulty), {0});
  auto it = min_ready_.find(key);
  return it == min_ready_.end() ? kNever : it->second;
}

}  // namespace vdfbft::vdf
