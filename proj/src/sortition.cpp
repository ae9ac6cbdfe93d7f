#include "vdfbft/sortition.hpp"

namespace vdfbft::sortition {

namespace {
constexpr uint64_t kSkDomain = 0x736b2d6465726976ull;  // "sk-deriv"
constexpr uint64_t kPkDomain = 0x706b2d6465726976ull;  // "pk-deriv"
constexpr uint64_t kMineK1 = 0x6d696e652d6f7263ull;    // "mine-orc"
}  // namespace

KeyPair derive_keypair(uint64_t trial_seed, ReplicaId replica_id) {
  KeyPair kp;
  kp.replica_id = replica_id;
  kp.sk = hash_words(trial_seed, kSkDomain, {replica_id});
  kp.pk = hash_words(kp.sk, kPkDomain, {replica_id});
  return kp;
}

std::vector<KeyPair> gen_keys(uint64_t trial_seed, uint32_t n) {
  if (n == 0) throw ConfigError("gen_keys: n must be >= 1");
  std::vector<KeyPair> keys;
  keys.reserve(n);
  for (uint32_t i = 0; i < n; ++i) keys.push_back(derive_keypair(trial_seed, i));
  return keys;
}

SortitionOutput mine(uint64_t sk, const std::vector<uint8_t>& context) {
  SortitionOutput out;
  out.proof = siphash24(sk, kMineK1, context.data(), context.size());
  out.value = u01_from_bits(out.proof);
  return out;
}

SortitionOutput mine(uint64_t sk, const Context& context) { return mine(sk, context.bytes()); }

Registry::Registry(const std::vector<KeyPair>& keys) : keys_(keys) {
  sk_by_pk_.reserve(keys.size());
  for (const auto& kp : keys_) sk_by_pk_.emplace(kp.pk, kp.sk);
}

bool Registry::verify(uint64_t pk, const std::vector<uint8_t>& context,
                      const SortitionOutput& out) const {
  auto it = sk_by_pk_.find(pk);
  if (it == sk_by_pk_.end()) return false;
  SortitionOutput expect = mine(it->second, context);
  return expect.proof == out.proof && expect.value == out.value;
}

bool Registry::verify(uint64_t pk, const Context& context, const SortitionOutput& out) const {
  return verify(pk, context.bytes(), out);
}

}  // namespace vdfbft::sortition
