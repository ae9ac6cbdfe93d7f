#pragma once

#include <cstdint>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "vdfbft/common.hpp"

// Simulated cryptographic sortition oracle. Election values come from a
// keyed PRF of (sk, context); the proof is the raw digest and verification
// recomputes it from a registry keyed by pk. Unforgeability holds because
// adversary code only ever receives the secret seeds of replicas it has
// corrupted.
namespace vdfbft::sortition {

struct KeyPair {
  ReplicaId replica_id = 0;
  uint64_t pk = 0;
  uint64_t sk = 0;
};

struct SortitionOutput {
  double value = 0.0;   // uniform in [0,1)
  uint64_t proof = 0;   // PRF digest; doubles as a transferable signature
};

// Context = length-prefixed (protocol tag, epoch/round, phase label,
// optional payload digest). Length prefixes keep distinct tuples from
// colliding under concatenation.
class Context {
 public:
  Context(std::string_view protocol_tag, uint64_t number, std::string_view phase) {
    w_.str(protocol_tag);
    ByteWriter num;
    num.u64(number);
    w_.u32(8);
    w_.bytes(num.data().data(), 8);
    w_.str(phase);
  }
  Context& payload(uint64_t digest) {
    ByteWriter d;
    d.u64(digest);
    w_.u32(8);
    w_.bytes(d.data().data(), 8);
    return *this;
  }
  const std::vector<uint8_t>& bytes() const { return w_.data(); }

 private:
  ByteWriter w_;
};

KeyPair derive_keypair(uint64_t trial_seed, ReplicaId replica_id);

// Deterministic PKI setup for one trial. n == 0 is a configuration error.
std::vector<KeyPair> gen_keys(uint64_t trial_seed, uint32_t n);

SortitionOutput mine(uint64_t sk, const std::vector<uint8_t>& context);
SortitionOutput mine(uint64_t sk, const Context& context);

inline bool is_elected(const SortitionOutput& out, double threshold) {
  return out.value <= threshold;
}

// Verification table: pk -> sk, owned per trial. Replicas and auditors hold
// a const reference; only the adversary controller hands out secrets, and
// only for corrupted replicas.
class Registry {
 public:
  explicit Registry(const std::vector<KeyPair>& keys);

  bool verify(uint64_t pk, const std::vector<uint8_t>& context, const SortitionOutput& out) const;
  bool verify(uint64_t pk, const Context& context, const SortitionOutput& out) const;

  uint64_t pk_of(ReplicaId id) const { return keys_[id].pk; }
  uint32_t size() const { return static_cast<uint32_t>(keys_.size()); }
  // Secret access is restricted to the adversary controller (key capture)
  // and the trial bootstrap that wires replicas to their own keys.
  const KeyPair& keypair(ReplicaId id) const { return keys_[id]; }

 private:
  std::vector<KeyPair> keys_;
  std::unordered_map<uint64_t, uint64_t> sk_by_pk_;
};

}  // namespace vdfbft::sortition
