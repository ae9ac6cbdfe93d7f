#pragma once

#include <cstdint>
#include <cstring>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace vdfbft {

using ReplicaId = uint32_t;
using SimTime = double;
using Digest = uint64_t;

constexpr SimTime kNever = std::numeric_limits<SimTime>::infinity();

// Thrown when an experiment or module is configured outside its contract.
// The CLI maps this to exit code 2.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Thrown when an actor requests something the simulation model forbids,
// e.g. an adversary reschedule outside the network mode's legal envelope.
// Fails the trial loudly instead of silently clamping.
struct ContractViolation : std::logic_error {
  explicit ContractViolation(const std::string& what) : std::logic_error(what) {}
};

// Difficulty schedule requested outside the feasible region.
struct InfeasibleScheduleError : std::runtime_error {
  explicit InfeasibleScheduleError(const std::string& what) : std::runtime_error(what) {}
};

// SipHash-2-4 over an arbitrary byte string. Used as the keyed PRF behind
// sortition, simulated signatures, VDF outputs and all counter-based
// randomness, so every draw in a trial is a pure function of the trial seed.
uint64_t siphash24(uint64_t k0, uint64_t k1, const uint8_t* data, size_t len);

inline uint64_t siphash24(uint64_t k0, uint64_t k1, std::string_view s) {
  return siphash24(k0, k1, reinterpret_cast<const uint8_t*>(s.data()), s.size());
}

// Convenience: hash a small tuple of 64-bit words under a key.
uint64_t hash_words(uint64_t k0, uint64_t k1, std::initializer_list<uint64_t> words);

// Map a 64-bit hash to [0,1) using the top 53 bits.
inline double u01_from_bits(uint64_t x) {
  return static_cast<double>(x >> 11) * 0x1.0p-53;
}

inline uint64_t double_bits(double d) {
  uint64_t b;
  std::memcpy(&b, &d, sizeof(b));
  return b;
}

// Running 64-bit mix for trace hashing; order sensitive.
inline uint64_t mix_into(uint64_t acc, uint64_t v) {
  acc ^= v + 0x9e3779b97f4a7c15ull + (acc << 6) + (acc >> 2);
  acc *= 0xff51afd7ed558ccdull;
  return acc ^ (acc >> 33);
}

// Byte-buffer writer for contexts and wire records. All integers are
// little-endian fixed width.
class ByteWriter {
 public:
  void u8(uint8_t v) { buf_.push_back(v); }
  void u32(uint32_t v) {
    for (int i = 0; i < 4; ++i) buf_.push_back(static_cast<uint8_t>(v >> (8 * i)));
  }
  void u64(uint64_t v) {
    for (int i = 0; i < 8; ++i) buf_.push_back(static_cast<uint8_t>(v >> (8 * i)));
  }
  void f64(double v) { u64(double_bits(v)); }
  void bytes(const uint8_t* p, size_t n) { buf_.insert(buf_.end(), p, p + n); }
  void str(std::string_view s) {
    u32(static_cast<uint32_t>(s.size()));
    bytes(reinterpret_cast<const uint8_t*>(s.data()), s.size());
  }
  const std::vector<uint8_t>& data() const { return buf_; }
  std::vector<uint8_t> take() { return std::move(buf_); }

 private:
  std::vector<uint8_t> buf_;
};

class ByteReader {
 public:
  ByteReader(const uint8_t* p, size_t n) : p_(p), end_(p + n) {}
  explicit ByteReader(const std::vector<uint8_t>& v) : ByteReader(v.data(), v.size()) {}

  uint8_t u8() { return *need(1); }
  uint32_t u32() {
    const uint8_t* p = need(4);
    uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(p[i]) << (8 * i);
    return v;
  }
  uint64_t u64() {
    const uint8_t* p = need(8);
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(p[i]) << (8 * i);
    return v;
  }
  double f64() {
    uint64_t b = u64();
    double d;
    std::memcpy(&d, &b, sizeof(d));
    return d;
  }
  bool ok() const { return ok_; }
  size_t remaining() const { return static_cast<size_t>(end_ - p_); }

 private:
  const uint8_t* need(size_t n) {
    static const uint8_t zeros[8] = {0};
    if (static_cast<size_t>(end_ - p_) < n) {
      ok_ = false;
      return zeros;
    }
    const uint8_t* r = p_;
    p_ += n;
    return r;
  }
  const uint8_t* p_;
  const uint8_t* end_;
  bool ok_ = true;
};

}  // namespace vdfbft
