#include "vdfbft/common.hpp"

namespace vdfbft {

namespace {
inline uint64_t rotl(uint64_t x, int b) { return (x << b) | (x >> (64 - b)); }

inline void sipround(uint64_t& v0, uint64_t& v1, uint64_t& v2, uint64_t& v3) {
  v0 += v1;
  v1 = rotl(v1, 13);
  v1 ^= v0;
  v0 = rotl(v0, 32);
  v2 += v3;
  v3 = rotl(v3, 16);
  v3 ^= v2;
  v0 += v3;
  v3 = rotl(v3, 21);
  v3 ^= v0;
  v2 += v1;
  v1 = rotl(v1, 17);
  v1 ^= v2;
  v2 = rotl(v2, 32);
}
}  // namespace

uint64_t siphash24(uint64_t k0, uint64_t k1, const uint8_t* data, size_t len) {
  uint64_t v0 = k0 ^ 0x736f6d6570736575ull;
  uint64_t v1 = k1 ^ 0x646f72616e646f6dull;
  uint64_t v2 = k0 ^ 0x6c7967656e657261ull;
  uint64_t v3 = k1 ^ 0x7465646279746573ull;

  const size_t tail = len & 7;
  const uint8_t* end = data + (len - tail);
  for (const uint8_t* p = data; p != end; p += 8) {
    uint64_t m = 0;
    std::memcpy(&m, p, 8);
    v3 ^= m;
    sipround(v0, v1, v2, v3);
    sipround(v0, v1, v2, v3);
    v0 ^= m;
  }

  uint64_t last = static_cast<uint64_t>(len) << 56;
  for (size_t i = 0; i < tail; ++i) last |= static_cast<uint64_t>(end[i]) << (8 * i);
  v3 ^= last;
  sipround(v0, v1, v2, v3);
  sipround(v0, v1, v2, v3);
  v0 ^= last;

  v2 ^= 0xff;
  sipround(v0, v1, v2, v3);
  sipround(v0, v1, v2, v3);
  sipround(v0, v1, v2, v3);
  sipround(v0, v1, v2, v3);
  return v0 ^ v1 ^ v2 ^ v3;
}

uint64_t hash_words(uint64_t k0, uint64_t k1, std::initializer_list<uint64_t> words) {
  uint8_t buf[8 * 16];
  size_t n = 0;
  for (uint64_t w : words) {
    if (n + 8 > sizeof(buf)) break;
    std::memcpy(buf + n, &w, 8);
    n += 8;
  }
  return siphash24(k0, k1, buf, n);
}

}  // namespace vdfbft
