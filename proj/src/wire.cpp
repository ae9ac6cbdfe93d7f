#include "vdfbft/wire.hpp"

namespace vdfbft::wire {

namespace {

void put_sort(ByteWriter& w, const SortitionAtt& a) {
  w.u64(a.pk);
  w.f64(a.out.value);
  w.u64(a.out.proof);
}

SortitionAtt get_sort(ByteReader& r) {
  SortitionAtt a;
  a.pk = r.u64();
  a.out.value = r.f64();
  a.out.proof = r.u64();
  return a;
}

void put_vdf(ByteWriter& w, const vdf::VdfReceipt& v) {
  w.u64(v.input_digest);
  w.u64(v.output);
  w.u64(v.proof);
  w.f64(v.ready_at);
  w.f64(v.solver_speed);
}

vdf::VdfReceipt get_vdf(ByteReader& r) {
  vdf::VdfReceipt v;
  v.input_digest = r.u64();
  v.output = r.u64();
  v.proof = r.u64();
  v.ready_at = r.f64();
  v.solver_speed = r.f64();
  return v;
}

void put_cert(ByteWriter& w, const Certificate& c) {
  w.u64(c.round);
  w.u8(static_cast<uint8_t>(c.kind));
  w.u32(static_cast<uint32_t>(c.votes.size()));
  for (const auto& v : c.votes) {
    w.u32(v.voter);
    put_sort(w, v.att);
  }
}

Certificate get_cert(ByteReader& r) {
  Certificate c;
  c.round = r.u64();
  c.kind = static_cast<RoundVoteKind>(r.u8());
  uint32_t n = r.u32();
  if (n > (1u << 20)) n = 0;  // malformed; reader flips to !ok on starvation anyway
  c.votes.reserve(n);
  for (uint32_t i = 0; i < n && r.ok(); ++i) {
    CertVote v;
    v.voter = r.u32();
    v.att = get_sort(r);
    c.votes.push_back(v);
  }
  return c;
}

}  // namespace

std::vector<uint8_t> encode(const Message& m) {
  ByteWriter body;
  body.u8(static_cast<uint8_t>(m.tag));
  switch (m.tag) {
    case Tag::kProposal:
    case Tag::kVote:
    case Tag::kPrecommit:
    case Tag::kCommit:
      body.u64(m.epoch);
      body.u32(m.sender);
      body.u64(m.content);
      put_sort(body, m.sort);
      put_vdf(body, m.receipt);
      break;
    case Tag::kRoundPropose:
      body.u64(m.round);
      body.u32(m.sender);
      put_sort(body, m.sort);
      body.u8(m.cert.has_value() ? 1 : 0);
      if (m.cert) put_cert(body, *m.cert);
      break;
    case Tag::kRoundVote:
      body.u8(static_cast<uint8_t>(m.kind));
      body.u64(m.round);
      body.u32(m.sender);
      put_sort(body, m.sort);
      break;
    case Tag::kBbaPropose:
    case Tag::kBbaAck:
      body.u64(m.round);
      body.u32(m.sender);
      body.u8(m.bit);
      put_sort(body, m.sort);
      break;
    case Tag::kStrawmanBit:
      body.u32(m.sender);
      body.u8(m.bit);
      put_sort(body, m.sort);
      break;
  }
  ByteWriter framed;
  framed.u32(static_cast<uint32_t>(body.data().size()));
  framed.bytes(body.data().data(), body.data().size());
  return framed.take();
}

std::optional<Message> decode(const std::vector<uint8_t>& payload) {
  ByteReader r(payload);
  const uint32_t len = r.u32();
  if (!r.ok() || r.remaining() != len) return std::nullopt;
  Message m;
  const uint8_t raw_tag = r.u8();
  if (raw_tag < 1 || raw_tag > 9) return std::nullopt;
  m.tag = static_cast<Tag>(raw_tag);
  switch (m.tag) {
    case Tag::kProposal:
    case Tag::kVote:
    case Tag::kPrecommit:
    case Tag::kCommit:
      m.epoch = r.u64();
      m.sender = r.u32();
      m.content = r.u64();
      m.sort = get_sort(r);
      m.receipt = get_vdf(r);
      break;
    case Tag::kRoundPropose:
      m.round = r.u64();
      m.sender = r.u32();
      m.sort = get_sort(r);
      if (r.u8()) m.cert = get_cert(r);
      break;
    case Tag::kRoundVote:
      m.kind = static_cast<RoundVoteKind>(r.u8());
      m.round = r.u64();
      m.sender = r.u32();
      m.sort = get_sort(r);
      break;
    case Tag::kBbaPropose:
    case Tag::kBbaAck:
      m.round = r.u64();
      m.sender = r.u32();
      m.bit = r.u8();
      m.sort = get_sort(r);
      break;
    case Tag::kStrawmanBit:
      m.sender = r.u32();
      m.bit = r.u8();
      m.sort = get_sort(r);
      break;
  }
  if (!r.ok() || r.remaining() != 0) return std::nullopt;
  return m;
}

}  // namespace vdfbft::wire
