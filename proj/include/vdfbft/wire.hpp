#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "vdfbft/common.hpp"
#include "vdfbft/sortition.hpp"
#include "vdfbft/vdf.hpp"

// Wire format for all protocol messages. Records are tagged and
// length-prefixed; traces of the same seeded run are byte-identical.
//
// Encoding rules: all integers little-endian fixed width; f64 = IEEE-754
// bits as u64. An envelope payload is [u32 record_length][record].
//
//   record          := tag:u8 body
//   sortition_att   := pk:u64 value:f64 proof:u64                  (24 bytes)
//   vdf_att         := input:u64 output:u64 proof:u64 ready_at:f64
//                      speed:f64                                   (40 bytes)
//   cert_vote       := voter:u32 pk:u64 value:f64 proof:u64        (28 bytes)
//   certificate     := round:u64 kind:u8 count:u32 cert_vote*count
//
//   PROPOSAL  (1)   := epoch:u64 proposer:u32 content:u64 sortition_att vdf_att
//   VOTE      (2)   := epoch:u64 voter:u32 target:u64 sortition_att vdf_att
//   PRECOMMIT (3)   := same body as VOTE
//   COMMIT    (4)   := same body as VOTE
//   ROUND_PROPOSE(5):= round:u64 sender:u32 sortition_att has_cert:u8
//                      [certificate]
//   ROUND_VOTE(6)   := kind:u8 round:u64 voter:u32 sortition_att
//                      kind: 0 initial, 1 tentative, 2 preconfirmed,
//                      3 confirmed (the linear protocol uses all four wave
//                      kinds; the sublinear protocol uses 1..3)
//   BBA_PROPOSE(7)  := round:u64 sender:u32 bit:u8 sortition_att
//   BBA_ACK   (8)   := round:u64 sender:u32 bit:u8 sortition_att
//   STRAW_BIT (9)   := sender:u32 bit:u8 sortition_att
//
// Sortition attachments double as transferable signatures: the context they
// are verified against is derived from the record's own fields.
namespace vdfbft::wire {

enum class Tag : uint8_t {
  kProposal = 1,
  kVote = 2,
  kPrecommit = 3,
  kCommit = 4,
  kRoundPropose = 5,
  kRoundVote = 6,
  kBbaPropose = 7,
  kBbaAck = 8,
  kStrawmanBit = 9,
};

enum class Phase : uint8_t { kVote = 0, kPrecommit = 1, kCommit = 2 };

inline const char* phase_label(Phase p) {
  switch (p) {
    case Phase::kVote: return "vote";
    case Phase::kPrecommit: return "precommit";
    case Phase::kCommit: return "commit";
  }
  return "?";
}

inline Tag phase_tag(Phase p) {
  switch (p) {
    case Phase::kVote: return Tag::kVote;
    case Phase::kPrecommit: return Tag::kPrecommit;
    case Phase::kCommit: return Tag::kCommit;
  }
  return Tag::kVote;
}

enum class RoundVoteKind : uint8_t {
  kInitial = 0,
  kTentative = 1,
  kPreconfirmed = 2,
  kConfirmed = 3,
};

inline const char* round_vote_label(RoundVoteKind k) {
  switch (k) {
    case RoundVoteKind::kInitial: return "initial";
    case RoundVoteKind::kTentative: return "tentative";
    case RoundVoteKind::kPreconfirmed: return "preconfirmed";
    case RoundVoteKind::kConfirmed: return "confirmed";
  }
  return "?";
}

struct SortitionAtt {
  uint64_t pk = 0;
  sortition::SortitionOutput out;
};

struct CertVote {
  ReplicaId voter = 0;
  SortitionAtt att;
};

struct Certificate {
  uint64_t round = 0;
  RoundVoteKind kind = RoundVoteKind::kPreconfirmed;
  std::vector<CertVote> votes;
};

struct Message {
  Tag tag = Tag::kProposal;

  // consensus fields
  uint64_t epoch = 0;
  ReplicaId sender = 0;
  uint64_t content = 0;  // proposal content digest or vote target digest
  SortitionAtt sort;
  vdf::VdfReceipt receipt;

  // clock-sync fields
  uint64_t round = 0;
  RoundVoteKind kind = RoundVoteKind::kInitial;
  std::optional<Certificate> cert;

  // bba / strawman fields
  uint8_t bit = 0;
};

std::vector<uint8_t> encode(const Message& m);
std::optional<Message> decode(const std::vector<uint8_t>& payload);

}  // namespace vdfbft::wire
