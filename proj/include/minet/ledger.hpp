// Copyright 2026 The minet Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "minet/crypto.hpp"
#include "minet/identifier.hpp"
#include "minet/record.hpp"

namespace minet {

using MemberId = std::uint32_t;

/// Public keys of the voting committee.
using Committee = std::map<MemberId, Bytes>;

/// True iff `votes` is more than half of a committee of `committee_size`.
constexpr bool is_majority(std::size_t votes, std::size_t committee_size) noexcept {
  return 2 * votes > committee_size;
}

enum class TxKind : std::uint8_t { RegisterUser = 1, PublishResource = 2, Amend = 3 };
std::string_view to_string(TxKind kind) noexcept;

/// Committee member's signature on an amendment.
struct Approval {
  MemberId member = 0;
  Bytes signature;
  friend bool operator==(const Approval&, const Approval&) = default;
};

/// Ledger transaction. Fields are used by kind:
///   RegisterUser     prefix, public_key, real_id
///   PublishResource  record
///   Amend            record (replacement for the publication of the same
///                    name) and approvals from more than half the committee
/// Every transaction is signed by `submitter_key`.
struct Transaction {
  TxKind kind = TxKind::RegisterUser;
  Identifier prefix;
  Bytes public_key;
  Bytes real_id;
  ResourceRecord record;
  std::vector<Approval> approvals;
  Bytes submitter_key;
  Bytes signature;

  friend bool operator==(const Transaction&, const Transaction&) = default;
};

Transaction make_register(const Identifier& prefix, const KeyPair& user, ByteView real_id);
Transaction make_publish(const ResourceRecord& record, const KeyPair& publisher);
/// Unsigned by the committee; add approvals with approve_amend.
Transaction make_amend(const ResourceRecord& replacement, const KeyPair& submitter);
/// Bytes committee members sign to approve an amendment.
Digest amend_digest(const ResourceRecord& replacement);
Approval approve_amend(const ResourceRecord& replacement, MemberId member, const KeyPair& key);
/// Re-signs `tx` after its fields changed.
void sign_transaction(Transaction& tx, const KeyPair& submitter);
bool verify_transaction_signature(const Transaction& tx);

Bytes encode(const Transaction& tx);
Transaction decode_transaction(ByteView data);
Digest tx_id(const Transaction& tx);

struct Vote {
  MemberId member = 0;
  Bytes signature;  // over the block hash
  friend bool operator==(const Vote&, const Vote&) = default;
};

struct Block {
  std::uint64_t height = 0;
  Digest prev_hash;
  MemberId producer = 0;
  std::uint64_t term = 0;
  std::vector<Transaction> txs;
  std::vector<Vote> votes;
  /// Committee members that answered the proposal with a rejection.
  std::vector<MemberId> rejections;

  friend bool operator==(const Block&, const Block&) = default;
};

/// Hash of the block header and transactions (votes excluded).
Digest block_hash(const Block& b);
Bytes encode(const Block& b);
Block decode_block(ByteView data);

/// Deterministic key of a simulated or CLI-managed participant.
KeyPair member_key(MemberId id);

}  // namespace minet
