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

#include "minet/ledger.hpp"

#include "minet/error.hpp"
#include "minet/tlv.hpp"

namespace minet {
namespace {

enum : std::uint8_t {
  kTx = 0x50,
  kTxKind = 0x51,
  kTxPrefix = 0x52,
  kTxPublicKey = 0x53,
  kTxRealId = 0x54,
  kTxRecord = 0x55,
  kTxApproval = 0x56,
  kTxSubmitter = 0x57,
  kTxSignature = 0x58,
  kMember = 0x59,
  kSig = 0x5a,

  kBlock = 0x60,
  kHeight = 0x61,
  kPrev = 0x62,
  kProducer = 0x63,
  kTerm = 0x64,
  kTxList = 0x65,
  kVote = 0x66,
  kRejection = 0x67,
};

TlvWriter tx_body(const Transaction& tx) {
  TlvWriter w;
  w.put_u64(kTxKind, static_cast<std::uint64_t>(tx.kind));
  switch (tx.kind) {
    case TxKind::RegisterUser:
      w.put(kTxPrefix, tx.prefix.to_string()).put(kTxPublicKey, tx.public_key).put(kTxRealId, tx.real_id);
      break;
    case TxKind::PublishResource:
      w.put(kTxRecord, encode_record(tx.record));
      break;
    case TxKind::Amend:
      w.put(kTxRecord, encode_record(tx.record));
      for (const auto& a : tx.approvals) {
        TlvWriter inner;
        inner.put_u64(kMember, a.member).put(kSig, a.signature);
        w.put_nested(kTxApproval, inner);
      }
      break;
  }
  w.put(kTxSubmitter, tx.submitter_key);
  return w;
}

TlvWriter block_header(const Block& b) {
  TlvWriter w;
  w.put_u64(kHeight, b.height).put_digest(kPrev, b.prev_hash).put_u64(kProducer, b.producer).put_u64(kTerm, b.term);
  TlvWriter txs;
  for (const auto& tx : b.txs) txs.put(kTx, encode(tx));
  w.put_nested(kTxList, txs);
  return w;
}

}  // namespace

std::string_view to_string(TxKind kind) noexcept {
  switch (kind) {
    case TxKind::RegisterUser: return "register";
    case TxKind::PublishResource: return "publish";
    case TxKind::Amend: return "amend";
  }
  return "?";
}

void sign_transaction(Transaction& tx, const KeyPair& submitter) {
  tx.submitter_key = submitter.public_key;
  tx.signature = default_scheme().sign(tx_body(tx).bytes(), submitter.secret_key);
}

bool verify_transaction_signature(const Transaction& tx) {
  return default_scheme().verify(tx_body(tx).bytes(), tx.signature, tx.submitter_key);
}

Transaction make_register(const Identifier& prefix, const KeyPair& user, ByteView real_id) {
  Transaction tx;
  tx.kind = TxKind::RegisterUser;
  tx.prefix = prefix;
  tx.public_key = user.public_key;
  tx.real_id.assign(real_id.begin(), real_id.end());
  sign_transaction(tx, user);
  return tx;
}

Transaction make_publish(const ResourceRecord& record, const KeyPair& publisher) {
  Transaction tx;
  tx.kind = TxKind::PublishResource;
  tx.record = record;
  sign_transaction(tx, publisher);
  return tx;
}

Transaction make_amend(const ResourceRecord& replacement, const KeyPair& submitter) {
  Transaction tx;
  tx.kind = TxKind::Amend;
  tx.record = replacement;
  sign_transaction(tx, submitter);
  return tx;
}

Digest amend_digest(const ResourceRecord& replacement) {
  Bytes b = encode_record(replacement);
  b.insert(b.begin(), {'a', 'm', 'e', 'n', 'd'});
  return sha256(b);
}

Approval approve_amend(const ResourceRecord& replacement, MemberId member, const KeyPair& key) {
  return Approval{member, default_scheme().sign(amend_digest(replacement).view(), key.secret_key)};
}

Bytes encode(const Transaction& tx) {
  TlvWriter w = tx_body(tx);
  w.put(kTxSignature, tx.signature);
  return std::move(w).take();
}

Transaction decode_transaction(ByteView data) {
  TlvReader r(data);
  Transaction tx;
  std::uint64_t kind = r.expect(kTxKind).as_u64();
  if (kind < 1 || kind > 3) fail(ErrorCode::BadEncoding, "unknown transaction kind " + std::to_string(kind));
  tx.kind = static_cast<TxKind>(kind);
  switch (tx.kind) {
    case TxKind::RegisterUser:
      tx.prefix = parse_identifier(r.expect(kTxPrefix).as_string());
      tx.public_key = r.expect(kTxPublicKey).as_bytes();
      tx.real_id = r.expect(kTxRealId).as_bytes();
      break;
    case TxKind::PublishResource:
      tx.record = decode_record(r.expect(kTxRecord).value);
      break;
    case TxKind::Amend:
      tx.record = decode_record(r.expect(kTxRecord).value);
      while (!r.done() && r.peek_type() == kTxApproval) {
        TlvReader a(r.next().value);
        Approval ap;
        ap.member = static_cast<MemberId>(a.expect(kMember).as_u64());
        ap.signature = a.expect(kSig).as_bytes();
        tx.approvals.push_back(std::move(ap));
      }
      break;
  }
  tx.submitter_key = r.expect(kTxSubmitter).as_bytes();
  tx.signature = r.expect(kTxSignature).as_bytes();
  if (!r.done()) fail(ErrorCode::BadEncoding, "trailing bytes after transaction");
  return tx;
}

Digest tx_id(const Transaction& tx) { return sha256(encode(tx)); }

Digest block_hash(const Block& b) { return sha256(block_header(b).bytes()); }

Bytes encode(const Block& b) {
  TlvWriter w = block_header(b);
  for (const auto& v : b.votes) {
    TlvWriter inner;
    inner.put_u64(kMember, v.member).put(kSig, v.signature);
    w.put_nested(kVote, inner);
  }
  for (MemberId m : b.rejections) w.put_u64(kRejection, m);
  TlvWriter outer;
  outer.put_nested(kBlock, w);
  return std::move(outer).take();
}

Block decode_block(ByteView data) {
  TlvReader outer(data);
  TlvField body = outer.expect(kBlock);
  if (!outer.done()) fail(ErrorCode::BadEncoding, "trailing bytes after block");
  TlvReader r(body.value);
  Block b;
  b.height = r.expect(kHeight).as_u64();
  b.prev_hash = r.expect(kPrev).as_digest();
  b.producer = static_cast<MemberId>(r.expect(kProducer).as_u64());
  b.term = r.expect(kTerm).as_u64();
  TlvReader txs(r.expect(kTxList).value);
  while (!txs.done()) b.txs.push_back(decode_transaction(txs.expect(kTx).value));
  while (!r.done() && r.peek_type() == kVote) {
    TlvReader v(r.next().value);
    Vote vote;
    vote.member = static_cast<MemberId>(v.expect(kMember).as_u64());
    vote.signature = v.expect(kSig).as_bytes();
    b.votes.push_back(std::move(vote));
  }
  while (!r.done()) b.rejections.push_back(static_cast<MemberId>(r.expect(kRejection).as_u64()));
  return b;
}

KeyPair member_key(MemberId id) { return keypair_from_label("member-" + std::to_string(id)); }

}  // namespace minet
