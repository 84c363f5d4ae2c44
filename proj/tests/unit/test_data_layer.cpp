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

#include <atomic>
#include <filesystem>
#include <fstream>
#include <random>
#include <thread>

#include "doctest.h"
#include "minet/data_layer.hpp"
#include "minet/error.hpp"
#include "minet/pov.hpp"

using namespace minet;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("minet-test-" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

Block block_of(std::uint64_t height, std::vector<Transaction> txs) {
  Block b;
  b.height = height;
  b.txs = std::move(txs);
  return b;
}

/// Replays transactions with an independently written rule set:
/// a registration needs a fresh prefix not overlapping another owner's, a
/// publication needs the longest covering registration to be the
/// publisher's and the name to be new.
struct ReplayOracle {
  std::map<std::string, PublisherId> regs;
  std::map<std::string, Digest> pubs;
  std::size_t skipped = 0;

  static bool under(const std::string& p, const std::string& n) {
    return n == p || (n.size() > p.size() && n.compare(0, p.size(), p) == 0 && n[p.size()] == '/');
  }
  void feed(const Transaction& tx) {
    if (tx.kind == TxKind::RegisterUser) {
      std::string p = tx.prefix.to_string();
      PublisherId who = publisher_id(tx.public_key);
      bool clash = regs.count(p) != 0;
      for (const auto& [q, owner] : regs) {
        if (owner != who && (under(q, p) || under(p, q))) clash = true;
      }
      if (clash) {
        ++skipped;
      } else {
        regs[p] = who;
      }
    } else if (tx.kind == TxKind::PublishResource) {
      std::string n = tx.record.name.to_string();
      const std::string* best = nullptr;
      for (const auto& [q, owner] : regs) {
        if (under(q, n) && (!best || q.size() > best->size())) best = &q;
      }
      if (!best || regs[*best] != tx.record.publisher || pubs.count(n)) {
        ++skipped;
      } else {
        pubs[n] = tx.record.content_hash;
      }
    }
  }
};

}  // namespace

TEST_CASE("folding blocks builds the index") {
  Committee committee = Genesis::standard(3, 1, 0).committee;
  OnChainIndex idx;
  CHECK(idx.fold_block(block_of(1, {}), committee) == 0);
  CHECK(idx.dump().empty());

  KeyPair alice = keypair_from_label("alice");
  KeyPair bob = keypair_from_label("bob");
  ResourceRecord v1 = sign_record(parse_identifier("ccn:/pkusz/v1"), sha256("v1"), parse_identifier("ccn:/node/a"), alice);
  ResourceRecord stray = sign_record(parse_identifier("ccn:/nobody/x"), sha256("x"), parse_identifier("ccn:/node/a"), alice);
  ResourceRecord theft = sign_record(parse_identifier("ccn:/pkusz/v2"), sha256("v2"), parse_identifier("ccn:/node/b"), bob);
  Block b = block_of(2, {make_register(parse_identifier("ccn:/pkusz"), alice, as_bytes("alice")), make_publish(v1, alice),
                         make_publish(stray, alice), make_publish(theft, bob),
                         make_register(parse_identifier("ccn:/pkusz/sub"), bob, as_bytes("bob"))});
  CHECK(idx.fold_block(b, committee) == 2);
  REQUIRE(idx.registration(parse_identifier("ccn:/pkusz")));
  REQUIRE(idx.publication(parse_identifier("ccn:/pkusz/v1")));
  CHECK(idx.publication(parse_identifier("ccn:/pkusz/v1"))->height == 2);
  CHECK(idx.find_covering(parse_identifier("ccn:/pkusz/v1/seg=3")) == idx.publication(parse_identifier("ccn:/pkusz/v1")));
  CHECK(idx.owner_of(parse_identifier("ccn:/pkusz/zz"))->first == parse_identifier("ccn:/pkusz"));
  REQUIRE(idx.audit().size() == 3);
  CHECK(idx.audit()[0].tx_index == 2);
  CHECK(idx.audit()[0].reason.find("no registered prefix") != std::string::npos);
  CHECK(idx.audit()[1].reason.find("outside") != std::string::npos);
  CHECK(idx.audit()[2].reason.find("overlaps") != std::string::npos);
}

TEST_CASE("random transaction streams agree with the replay oracle") {
  Committee committee = Genesis::standard(3, 1, 0).committee;
  Rng rng(77);
  std::vector<KeyPair> users;
  for (int i = 0; i < 4; ++i) users.push_back(keypair_from_label("u" + std::to_string(i)));
  const char* prefixes[] = {"ccn:/a", "ccn:/a/b", "ccn:/b", "ccn:/c/d", "ccn:/c"};
  const char* names[] = {"ccn:/a/x", "ccn:/a/b/y", "ccn:/b/z", "ccn:/c/d/e", "ccn:/c/q", "ccn:/e/f"};
  for (int trial = 0; trial < 50; ++trial) {
    OnChainIndex idx;
    ReplayOracle oracle;
    std::size_t committed = 0;
    std::vector<Block> chain;
    for (std::uint64_t h = 1; h <= 6; ++h) {
      std::vector<Transaction> txs;
      for (std::size_t k = rng.below(5); k > 0; --k) {
        const KeyPair& u = users[rng.below(users.size())];
        if (rng.chance(0.4)) {
          txs.push_back(make_register(parse_identifier(prefixes[rng.below(5)]), u, as_bytes("id")));
        } else {
          Identifier n = parse_identifier(names[rng.below(6)]);
          txs.push_back(make_publish(sign_record(n, sha256(std::to_string(rng.next())), parse_identifier("ccn:/node/s"), u), u));
        }
      }
      for (const auto& tx : txs) oracle.feed(tx);
      committed += txs.size();
      chain.push_back(block_of(h, txs));
      idx.fold_block(chain.back(), committee);
    }
    REQUIRE(idx.registrations().size() == oracle.regs.size());
    REQUIRE(idx.publications().size() == oracle.pubs.size());
    for (const auto& [n, hash] : oracle.pubs) CHECK(idx.publication(parse_identifier(n))->record.content_hash == hash);
    CHECK(idx.audit().size() == oracle.skipped);
    CHECK(idx.applied() + idx.audit().size() == committed);
    OnChainIndex again;
    for (const auto& b : chain) again.fold_block(b, committee);
    CHECK(again.dump() == idx.dump());
  }
}

TEST_CASE("memory blob store") {
  MemoryBlobStore s;
  Bytes data{1, 2, 3, 4};
  Digest h = sha256(data);
  CHECK_FALSE(s.get_blob(h).has_value());
  s.put_blob(h, data);
  CHECK(s.get_blob(h) == data);
  try {
    s.put_blob(sha256("other"), data);
    FAIL("accepted a wrong hash");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::HashMismatch);
  }
  std::vector<std::thread> readers;
  std::atomic<int> hits{0};
  for (int i = 0; i < 4; ++i) {
    readers.emplace_back([&] {
      for (int k = 0; k < 1000; ++k) hits += s.get_blob(h).has_value();
    });
  }
  for (auto& t : readers) t.join();
  CHECK(hits == 4000);
}

TEST_CASE("directory blob store persists blobs and records") {
  TempDir dir;
  KeyPair alice = keypair_from_label("alice");
  Bytes data(10000, 9);
  Digest h = sha256(data);
  ResourceRecord r1 = sign_record(parse_identifier("ccn:/a/v"), h, parse_identifier("ccn:/node/a"), alice);
  ResourceRecord r2 = sign_record(parse_identifier("ccn:/a/v"), h, parse_identifier("ccn:/node/b"), alice);
  {
    DirectoryBlobStore s(dir.path);
    s.put_blob(h, data);
    s.put_record(r1);
    s.put_record(r2);
    CHECK_THROWS_AS(s.put_blob(sha256("x"), data), Error);
  }
  DirectoryBlobStore s(dir.path);
  CHECK(s.get_blob(h) == data);
  CHECK(s.has_blob(h));
  CHECK(s.record(parse_identifier("ccn:/a/v")) == r2);
  CHECK_FALSE(s.record(parse_identifier("ccn:/a/w")).has_value());
  CHECK(fs::exists(dir.path / "blobs" / to_hex(h).substr(0, 2) / to_hex(h)));

  OnChainIndex idx;
  Committee committee = Genesis::standard(1, 1, 0).committee;
  ResourceRecord gone = sign_record(parse_identifier("ccn:/a/gone"), sha256("gone"), parse_identifier("ccn:/node/a"), alice);
  idx.fold_block(block_of(1, {make_register(parse_identifier("ccn:/a"), alice, as_bytes("")), make_publish(r1, alice),
                              make_publish(gone, alice)}),
                 committee);
  auto status = check_integrity(idx, s);
  CHECK(status.at(parse_identifier("ccn:/a/v")) == BlobStatus::Ok);
  CHECK(status.at(parse_identifier("ccn:/a/gone")) == BlobStatus::Missing);
  {
    std::ofstream corrupt(dir.path / "blobs" / to_hex(h).substr(0, 2) / to_hex(h), std::ios::binary | std::ios::app);
    corrupt << 'x';
  }
  CHECK(check_integrity(idx, s).at(parse_identifier("ccn:/a/v")) == BlobStatus::Corrupt);

  std::ofstream(dir.path / "journal.tsv", std::ios::app) << "broken line\n";
  CHECK_THROWS_AS(DirectoryBlobStore{dir.path}, Error);
}
