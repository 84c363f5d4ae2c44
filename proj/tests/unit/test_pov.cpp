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

#include <algorithm>
#include <bit>
#include <functional>

#include "doctest.h"
#include "minet/error.hpp"
#include "minet/pov.hpp"

using namespace minet;

namespace {

/// "More than half of the committee", stated without integer division.
bool oracle_majority(std::size_t votes, std::size_t n) { return static_cast<double>(votes) > n / 2.0; }

Block with_votes(const Block& b, std::uint32_t mask, std::size_t n) {
  Block out = b;
  Digest h = block_hash(b);
  for (MemberId m = 0; m < n; ++m) {
    if (mask & (1u << m)) out.votes.push_back(Vote{m, default_scheme().sign(h.view(), member_key(m).secret_key)});
  }
  return out;
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return ErrorCode::Io;
}

/// Commits an empty block at the tip with every commissioner's vote.
void advance(Chain& c) {
  Block b = c.produce_block(c.scheduled_producer(c.height() + 1), {});
  c.commit_block(with_votes(b, 0xffffffffu >> (32 - c.genesis().committee.size()), c.genesis().committee.size()));
}

}  // namespace

TEST_CASE("majority rule matches brute force for every vote subset") {
  for (std::size_t n : {1, 3, 4, 5, 7}) {
    Genesis g = Genesis::standard(n, 3, 1);
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
      Chain c(g);
      Block b = with_votes(c.produce_block(c.scheduled_producer(1), {}), mask, n);
      std::size_t k = static_cast<std::size_t>(std::popcount(mask));
      bool committed = true;
      try {
        c.commit_block(b);
      } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::InsufficientVotes);
        committed = false;
      }
      REQUIRE(committed == oracle_majority(k, n));
      CHECK(is_majority(k, n) == oracle_majority(k, n));
    }
  }
}

TEST_CASE("four member committee needs three votes") {
  Genesis g = Genesis::standard(4, 3, 0);
  Chain c(g);
  Block b = c.produce_block(c.scheduled_producer(1), {});
  CHECK(code_of([&] { c.commit_block(with_votes(b, 0b0011, 4)); }) == ErrorCode::InsufficientVotes);
  c.commit_block(with_votes(b, 0b0111, 4));
  CHECK(c.height() == 1);
}

TEST_CASE("forged, duplicate and foreign votes do not count") {
  Genesis g = Genesis::standard(3, 3, 0);
  Chain c(g);
  Block b = c.produce_block(c.scheduled_producer(1), {});
  Block v = with_votes(b, 0b001, 3);
  v.votes.push_back(v.votes[0]);
  v.votes.push_back(Vote{1, Bytes(64, 0)});
  v.votes.push_back(Vote{7, default_scheme().sign(block_hash(b).view(), member_key(7).secret_key)});
  CHECK(c.valid_votes(v) == 1);
  CHECK(code_of([&] { c.commit_block(v); }) == ErrorCode::InsufficientVotes);
}

TEST_CASE("block production") {
  Genesis g = Genesis::standard(1, 3, 0);
  Chain c(g);
  advance(c);
  Block b = c.produce_block(c.scheduled_producer(2), {});
  CHECK(b.height == 2);
  CHECK(b.prev_hash == c.tip_hash());
  CHECK(b.producer == g.butlers[2 % 3]);
  MemberId wrong = g.butlers[0];
  CHECK(code_of([&] { c.produce_block(wrong, {}); }) == ErrorCode::NotScheduled);

  KeyPair alice = keypair_from_label("alice");
  KeyPair bob = keypair_from_label("bob");
  Transaction reg = make_register(parse_identifier("ccn:/pkusz"), alice, as_bytes("a"));
  Transaction dup = make_register(parse_identifier("ccn:/pkusz"), bob, as_bytes("b"));
  Transaction forged = reg;
  forged.real_id = Bytes{1, 2, 3};
  Block both = c.produce_block(c.scheduled_producer(2), {reg, dup, reg, forged});
  REQUIRE(both.txs.size() == 2);
  CHECK(both.txs[0] == reg);
  CHECK(both.txs[1] == dup);
  c.commit_block(with_votes(both, 1, 1));
  CHECK(c.index().registration(parse_identifier("ccn:/pkusz"))->owner == publisher_id(alice.public_key));
  REQUIRE(c.index().audit().size() == 1);
  CHECK(c.index().audit()[0].tx_index == 1);
  CHECK(c.index().applied() == 1);
}

TEST_CASE("commissioners vote only for valid proposals") {
  Genesis g = Genesis::standard(3, 3, 0);
  Chain c(g);
  Block b = c.produce_block(c.scheduled_producer(1), {});
  VoteResult ok = c.vote_on_block(0, member_key(0), b);
  REQUIRE(std::holds_alternative<Vote>(ok));
  CHECK(c.verify_vote(b, std::get<Vote>(ok)));
  Block broken = b;
  broken.prev_hash.bytes[0] ^= 1;
  CHECK(std::holds_alternative<Reject>(c.vote_on_block(0, member_key(0), broken)));
  CHECK(code_of([&] { c.commit_block(with_votes(broken, 0b111, 3)); }) == ErrorCode::BadChainLink);
  CHECK(std::holds_alternative<Reject>(c.vote_on_block(4, member_key(4), b)));
  Block bad_tx = b;
  Transaction unsigned_tx = make_register(parse_identifier("ccn:/x"), keypair_from_label("x"), as_bytes(""));
  unsigned_tx.signature[0] ^= 1;
  bad_tx.txs.push_back(unsigned_tx);
  CHECK(std::holds_alternative<Reject>(c.vote_on_block(0, member_key(0), bad_tx)));
  Block twice = b;
  Transaction ok_tx = make_register(parse_identifier("ccn:/y"), keypair_from_label("y"), as_bytes(""));
  twice.txs = {ok_tx, ok_tx};
  CHECK(std::holds_alternative<Reject>(c.vote_on_block(0, member_key(0), twice)));
}

TEST_CASE("degenerate committee of one") {
  Chain c(Genesis::standard(1, 1, 0));
  Block b = c.produce_block(c.scheduled_producer(1), {});
  c.commit_block(with_votes(b, 1, 1));
  CHECK(c.height() == 1);
}

TEST_CASE("competing blocks never both reach a majority") {
  // Enumerate, for each of four commissioners, which of two equivocating
  // proposals it sees and in what order.
  Genesis g = Genesis::standard(4, 3, 0);
  Chain c(g);
  MemberId producer = c.scheduled_producer(1);
  Block a = c.produce_block(producer, {});
  Block b = c.produce_block(producer, {make_register(parse_identifier("ccn:/q"), keypair_from_label("q"), as_bytes(""))});
  REQUIRE(block_hash(a) != block_hash(b));
  enum Seen { None, OnlyA, OnlyB, AThenB, BThenA };
  std::size_t schedules = 0, committed_a = 0, committed_b = 0;
  for (int code = 0; code < 625; ++code) {
    std::vector<Commissioner> comm;
    for (MemberId m = 0; m < 4; ++m) comm.emplace_back(m, member_key(m));
    Block va = a, vb = b;
    int x = code;
    for (MemberId m = 0; m < 4; ++m, x /= 5) {
      std::vector<const Block*> order;
      switch (static_cast<Seen>(x % 5)) {
        case None: break;
        case OnlyA: order = {&a}; break;
        case OnlyB: order = {&b}; break;
        case AThenB: order = {&a, &b}; break;
        case BThenA: order = {&b, &a}; break;
      }
      for (const Block* blk : order) {
        VoteResult r = comm[m].vote(c, *blk);
        if (auto* v = std::get_if<Vote>(&r)) (blk == &a ? va : vb).votes.push_back(*v);
      }
    }
    bool ma = is_majority(c.valid_votes(va), 4);
    bool mb = is_majority(c.valid_votes(vb), 4);
    REQUIRE_FALSE((ma && mb));
    committed_a += ma;
    committed_b += mb;
    ++schedules;
  }
  CHECK(schedules == 625);
  CHECK(committed_a > 0);
  CHECK(committed_b > 0);
}

TEST_CASE("butler elections") {
  SUBCASE("equal tallies pick the lowest ids") {
    TermState t;
    t.butlers = {7, 5, 9};
    t.candidates = {6, 8};
    TermState n = elect_butlers(t, 3);
    CHECK(n.butlers == std::vector<MemberId>{5, 6, 7});
    CHECK(n.candidates == std::vector<MemberId>{8, 9});
    CHECK(n.term_no == 1);
  }
  SUBCASE("random tallies agree with a sort oracle") {
    Rng rng(4);
    for (int trial = 0; trial < 500; ++trial) {
      TermState t;
      std::vector<MemberId> ids;
      std::size_t pool = 1 + rng.below(8);
      for (MemberId id = 0; id < pool; ++id) {
        ids.push_back(id * 3 + 1);
        t.tallies[ids.back()] = rng.below(4);
        (id % 2 ? t.candidates : t.butlers).push_back(ids.back());
      }
      std::size_t b = 1 + rng.below(4);
      // Oracle: repeatedly take the best remaining member.
      std::vector<MemberId> left = ids, expect;
      while (expect.size() < b && !left.empty()) {
        auto best = left.begin();
        for (auto it = left.begin(); it != left.end(); ++it) {
          if (t.tallies[*it] > t.tallies[*best] || (t.tallies[*it] == t.tallies[*best] && *it < *best)) best = it;
        }
        expect.push_back(*best);
        left.erase(best);
      }
      std::sort(expect.begin(), expect.end());
      TermState n = elect_butlers(t, b);
      REQUIRE(n.butlers == expect);
      CHECK(n.butlers.size() + n.candidates.size() == pool);
      for (const auto& [id, tally] : n.tallies) CHECK(tally == 0);
    }
  }
  SUBCASE("a strictly highest candidate is always selected") {
    TermState t;
    t.butlers = {1, 2, 3};
    t.candidates = {9};
    t.tallies = {{1, 5}, {2, 5}, {3, 5}, {9, 6}};
    CHECK(std::find(elect_butlers(t, 3).butlers.begin(), elect_butlers(t, 3).butlers.end(), 9) !=
          elect_butlers(t, 3).butlers.end());
  }
  SUBCASE("a pool smaller than the butler count is elected whole") {
    TermState t;
    t.butlers = {4};
    t.candidates = {2};
    TermState n = elect_butlers(t, 3);
    CHECK(n.butlers == std::vector<MemberId>{2, 4});
    CHECK(n.candidates.empty());
  }
}

TEST_CASE("terms roll over after the configured length") {
  Chain c(Genesis::standard(3, 2, 1, 4));
  CHECK(code_of([&] { c.end_term_election(); }) == ErrorCode::TermNotOver);
  for (int i = 0; i < 3; ++i) advance(c);
  CHECK(c.term().term_no == 0);
  CHECK(c.term().blocks_this_term == 3);
  CHECK(c.term().tallies.at(c.genesis().butlers[0]) + c.term().tallies.at(c.genesis().butlers[1]) == 9);
  advance(c);
  CHECK(c.term().term_no == 1);
  CHECK(c.term().blocks_this_term == 0);
  CHECK(c.term().butlers == c.genesis().butlers);
  CHECK(c.role(0) == NodeRole::Commissioner);
  CHECK(c.role(5) == NodeRole::ButlerCandidate);
  CHECK(c.role(42) == NodeRole::Ordinary);
}

TEST_CASE("amendments need more than half of the committee") {
  Genesis g = Genesis::standard(5, 1, 0);
  Chain c(g);
  KeyPair alice = keypair_from_label("alice");
  Identifier name = parse_identifier("ccn:/pkusz/v1");
  ResourceRecord rec = sign_record(name, sha256("v1"), parse_identifier("ccn:/node/a"), alice);
  std::vector<Transaction> setup = {make_register(parse_identifier("ccn:/pkusz"), alice, as_bytes("alice")),
                                    make_publish(rec, alice)};
  Block b = c.produce_block(c.scheduled_producer(1), setup);
  REQUIRE(b.txs.size() == 2);
  c.commit_block(with_votes(b, 0b11111, 5));

  ResourceRecord fixed = sign_record(name, sha256("v1-fixed"), parse_identifier("ccn:/node/b"), member_key(0));
  for (std::size_t approvals = 0; approvals <= 5; ++approvals) {
    Transaction t = make_amend(fixed, member_key(0));
    for (MemberId m = 0; m < approvals; ++m) t.approvals.push_back(approve_amend(fixed, m, member_key(m)));
    sign_transaction(t, member_key(0));
    bool ok = !c.index().check(t, g.committee).has_value();
    CHECK(ok == (approvals >= 3));
  }
  Transaction t = make_amend(fixed, member_key(0));
  t.approvals = {approve_amend(fixed, 1, member_key(1)), approve_amend(fixed, 1, member_key(1)),
                 approve_amend(fixed, 2, member_key(2))};
  sign_transaction(t, member_key(0));
  CHECK(c.index().check(t, g.committee).has_value());
}

TEST_CASE("genesis files") {
  Genesis g = Genesis::standard(5, 3, 1);
  Genesis back = Genesis::from_json(g.to_json());
  CHECK(back.committee == g.committee);
  CHECK(back.butlers == g.butlers);
  CHECK(back.candidates == g.candidates);
  CHECK(back.term_length == 64);
  CHECK(code_of([] { Genesis::from_json("{"); }) == ErrorCode::ConfigError);
  Genesis overlap = g;
  overlap.candidates.push_back(0);
  CHECK(code_of([&] { overlap.validate(); }) == ErrorCode::ConfigError);
  Genesis short_list = g;
  short_list.butlers.pop_back();
  CHECK(code_of([&] { Chain c(short_list); }) == ErrorCode::ConfigError);
}

TEST_CASE("blocks and transactions survive encoding") {
  Genesis g = Genesis::standard(3, 1, 0);
  Chain c(g);
  KeyPair alice = keypair_from_label("alice");
  ResourceRecord rec = sign_record(parse_identifier("ccn:/a/b"), sha256("b"), parse_identifier("ccn:/node/x"), alice);
  Transaction amend = make_amend(rec, alice);
  amend.approvals.push_back(approve_amend(rec, 0, member_key(0)));
  sign_transaction(amend, alice);
  Block b = c.produce_block(c.scheduled_producer(1), {});
  b.txs = {make_register(parse_identifier("ccn:/a"), alice, as_bytes("id")), make_publish(rec, alice), amend};
  b = with_votes(b, 0b101, 3);
  b.rejections = {1};
  CHECK(decode_block(encode(b)) == b);
  for (const auto& tx : b.txs) {
    CHECK(decode_transaction(encode(tx)) == tx);
    CHECK(verify_transaction_signature(tx));
  }
  Bytes wire = encode(b);
  wire.pop_back();
  CHECK_THROWS_AS(decode_block(wire), Error);
}

TEST_CASE("networked consensus stays forkless") {
  for (std::size_t silent : {0, 1, 2}) {
    PovSimConfig cfg;
    cfg.blocks = 150;
    cfg.term_length = 16;
    cfg.users = 10;
    cfg.silent = silent;
    cfg.seed = 30 + silent;
    PovSimResult r = run_pov_simulation(cfg);
    CAPTURE(silent);
    CHECK(r.min_height == 150);
    CHECK(r.prefix_consistent);
    CHECK(r.underquorum_blocks == 0);
    CHECK(r.terms == 150 / 16);
    CHECK(r.applied_txs == 21);
    CHECK(r.audited_txs == 1);
  }
  PovSimConfig cfg;
  cfg.blocks = 40;
  CHECK(run_pov_simulation(cfg).metrics_csv == run_pov_simulation(cfg).metrics_csv);
  cfg.silent = 3;
  CHECK_THROWS_AS(run_pov_simulation(cfg), Error);
}
