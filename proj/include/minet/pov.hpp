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
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "minet/data_layer.hpp"
#include "minet/ledger.hpp"
#include "minet/netsim.hpp"

namespace minet {

enum class NodeRole : std::uint8_t { Commissioner, Butler, ButlerCandidate, Ordinary };
std::string_view to_string(NodeRole r) noexcept;

/// Initial consensus configuration. JSON form:
///   {"term_length": 64, "butler_count": 3,
///    "committee": [{"id": 0, "key": "<hex>"}, ...],
///    "butlers": [5, 6, 7], "candidates": [8]}
struct Genesis {
  Committee committee;
  std::vector<MemberId> butlers;
  std::vector<MemberId> candidates;
  std::uint64_t term_length = 64;
  std::size_t butler_count = 3;

  /// Throws ConfigError when roles overlap or sizes are inconsistent.
  void validate() const;
  std::string to_json() const;
  static Genesis from_json(const std::string& text);
  static Genesis load(const std::string& path);
  /// Ids 0..N-1 commissioners, then butlers, then candidates; keys from
  /// member_key().
  static Genesis standard(std::size_t commissioners, std::size_t butlers, std::size_t candidates,
                          std::uint64_t term_length = 64);
};

struct TermState {
  std::uint64_t term_no = 0;
  std::vector<MemberId> butlers;
  std::vector<MemberId> candidates;
  /// Confidence votes per butler or candidate in this term.
  std::map<MemberId, std::uint64_t> tallies;
  std::uint64_t blocks_this_term = 0;
};

/// Next term: the top `butler_count` of butlers and candidates by tally,
/// ties to the lowest id; everyone else in the pool becomes a candidate.
TermState elect_butlers(const TermState& term, std::size_t butler_count);

struct Reject {
  MemberId member = 0;
  std::string reason;
};
using VoteResult = std::variant<Vote, Reject>;

/// Replicated chain state: committed blocks, term state and on-chain index.
class Chain {
 public:
  explicit Chain(Genesis genesis);

  const Genesis& genesis() const noexcept { return genesis_; }
  /// Committed blocks; blocks()[0] is the genesis block.
  const std::vector<Block>& blocks() const noexcept { return blocks_; }
  std::uint64_t height() const noexcept { return blocks_.size() - 1; }
  const Digest& tip_hash() const noexcept { return hashes_.back(); }
  const Digest& hash_at(std::uint64_t height) const { return hashes_.at(height); }
  const TermState& term() const noexcept { return term_; }
  const OnChainIndex& index() const noexcept { return index_; }
  NodeRole role(MemberId id) const;

  /// Butler due to produce `height` (tip + 1) in the current term:
  /// round robin over the butler list by height.
  MemberId scheduled_producer(std::uint64_t height) const;
  /// Block on top of the tip holding the authentic transactions of
  /// `pending`. Conflicts with chain state are left to the index, which
  /// audits them when the block is folded. Throws NotScheduled.
  Block produce_block(MemberId butler, const std::vector<Transaction>& pending, std::size_t max_txs = 64) const;
  /// Why the proposal is unacceptable, if it is.
  std::optional<std::string> check_proposal(const Block& block) const;
  /// A Vote signing the block hash iff check_proposal passes.
  VoteResult vote_on_block(MemberId commissioner, const KeyPair& key, const Block& block) const;
  bool verify_vote(const Block& block, const Vote& vote) const;
  /// Distinct committee members with a valid vote on `block`.
  std::size_t valid_votes(const Block& block) const;
  /// Appends `block`. Throws BadChainLink, NotScheduled or InsufficientVotes.
  void commit_block(const Block& block);
  /// Next term's butler list: top butler_count of butlers and candidates by
  /// tally, ties to the lowest id. Throws TermNotOver.
  TermState end_term_election() const;

  /// "height\thash\tproducer\ttxs\tvotes" per block.
  std::string dump() const;

 private:
  Genesis genesis_;
  std::vector<Block> blocks_;
  std::vector<Digest> hashes_;
  TermState term_;
  OnChainIndex index_;
};

/// Commissioner that votes at most once per height.
class Commissioner {
 public:
  Commissioner(MemberId id, KeyPair key) : id_(id), key_(std::move(key)) {}
  /// Votes for a valid block unless a different block already received this
  /// member's vote at the same height.
  VoteResult vote(const Chain& chain, const Block& block);
  MemberId id() const noexcept { return id_; }

 private:
  MemberId id_;
  KeyPair key_;
  std::map<std::uint64_t, Digest> voted_;
};

/// Consensus participant running over netsim Frames.
class PovNode : public SimNode {
 public:
  PovNode(MemberId id, Genesis genesis, bool silent = false, std::uint64_t target_height = ~0ull);

  void add_transactions(std::vector<Transaction> txs);
  const Chain& chain() const noexcept { return chain_; }
  bool silent() const noexcept { return silent_; }

  void start(NodeContext& ctx) override;
  void on_message(NodeContext& ctx, FaceId face, Message msg) override;
  void on_tick(NodeContext& ctx) override;
  void report(Counters& out) const override;

 private:
  void send_to(NodeContext& ctx, MemberId to, Bytes body);
  void broadcast(NodeContext& ctx, const Bytes& body, bool commissioners_only);
  void handle_proposal(NodeContext& ctx, const Block& b);
  void handle_vote(NodeContext& ctx, const Vote& v, std::uint64_t height, const Digest& hash);
  void handle_commit(NodeContext& ctx, const Block& b);
  void drain(NodeContext& ctx);

  MemberId id_;
  Chain chain_;
  Commissioner commissioner_;
  bool silent_;
  std::uint64_t target_;
  std::vector<Transaction> mempool_;
  std::map<MemberId, FaceId> faces_;
  std::optional<Block> proposal_;
  std::map<MemberId, Vote> votes_;
  std::set<MemberId> rejections_;
  std::map<std::uint64_t, Block> future_proposals_;
  std::map<std::uint64_t, Block> future_commits_;
  Counters counters_;
};

struct PovSimConfig {
  std::size_t commissioners = 5;
  std::size_t butlers = 3;
  std::size_t candidates = 1;
  std::uint64_t term_length = 64;
  std::uint64_t blocks = 1000;
  /// Highest-id commissioners that never send anything.
  std::size_t silent = 0;
  Tick min_latency = 1;
  Tick max_latency = 20;
  bool reorder = true;
  /// Registration/publication pairs fed to the butlers' mempools.
  std::size_t users = 50;
  std::uint64_t seed = 1;
  Tick max_ticks = 5'000'000;
};

struct PovSimResult {
  /// Block hashes of each node's committed chain, by member id.
  std::map<MemberId, std::vector<Digest>> chains;
  std::uint64_t min_height = 0;
  std::uint64_t max_height = 0;
  /// Every pair of chains is a prefix of the other.
  bool prefix_consistent = false;
  /// Committed blocks (over all nodes) with at most half the committee's votes.
  std::uint64_t underquorum_blocks = 0;
  std::uint64_t terms = 0;
  std::uint64_t applied_txs = 0;
  /// Committed transactions the index skipped.
  std::uint64_t audited_txs = 0;
  Tick ticks = 0;
  std::string metrics_csv;
};

PovSimResult run_pov_simulation(const PovSimConfig& config);

}  // namespace minet
