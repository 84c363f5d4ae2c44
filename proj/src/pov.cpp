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

#include "minet/pov.hpp"

#include <algorithm>
#include <fstream>
#include <memory>
#include <sstream>

#include "json.hpp"
#include "minet/error.hpp"
#include "minet/tlv.hpp"

namespace minet {

std::string_view to_string(NodeRole r) noexcept {
  switch (r) {
    case NodeRole::Commissioner: return "commissioner";
    case NodeRole::Butler: return "butler";
    case NodeRole::ButlerCandidate: return "candidate";
    case NodeRole::Ordinary: return "ordinary";
  }
  return "?";
}

// --- Genesis ----------------------------------------------------------------------

void Genesis::validate() const {
  if (committee.empty()) fail(ErrorCode::ConfigError, "genesis: empty committee");
  if (term_length == 0) fail(ErrorCode::ConfigError, "genesis: term_length must be positive");
  if (butler_count == 0) fail(ErrorCode::ConfigError, "genesis: butler_count must be positive");
  if (butlers.size() != butler_count) {
    fail(ErrorCode::ConfigError, "genesis: " + std::to_string(butlers.size()) + " butlers listed, butler_count is " +
                                     std::to_string(butler_count));
  }
  std::set<MemberId> seen;
  for (const auto& [id, key] : committee) {
    if (key.empty()) fail(ErrorCode::ConfigError, "genesis: commissioner " + std::to_string(id) + " has no key");
    seen.insert(id);
  }
  for (const auto* list : {&butlers, &candidates}) {
    for (MemberId id : *list) {
      if (!seen.insert(id).second) fail(ErrorCode::ConfigError, "genesis: member " + std::to_string(id) + " has two roles");
    }
  }
}

std::string Genesis::to_json() const {
  nlohmann::ordered_json j;
  j["term_length"] = term_length;
  j["butler_count"] = butler_count;
  j["committee"] = nlohmann::ordered_json::array();
  for (const auto& [id, key] : committee) j["committee"].push_back({{"id", id}, {"key", to_hex(key)}});
  j["butlers"] = butlers;
  j["candidates"] = candidates;
  return j.dump(2) + "\n";
}

Genesis Genesis::from_json(const std::string& text) {
  Genesis g;
  try {
    auto j = nlohmann::json::parse(text);
    g.term_length = j.value("term_length", std::uint64_t{64});
    g.butler_count = j.value("butler_count", std::size_t{3});
    for (const auto& m : j.at("committee")) {
      g.committee[m.at("id").get<MemberId>()] = from_hex(m.at("key").get<std::string>());
    }
    g.butlers = j.at("butlers").get<std::vector<MemberId>>();
    g.candidates = j.value("candidates", std::vector<MemberId>{});
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::ConfigError, std::string("genesis: ") + e.what());
  } catch (const Error& e) {
    fail(ErrorCode::ConfigError, std::string("genesis: ") + e.what());
  }
  g.validate();
  return g;
}

Genesis Genesis::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::Io, "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json(ss.str());
}

Genesis Genesis::standard(std::size_t commissioners, std::size_t butlers, std::size_t candidates,
                          std::uint64_t term_length) {
  Genesis g;
  g.term_length = term_length;
  g.butler_count = butlers;
  MemberId id = 0;
  for (std::size_t i = 0; i < commissioners; ++i, ++id) g.committee[id] = member_key(id).public_key;
  for (std::size_t i = 0; i < butlers; ++i) g.butlers.push_back(id++);
  for (std::size_t i = 0; i < candidates; ++i) g.candidates.push_back(id++);
  g.validate();
  return g;
}

// --- Chain ------------------------------------------------------------------------

Chain::Chain(Genesis genesis) : genesis_(std::move(genesis)) {
  genesis_.validate();
  blocks_.push_back(Block{});
  hashes_.push_back(block_hash(blocks_.back()));
  term_.butlers = genesis_.butlers;
  term_.candidates = genesis_.candidates;
  for (MemberId b : term_.butlers) term_.tallies[b] = 0;
  for (MemberId c : term_.candidates) term_.tallies[c] = 0;
}

NodeRole Chain::role(MemberId id) const {
  if (genesis_.committee.count(id)) return NodeRole::Commissioner;
  if (std::find(term_.butlers.begin(), term_.butlers.end(), id) != term_.butlers.end()) return NodeRole::Butler;
  if (std::find(term_.candidates.begin(), term_.candidates.end(), id) != term_.candidates.end()) {
    return NodeRole::ButlerCandidate;
  }
  return NodeRole::Ordinary;
}

MemberId Chain::scheduled_producer(std::uint64_t height) const {
  return term_.butlers[height % term_.butlers.size()];
}

Block Chain::produce_block(MemberId butler, const std::vector<Transaction>& pending, std::size_t max_txs) const {
  std::uint64_t h = height() + 1;
  if (scheduled_producer(h) != butler) {
    fail(ErrorCode::NotScheduled, "member " + std::to_string(butler) + " is not scheduled for height " +
                                      std::to_string(h) + " (member " + std::to_string(scheduled_producer(h)) + " is)");
  }
  Block b;
  b.height = h;
  b.prev_hash = tip_hash();
  b.producer = butler;
  b.term = term_.term_no;
  std::set<Digest> seen;
  for (const auto& tx : pending) {
    if (b.txs.size() >= max_txs) break;
    if (!verify_transaction_signature(tx) || !seen.insert(tx_id(tx)).second) continue;
    b.txs.push_back(tx);
  }
  return b;
}

std::optional<std::string> Chain::check_proposal(const Block& b) const {
  if (b.height != height() + 1) return "height " + std::to_string(b.height) + " does not extend tip " + std::to_string(height());
  if (b.prev_hash != tip_hash()) return "prev_hash does not match the tip";
  if (b.term != term_.term_no) return "wrong term";
  if (b.producer != scheduled_producer(b.height)) return "producer not scheduled";
  std::set<Digest> seen;
  for (std::size_t i = 0; i < b.txs.size(); ++i) {
    if (!verify_transaction_signature(b.txs[i])) return "tx " + std::to_string(i) + ": bad submitter signature";
    if (!seen.insert(tx_id(b.txs[i])).second) return "tx " + std::to_string(i) + ": repeated in block";
  }
  return std::nullopt;
}

VoteResult Chain::vote_on_block(MemberId commissioner, const KeyPair& key, const Block& block) const {
  if (!genesis_.committee.count(commissioner)) return Reject{commissioner, "not a commissioner"};
  if (auto why = check_proposal(block)) return Reject{commissioner, *why};
  return Vote{commissioner, default_scheme().sign(block_hash(block).view(), key.secret_key)};
}

bool Chain::verify_vote(const Block& block, const Vote& vote) const {
  auto it = genesis_.committee.find(vote.member);
  if (it == genesis_.committee.end()) return false;
  return default_scheme().verify(block_hash(block).view(), vote.signature, it->second);
}

std::size_t Chain::valid_votes(const Block& block) const {
  std::set<MemberId> ok;
  Digest h = block_hash(block);
  for (const auto& v : block.votes) {
    auto it = genesis_.committee.find(v.member);
    if (it != genesis_.committee.end() && !ok.count(v.member) && default_scheme().verify(h.view(), v.signature, it->second)) {
      ok.insert(v.member);
    }
  }
  return ok.size();
}

void Chain::commit_block(const Block& block) {
  if (block.height != height() + 1 || block.prev_hash != tip_hash()) {
    fail(ErrorCode::BadChainLink, "block " + std::to_string(block.height) + " does not link to tip " +
                                      std::to_string(height()));
  }
  if (block.term != term_.term_no || block.producer != scheduled_producer(block.height)) {
    fail(ErrorCode::NotScheduled, "block " + std::to_string(block.height) + " from unscheduled producer " +
                                      std::to_string(block.producer));
  }
  std::size_t votes = valid_votes(block);
  if (!is_majority(votes, genesis_.committee.size())) {
    fail(ErrorCode::InsufficientVotes, "block " + std::to_string(block.height) + " has " + std::to_string(votes) +
                                           " valid votes of " + std::to_string(genesis_.committee.size()));
  }
  index_.fold_block(block, genesis_.committee);
  term_.tallies[block.producer] += votes;
  term_.blocks_this_term++;
  blocks_.push_back(block);
  hashes_.push_back(block_hash(block));
  if (term_.blocks_this_term == genesis_.term_length) term_ = end_term_election();
}

TermState elect_butlers(const TermState& term, std::size_t butler_count) {
  std::vector<MemberId> pool = term.butlers;
  pool.insert(pool.end(), term.candidates.begin(), term.candidates.end());
  auto tally = [&](MemberId id) {
    auto it = term.tallies.find(id);
    return it == term.tallies.end() ? std::uint64_t{0} : it->second;
  };
  std::sort(pool.begin(), pool.end(), [&](MemberId a, MemberId b) {
    return tally(a) != tally(b) ? tally(a) > tally(b) : a < b;
  });
  TermState next;
  next.term_no = term.term_no + 1;
  std::size_t take = std::min(pool.size(), butler_count);
  next.butlers.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(take));
  next.candidates.assign(pool.begin() + static_cast<std::ptrdiff_t>(take), pool.end());
  std::sort(next.butlers.begin(), next.butlers.end());
  std::sort(next.candidates.begin(), next.candidates.end());
  for (MemberId id : pool) next.tallies[id] = 0;
  return next;
}

TermState Chain::end_term_election() const {
  if (term_.blocks_this_term < genesis_.term_length) {
    fail(ErrorCode::TermNotOver, "term " + std::to_string(term_.term_no) + " has " +
                                     std::to_string(term_.blocks_this_term) + " of " +
                                     std::to_string(genesis_.term_length) + " blocks");
  }
  return elect_butlers(term_, genesis_.butler_count);
}

std::string Chain::dump() const {
  std::ostringstream out;
  for (std::size_t h = 0; h < blocks_.size(); ++h) {
    const Block& b = blocks_[h];
    out << h << '\t' << to_hex(hashes_[h]) << '\t' << b.producer << '\t' << b.txs.size() << '\t' << b.votes.size()
        << '\n';
  }
  return out.str();
}

VoteResult Commissioner::vote(const Chain& chain, const Block& block) {
  Digest h = block_hash(block);
  auto it = voted_.find(block.height);
  if (it != voted_.end() && it->second != h) {
    return Reject{id_, "already voted for another block at height " + std::to_string(block.height)};
  }
  VoteResult r = chain.vote_on_block(id_, key_, block);
  if (std::holds_alternative<Vote>(r)) voted_[block.height] = h;
  return r;
}

// --- Network node -------------------------------------------------------------------

namespace {

constexpr std::uint16_t kPovChannel = 0x504f;

enum : std::uint8_t {
  kMsgKind = 0x70,
  kMsgBlock = 0x71,
  kMsgHeight = 0x72,
  kMsgHash = 0x73,
  kMsgMember = 0x74,
  kMsgSig = 0x75,
  kMsgReason = 0x76,
};
enum : std::uint64_t { kProposal = 1, kVoteMsg = 2, kRejectMsg = 3, kCommit = 4 };

Bytes block_message(std::uint64_t kind, const Block& b) {
  TlvWriter w;
  w.put_u64(kMsgKind, kind).put(kMsgBlock, encode(b));
  return std::move(w).take();
}

}  // namespace

PovNode::PovNode(MemberId id, Genesis genesis, bool silent, std::uint64_t target_height)
    : id_(id), chain_(std::move(genesis)), commissioner_(id, member_key(id)), silent_(silent), target_(target_height) {
  for (const char* c : {"proposals", "votes_sent", "rejects_sent", "commits", "conflicts", "bad_commits",
                        "bad_messages"}) {
    counters_[c] = 0;
  }
}

void PovNode::add_transactions(std::vector<Transaction> txs) {
  mempool_.insert(mempool_.end(), std::make_move_iterator(txs.begin()), std::make_move_iterator(txs.end()));
}

void PovNode::start(NodeContext& ctx) {
  for (const auto& f : ctx.faces()) {
    if (f.link) faces_.emplace(f.peer, f.id);
  }
}

void PovNode::send_to(NodeContext& ctx, MemberId to, Bytes body) {
  auto it = faces_.find(to);
  if (it == faces_.end()) return;
  ctx.send(it->second, Frame{kPovChannel, std::move(body)});
}

void PovNode::broadcast(NodeContext& ctx, const Bytes& body, bool commissioners_only) {
  for (const auto& [peer, face] : faces_) {
    if (commissioners_only && !chain_.genesis().committee.count(peer)) continue;
    ctx.send(face, Frame{kPovChannel, body});
  }
}

void PovNode::on_tick(NodeContext& ctx) {
  if (silent_) return;
  std::uint64_t next = chain_.height() + 1;
  if (chain_.height() >= target_ || chain_.scheduled_producer(next) != id_) return;
  if (proposal_ && proposal_->height == next) return;
  proposal_ = chain_.produce_block(id_, mempool_, 8);
  votes_.clear();
  rejections_.clear();
  counters_["proposals"]++;
  broadcast(ctx, block_message(kProposal, *proposal_), true);
}

void PovNode::on_message(NodeContext& ctx, FaceId, Message msg) {
  auto* frame = std::get_if<Frame>(&msg);
  if (!frame || frame->channel != kPovChannel) return;
  try {
    TlvReader r(frame->body);
    std::uint64_t kind = r.expect(kMsgKind).as_u64();
    if (kind == kProposal || kind == kCommit) {
      Block b = decode_block(r.expect(kMsgBlock).value);
      if (kind == kProposal) {
        handle_proposal(ctx, b);
      } else {
        handle_commit(ctx, b);
      }
    } else if (kind == kVoteMsg || kind == kRejectMsg) {
      std::uint64_t height = r.expect(kMsgHeight).as_u64();
      Digest hash = r.expect(kMsgHash).as_digest();
      MemberId member = static_cast<MemberId>(r.expect(kMsgMember).as_u64());
      if (kind == kVoteMsg) {
        handle_vote(ctx, Vote{member, r.expect(kMsgSig).as_bytes()}, height, hash);
      } else if (proposal_ && proposal_->height == height && block_hash(*proposal_) == hash) {
        rejections_.insert(member);
      }
    }
  } catch (const Error&) {
    counters_["bad_messages"]++;
  }
}

void PovNode::handle_proposal(NodeContext& ctx, const Block& b) {
  if (silent_ || chain_.role(id_) != NodeRole::Commissioner) return;
  if (b.height <= chain_.height()) return;
  if (b.height > chain_.height() + 1) {
    future_proposals_[b.height] = b;
    return;
  }
  VoteResult result = commissioner_.vote(chain_, b);
  TlvWriter w;
  if (const auto* v = std::get_if<Vote>(&result)) {
    w.put_u64(kMsgKind, kVoteMsg)
        .put_u64(kMsgHeight, b.height)
        .put_digest(kMsgHash, block_hash(b))
        .put_u64(kMsgMember, id_)
        .put(kMsgSig, v->signature);
    counters_["votes_sent"]++;
  } else {
    w.put_u64(kMsgKind, kRejectMsg)
        .put_u64(kMsgHeight, b.height)
        .put_digest(kMsgHash, block_hash(b))
        .put_u64(kMsgMember, id_)
        .put(kMsgReason, std::get<Reject>(result).reason);
    counters_["rejects_sent"]++;
  }
  send_to(ctx, b.producer, std::move(w).take());
}

void PovNode::handle_vote(NodeContext& ctx, const Vote& v, std::uint64_t height, const Digest& hash) {
  if (!proposal_ || proposal_->height != height || block_hash(*proposal_) != hash) return;
  if (!chain_.verify_vote(*proposal_, v)) return;
  votes_[v.member] = v;
  if (!is_majority(votes_.size(), chain_.genesis().committee.size())) return;
  Block committed = *proposal_;
  for (const auto& [_, vote] : votes_) committed.votes.push_back(vote);
  committed.rejections.assign(rejections_.begin(), rejections_.end());
  proposal_.reset();
  Bytes msg = block_message(kCommit, committed);
  handle_commit(ctx, committed);
  broadcast(ctx, msg, false);
}

void PovNode::handle_commit(NodeContext& ctx, const Block& b) {
  if (b.height <= chain_.height()) {
    if (block_hash(b) != chain_.hash_at(b.height)) counters_["conflicts"]++;
    return;
  }
  if (b.height > chain_.height() + 1) {
    future_commits_.emplace(b.height, b);
    return;
  }
  try {
    chain_.commit_block(b);
  } catch (const Error&) {
    counters_["bad_commits"]++;
    return;
  }
  counters_["commits"]++;
  if (!b.txs.empty()) {
    std::set<Digest> included;
    for (const auto& tx : b.txs) included.insert(tx_id(tx));
    std::erase_if(mempool_, [&](const Transaction& tx) { return included.count(tx_id(tx)) != 0; });
  }
  if (proposal_ && proposal_->height <= chain_.height()) proposal_.reset();
  drain(ctx);
}

void PovNode::drain(NodeContext& ctx) {
  std::uint64_t h = chain_.height();
  future_commits_.erase(future_commits_.begin(), future_commits_.upper_bound(h));
  future_proposals_.erase(future_proposals_.begin(), future_proposals_.upper_bound(h));
  if (auto it = future_commits_.find(h + 1); it != future_commits_.end()) {
    Block b = std::move(it->second);
    future_commits_.erase(it);
    handle_commit(ctx, b);
    return;
  }
  if (auto it = future_proposals_.find(h + 1); it != future_proposals_.end()) {
    Block b = std::move(it->second);
    future_proposals_.erase(it);
    handle_proposal(ctx, b);
  }
}

void PovNode::report(Counters& out) const {
  out = counters_;
  out["height"] = chain_.height();
  out["term"] = chain_.term().term_no;
  out["mempool"] = mempool_.size();
  out["applied_txs"] = chain_.index().applied();
  out["audited_txs"] = chain_.index().audit().size();
}

// --- Simulation ----------------------------------------------------------------------

PovSimResult run_pov_simulation(const PovSimConfig& cfg) {
  if (cfg.silent * 2 >= cfg.commissioners) {
    fail(ErrorCode::InvalidArgument, "silent commissioners must be fewer than half the committee");
  }
  if (cfg.min_latency > cfg.max_latency) fail(ErrorCode::InvalidArgument, "min_latency exceeds max_latency");
  Genesis genesis = Genesis::standard(cfg.commissioners, cfg.butlers, cfg.candidates, cfg.term_length);
  std::size_t total = cfg.commissioners + cfg.butlers + cfg.candidates;

  World world(cfg.seed);
  std::vector<PovNode*> nodes;
  for (MemberId id = 0; id < total; ++id) {
    bool silent = id < cfg.commissioners && id >= cfg.commissioners - cfg.silent;
    auto node = std::make_unique<PovNode>(id, genesis, silent, cfg.blocks);
    nodes.push_back(node.get());
    world.add_node("m" + std::to_string(id), std::move(node));
  }
  Rng rng(splitmix64(cfg.seed ^ 0x706f76ull));
  for (NodeId a = 0; a < total; ++a) {
    for (NodeId b = a + 1; b < total; ++b) {
      LinkParams p;
      p.latency = cfg.min_latency + rng.below(cfg.max_latency - cfg.min_latency + 1);
      p.jitter = cfg.max_latency - cfg.min_latency;
      p.reorder = cfg.reorder;
      world.connect(a, b, p, FaceKind::LinkLayer);
    }
  }

  // Registrations, publications, a few conflicting registrations and one
  // committee-approved amendment.
  std::vector<Transaction> txs;
  for (std::size_t u = 0; u < cfg.users; ++u) {
    KeyPair user = keypair_from_label("user-" + std::to_string(u));
    Identifier prefix = parse_identifier("ccn:/pov/u" + std::to_string(u));
    txs.push_back(make_register(prefix, user, as_bytes("id-" + std::to_string(u))));
    Identifier name = parse_identifier(prefix.to_string() + "/r0");
    txs.push_back(make_publish(sign_record(name, sha256("content-" + std::to_string(u)), parse_identifier("ccn:/node/m" + std::to_string(cfg.commissioners)), user),
                               user));
    if (u % 10 == 3) {
      KeyPair squatter = keypair_from_label("squatter-" + std::to_string(u));
      txs.push_back(make_register(prefix, squatter, as_bytes("squat")));
    }
  }
  if (cfg.users > 0) {
    KeyPair admin = member_key(0);
    ResourceRecord fixed = sign_record(parse_identifier("ccn:/pov/u0/r0"), sha256("content-0-fixed"),
                                       parse_identifier("ccn:/node/m0"), admin);
    Transaction amend = make_amend(fixed, admin);
    for (MemberId m = 0; m < cfg.commissioners; ++m) {
      if (is_majority(amend.approvals.size(), cfg.commissioners)) break;
      amend.approvals.push_back(approve_amend(fixed, m, member_key(m)));
    }
    sign_transaction(amend, admin);
    txs.push_back(std::move(amend));
  }
  for (MemberId id = 0; id < total; ++id) {
    if (id >= cfg.commissioners) nodes[id]->add_transactions(txs);
  }

  auto all_done = [&] {
    return std::all_of(nodes.begin(), nodes.end(), [&](const PovNode* n) { return n->chain().height() >= cfg.blocks; });
  };
  world.run_until(all_done, cfg.max_ticks);

  PovSimResult out;
  out.ticks = world.now();
  out.metrics_csv = world.metrics_csv();
  out.min_height = ~0ull;
  MemberId longest_id = 0;
  for (MemberId id = 0; id < total; ++id) {
    const Chain& c = nodes[id]->chain();
    std::vector<Digest> hashes;
    for (std::uint64_t h = 0; h <= c.height(); ++h) hashes.push_back(c.hash_at(h));
    out.chains[id] = std::move(hashes);
    out.min_height = std::min(out.min_height, c.height());
    out.max_height = std::max(out.max_height, c.height());
    if (c.height() > nodes[longest_id]->chain().height()) longest_id = id;
    for (std::uint64_t h = 1; h <= c.height(); ++h) {
      if (!is_majority(c.valid_votes(c.blocks()[h]), cfg.commissioners)) out.underquorum_blocks++;
    }
  }
  out.prefix_consistent = true;
  const auto& best = out.chains.at(longest_id);
  for (const auto& [id, chain] : out.chains) {
    if (!std::equal(chain.begin(), chain.end(), best.begin())) out.prefix_consistent = false;
  }
  out.terms = nodes[longest_id]->chain().term().term_no;
  out.applied_txs = nodes[longest_id]->chain().index().applied();
  out.audited_txs = nodes[longest_id]->chain().index().audit().size();
  return out;
}

}  // namespace minet
