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

#include "minet/registry.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "minet/error.hpp"
#include "minet/interwork.hpp"
#include "minet/mir_node.hpp"

namespace minet {

namespace {

using json = nlohmann::ordered_json;
constexpr int kFormatVersion = 1;
constexpr Tick kFetchBudget = 10'000'000;

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) fail(ErrorCode::Io, "cannot read " + p.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& p, const std::string& text) {
  auto tmp = p;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << text;
    if (!out) fail(ErrorCode::Io, "cannot write " + tmp.string());
  }
  std::filesystem::rename(tmp, p);
}

Genesis load_or_init(const std::filesystem::path& dir, const RegistryOptions& options, std::uint64_t& seed) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) fail(ErrorCode::Io, "cannot create " + dir.string() + ": " + ec.message());
  auto manifest = dir / "manifest.json";
  if (!std::filesystem::exists(manifest)) {
    Genesis g = Genesis::standard(options.commissioners, options.butlers, options.candidates, options.term_length);
    json m = {{"format", kFormatVersion}, {"seed", options.seed}, {"genesis", "genesis.json"}, {"chain", "chain.log"}};
    write_file(dir / "genesis.json", g.to_json());
    write_file(manifest, m.dump(2) + "\n");
    seed = options.seed;
    return g;
  }
  json m;
  try {
    m = json::parse(read_file(manifest));
    if (m.at("format").get<int>() != kFormatVersion) fail(ErrorCode::ConfigError, "unsupported state format");
    seed = m.at("seed").get<std::uint64_t>();
  } catch (const json::exception& e) {
    fail(ErrorCode::ConfigError, manifest.string() + ": " + e.what());
  }
  return Genesis::load((dir / "genesis.json").string());
}

std::string reason_of(const OnChainIndex& index, std::uint64_t height) {
  for (auto it = index.audit().rbegin(); it != index.audit().rend(); ++it) {
    if (it->height == height) return it->reason;
  }
  return {};
}

MirConfig router_config(std::string name) {
  MirConfig c;
  c.name = std::move(name);
  return c;
}

bool audited_at(const OnChainIndex& index, std::uint64_t height) {
  return !index.audit().empty() && index.audit().back().height == height;
}

}  // namespace

// --- KeyFile ---------------------------------------------------------------------

KeyFile KeyFile::from_seed(const Digest& seed) { return KeyFile{seed, default_scheme().keypair_from_seed(seed)}; }

KeyFile KeyFile::load(const std::filesystem::path& path) {
  try {
    json j = json::parse(read_file(path));
    if (j.at("scheme").get<std::string>() != default_scheme().name()) {
      fail(ErrorCode::ConfigError, path.string() + ": unsupported scheme");
    }
    KeyFile k = from_seed(digest_from_hex(j.at("seed").get<std::string>()));
    if (to_hex(k.key.public_key) != j.at("public_key").get<std::string>()) {
      fail(ErrorCode::ConfigError, path.string() + ": public key does not match seed");
    }
    return k;
  } catch (const json::exception& e) {
    fail(ErrorCode::ConfigError, path.string() + ": " + e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::Io || e.code() == ErrorCode::ConfigError) throw;
    fail(ErrorCode::ConfigError, path.string() + ": " + e.what());
  }
}

void KeyFile::save(const std::filesystem::path& path) const {
  json j = {{"scheme", std::string(default_scheme().name())}, {"seed", to_hex(seed)}, {"public_key", to_hex(key.public_key)}};
  write_file(path, j.dump(2) + "\n");
}

// --- Registry --------------------------------------------------------------------

Identifier default_origin_locator() { return node_locator("origin"); }

Registry::Registry(std::filesystem::path dir, RegistryOptions options)
    : dir_(std::move(dir)), chain_(load_or_init(dir_, options, seed_)), store_(dir_ / "store") {
  std::ifstream in(dir_ / "chain.log");
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty()) continue;
    try {
      chain_.commit_block(decode_block(from_hex(line)));
    } catch (const Error& e) {
      fail(ErrorCode::IntegrityFailure, "chain.log line " + std::to_string(n) + ": " + e.what());
    }
  }
}

void Registry::append(const Block& b) {
  std::ofstream out(dir_ / "chain.log", std::ios::app);
  out << to_hex(encode(b)) << '\n';
  if (!out) fail(ErrorCode::Io, "cannot append to " + (dir_ / "chain.log").string());
}

const Block& Registry::commit(const std::vector<Transaction>& txs) {
  std::uint64_t h = chain_.height() + 1;
  Block b = chain_.produce_block(chain_.scheduled_producer(h), txs, txs.size());
  for (const auto& [member, pub] : chain_.genesis().committee) {
    VoteResult r = chain_.vote_on_block(member, member_key(member), b);
    if (auto* v = std::get_if<Vote>(&r)) {
      b.votes.push_back(*v);
    } else {
      b.rejections.push_back(member);
    }
  }
  chain_.commit_block(b);
  append(b);
  return chain_.blocks().back();
}

const Registration& Registry::register_prefix(const Identifier& prefix, const KeyPair& user, ByteView real_id) {
  const Block& b = commit({make_register(prefix, user, real_id)});
  if (b.txs.empty()) fail(ErrorCode::InvalidArgument, "transaction signature rejected");
  if (audited_at(index(), b.height)) {
    std::string why = reason_of(index(), b.height);
    bool taken = why.find("already registered") != std::string::npos || why.find("overlaps") != std::string::npos;
    fail(taken ? ErrorCode::PrefixTaken : ErrorCode::InvalidArgument, why);
  }
  return *index().registration(prefix);
}

ResourceRecord Registry::publish(const Identifier& name, ByteView content, const KeyPair& user,
                                 std::optional<Identifier> locator) {
  ResourceRecord rec = sign_record(name, sha256(content), locator.value_or(default_origin_locator()), user);
  const Block& b = commit({make_publish(rec, user)});
  if (b.txs.empty()) fail(ErrorCode::InvalidArgument, "transaction signature rejected");
  if (audited_at(index(), b.height)) {
    std::string why = reason_of(index(), b.height);
    bool unregistered = why.find("no registered prefix") != std::string::npos || why.find("outside") != std::string::npos;
    fail(unregistered ? ErrorCode::NotRegistered : ErrorCode::InvalidArgument, why);
  }
  store_.put_blob(rec.content_hash, content);
  store_.put_record(rec);
  return rec;
}

QueryResult Registry::query(const Identifier& name) {
  const Publication* pub = index().publication(name);
  if (!pub) fail(ErrorCode::NotFound, "nothing published under " + name.to_string());
  const ResourceRecord& rec = pub->record;
  auto owner = index().owner_of(name);
  if (!owner || !verify_record(rec, owner->second->public_key)) {
    fail(ErrorCode::IntegrityFailure, "record for " + name.to_string() + " is not signed by the prefix owner");
  }
  auto blob = store_.get_blob(rec.content_hash);
  if (!blob) fail(ErrorCode::NotFound, "content of " + name.to_string() + " is not in the store");

  // client -- access -- core -- origin
  World w(seed_);
  auto client = std::make_unique<CcnConsumer>("client");
  auto* client_ptr = client.get();
  auto access = std::make_unique<MirRouter>(router_config("access"));
  auto* access_ptr = access.get();
  auto core = std::make_unique<MirRouter>(router_config("core"));
  auto* core_ptr = core.get();
  auto origin = std::make_unique<CcnProducer>("origin");
  origin->add_resource(name, *blob);
  NodeId c = w.add_node("client", std::move(client));
  NodeId a = w.add_node("access", std::move(access));
  NodeId k = w.add_node("core", std::move(core));
  NodeId o = w.add_node("origin", std::move(origin));
  w.connect(c, a, {}, FaceKind::LinkLayer);
  LinkId ak = w.connect(a, k, {}, FaceKind::LinkLayer);
  LinkId ko = w.connect(k, o, {}, FaceKind::LinkLayer);
  auto face_on = [&](NodeId node, LinkId link) {
    for (const auto& f : w.faces(node)) {
      if (f.link == link) return f.id;
    }
    fail(ErrorCode::NotFound, "missing face");
  };
  for (const Identifier& prefix : {name, rec.locator}) {
    access_ptr->fib().insert({prefix, Forward{face_on(a, ak)}, Origin::Static});
    core_ptr->fib().insert({prefix, Forward{face_on(k, ko)}, Origin::Static});
  }
  client_ptr->add_flow(name, {});
  const PullFlow& flow = client_ptr->flows().front().second;
  w.run_until([&] { return flow.done(); }, kFetchBudget);
  if (!flow.complete()) fail(ErrorCode::NotFound, "fetch of " + name.to_string() + " did not complete: " + flow.error());

  QueryResult out{rec, flow.assembled(), flow.finished() - flow.started()};
  if (sha256(out.content) != rec.content_hash) {
    fail(ErrorCode::IntegrityFailure, "content of " + name.to_string() + " does not match its on-chain hash");
  }
  return out;
}

}  // namespace minet
