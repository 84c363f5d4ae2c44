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

#include "minet/mir_node.hpp"

#include <algorithm>
#include <set>

#include "minet/error.hpp"
#include "minet/tlv.hpp"

namespace minet {

// --- ContentStore ------------------------------------------------------------

void ContentStore::insert(const DataPacket& data) {
  if (capacity_ == 0) return;
  if (auto it = index_.find(data.name); it != index_.end()) {
    *it->second = data;
    lru_.splice(lru_.begin(), lru_, it->second);
    return;
  }
  if (index_.size() >= capacity_) {
    index_.erase(lru_.back().name);
    lru_.pop_back();
    evictions_++;
  }
  lru_.push_front(data);
  index_.emplace(data.name, lru_.begin());
}

const DataPacket* ContentStore::find(const Identifier& name) {
  auto it = index_.lower_bound(name);
  if (it == index_.end() || !covers(name, it->first)) return nullptr;
  lru_.splice(lru_.begin(), lru_, it->second);
  return &*it->second;
}

std::vector<Identifier> ContentStore::names_by_recency() const {
  std::vector<Identifier> out;
  out.reserve(lru_.size());
  for (const auto& d : lru_) out.push_back(d.name);
  return out;
}

// --- Pit -----------------------------------------------------------------------

Pit::Entry* Pit::find(const Identifier& name) {
  auto it = entries_.find(name);
  return it == entries_.end() ? nullptr : &it->second;
}

std::pair<Pit::Entry*, bool> Pit::insert(const InterestPacket& interest, FaceId face, Tick expiry) {
  auto [it, inserted] = entries_.try_emplace(interest.name);
  Entry& e = it->second;
  if (inserted) e.interest = interest;
  bool have = std::any_of(e.in.begin(), e.in.end(), [&](const InRecord& r) { return r.face == face; });
  if (!have) e.in.push_back(InRecord{face, interest.nonce});
  e.expiry = std::max(e.expiry, expiry);
  return {&e, !inserted};
}

std::vector<Identifier> Pit::matching(const Identifier& data_name) const {
  std::vector<Identifier> out;
  if (!data_name.is_hierarchical()) {
    if (entries_.count(data_name)) out.push_back(data_name);
    return out;
  }
  for (std::size_t n = data_name.size(); n >= 1; --n) {
    Identifier p = n == data_name.size() ? data_name : data_name.prefix(n);
    if (entries_.count(p)) out.push_back(std::move(p));
  }
  return out;
}

std::size_t Pit::purge(Tick now) {
  std::size_t removed = 0;
  for (auto it = entries_.begin(); it != entries_.end();) {
    if (it->second.expiry <= now) {
      it = entries_.erase(it);
      ++removed;
    } else {
      ++it;
    }
  }
  return removed;
}

std::optional<Tick> Pit::earliest_expiry() const {
  std::optional<Tick> best;
  for (const auto& [_, e] : entries_) {
    if (!best || e.expiry < *best) best = e.expiry;
  }
  return best;
}

// --- NonceWindows ----------------------------------------------------------------

void NonceWindows::record(FaceId face, std::uint64_t nonce) {
  if (window_ == 0) return;
  Ring& ring = rings_[face];
  if (ring.slots.size() < window_) {
    ring.slots.push_back(nonce);
  } else {
    std::uint64_t old = ring.slots[ring.next];
    auto it = counts_.find(old);
    if (--it->second == 0) counts_.erase(it);
    ring.slots[ring.next] = nonce;
    ring.next = (ring.next + 1) % window_;
  }
  counts_[nonce]++;
}

// --- Domain hierarchy ------------------------------------------------------------

std::string_view to_string(DomainRole role) noexcept {
  switch (role) {
    case DomainRole::TopLevel: return "top-level";
    case DomainRole::Supervisory: return "supervisory";
    case DomainRole::Edge: return "edge";
  }
  return "?";
}

void DomainHierarchy::add(std::string id, Identifier domain_path, std::optional<std::string> parent) {
  if (nodes_.count(id)) fail(ErrorCode::ConfigError, "duplicate domain node: " + id);
  if (!domain_path.is_hierarchical() || domain_path.size() == 0) {
    fail(ErrorCode::ConfigError, "domain path must be hierarchical: " + domain_path.to_string());
  }
  DomainNode n;
  n.id = id;
  n.domain_path = std::move(domain_path);
  if (parent) {
    auto it = nodes_.find(*parent);
    if (it == nodes_.end()) fail(ErrorCode::ConfigError, "unknown parent domain node: " + *parent);
    DomainNode& p = it->second;
    if (!covers(p.domain_path, n.domain_path) || p.domain_path.size() >= n.domain_path.size()) {
      fail(ErrorCode::ConfigError, "domain " + n.domain_path.to_string() + " does not extend parent " +
                                       p.domain_path.to_string());
    }
    for (const auto& sib : p.children) {
      const auto& sp = nodes_.at(sib).domain_path;
      if (covers(sp, n.domain_path) || covers(n.domain_path, sp)) {
        fail(ErrorCode::ConfigError, "overlapping sibling domains under " + *parent);
      }
    }
    p.children.push_back(id);
    if (p.role == DomainRole::Edge) p.role = DomainRole::Supervisory;
    n.parent = parent;
    n.role = DomainRole::Edge;
  } else {
    if (!top_.empty()) fail(ErrorCode::ConfigError, "more than one top-level domain node");
    top_ = id;
    n.role = DomainRole::TopLevel;
  }
  nodes_.emplace(std::move(id), std::move(n));
}

const DomainNode& DomainHierarchy::node(std::string_view id) const {
  auto it = nodes_.find(std::string(id));
  if (it == nodes_.end()) fail(ErrorCode::NotFound, "unknown domain node: " + std::string(id));
  return it->second;
}

DomainNode& DomainHierarchy::node(std::string_view id) {
  return const_cast<DomainNode&>(static_cast<const DomainHierarchy&>(*this).node(id));
}

const std::string& DomainHierarchy::top_level() const {
  if (top_.empty()) fail(ErrorCode::ConfigError, "domain hierarchy has no top-level node");
  return top_;
}

std::vector<std::string> DomainHierarchy::ids() const {
  std::vector<std::string> out;
  for (const auto& [id, _] : nodes_) out.push_back(id);
  return out;
}

const std::string& DomainHierarchy::authority_for(const Identifier& name) const {
  const std::string* at = &top_level();
  if (!covers(nodes_.at(*at).domain_path, name)) return *at;
  for (;;) {
    const DomainNode& n = nodes_.at(*at);
    const std::string* next = nullptr;
    for (const auto& c : n.children) {
      if (covers(nodes_.at(c).domain_path, name)) next = &c;
    }
    if (!next) return *at;
    at = next;
  }
}

const std::string& DomainHierarchy::publish(const Identifier& name, const Identifier& locator) {
  const std::string& id = authority_for(name);
  nodes_.at(id).registry[name] = locator;
  return id;
}

std::optional<std::pair<Identifier, Identifier>> registry_lookup(const DomainNode& node, const Identifier& name) {
  if (!name.is_hierarchical()) return std::nullopt;
  for (std::size_t n = name.size(); n >= 1; --n) {
    auto it = node.registry.find(n == name.size() ? name : name.prefix(n));
    if (it != node.registry.end()) return std::make_pair(it->first, it->second);
  }
  return std::nullopt;
}

ResolutionStep resolution_step(const DomainHierarchy& h, std::string_view at, const Identifier& name) {
  const DomainNode& node = h.node(at);
  ResolutionStep step;
  if (auto hit = registry_lookup(node, name)) {
    step.kind = ResolutionStep::Kind::Found;
    step.published_name = hit->first;
    step.locator = hit->second;
    return step;
  }
  if (covers(node.domain_path, name)) {
    for (const auto& c : node.children) {
      if (covers(h.node(c).domain_path, name)) {
        step.kind = ResolutionStep::Kind::Down;
        step.next = c;
        return step;
      }
    }
    step.kind = ResolutionStep::Kind::NotFound;
    return step;
  }
  if (node.parent) {
    step.kind = ResolutionStep::Kind::Up;
    step.next = *node.parent;
    return step;
  }
  step.kind = ResolutionStep::Kind::NotFound;
  return step;
}

Resolution resolve_recursive(const DomainHierarchy& h, std::string_view start, const Identifier& name) {
  Resolution r;
  std::string at(start);
  for (;;) {
    if (std::find(r.visited.begin(), r.visited.end(), at) != r.visited.end()) {
      fail(ErrorCode::LoopDetected, "resolution revisits " + at);
    }
    r.visited.push_back(at);
    ResolutionStep step = resolution_step(h, at, name);
    switch (step.kind) {
      case ResolutionStep::Kind::Found:
        r.found = true;
        r.published_name = step.published_name;
        r.locator = step.locator;
        return r;
      case ResolutionStep::Kind::NotFound:
        return r;
      case ResolutionStep::Kind::Up:
      case ResolutionStep::Kind::Down:
        at = step.next;
        break;
    }
  }
}

// --- Control payloads --------------------------------------------------------------

namespace {

enum : std::uint8_t { kQuery = 0x40, kVisited = 0x41, kStatus = 0x42, kPublished = 0x43, kLocator = 0x44 };
enum : std::uint64_t { kStatusNotFound = 0, kStatusFound = 1, kStatusLoop = 2 };

const Identifier& control_root() {
  static const Identifier root = Identifier::content({"minctl", "resolve"});
  return root;
}

}  // namespace

Bytes encode(const ResolveRequest& r) {
  TlvWriter w;
  w.put(kQuery, r.query.to_string());
  for (const auto& v : r.visited) w.put(kVisited, v);
  return std::move(w).take();
}

ResolveRequest decode_resolve_request(ByteView data) {
  TlvReader rd(data);
  ResolveRequest r;
  r.query = parse_identifier(rd.expect(kQuery).as_string());
  while (!rd.done()) r.visited.push_back(rd.expect(kVisited).as_string());
  return r;
}

Bytes encode(const ResolveResponse& r) {
  TlvWriter w;
  w.put_u64(kStatus, r.found ? kStatusFound : r.loop ? kStatusLoop : kStatusNotFound);
  if (r.found) w.put(kPublished, r.published_name.to_string()).put(kLocator, r.locator.to_string());
  for (const auto& v : r.visited) w.put(kVisited, v);
  return std::move(w).take();
}

ResolveResponse decode_resolve_response(ByteView data) {
  TlvReader rd(data);
  ResolveResponse r;
  std::uint64_t status = rd.expect(kStatus).as_u64();
  r.found = status == kStatusFound;
  r.loop = status == kStatusLoop;
  if (r.found) {
    r.published_name = parse_identifier(rd.expect(kPublished).as_string());
    r.locator = parse_identifier(rd.expect(kLocator).as_string());
  }
  while (!rd.done()) r.visited.push_back(rd.expect(kVisited).as_string());
  return r;
}

Identifier node_locator(std::string_view node_name) { return Identifier::content({"node", std::string(node_name)}); }
Identifier tunnel_prefix(std::string_view gateway_name) {
  return Identifier::content({"tunnel", std::string(gateway_name)});
}

// --- MirRouter -----------------------------------------------------------------------

MirRouter::MirRouter(MirConfig config)
    : config_(std::move(config)),
      cs_(config_.cs_capacity),
      nonces_(config_.nonce_window),
      key_(keypair_from_label("node:" + config_.name)) {
  for (const char* c : {"interests_in", "interests_out", "data_in", "data_out", "cs_hits", "pit_aggregations",
                        "drops_hoplimit", "drops_duplicate", "unsolicited", "no_route", "pit_expired", "nacks_out",
                        "resolutions_started", "resolutions_found", "resolutions_failed", "control_in",
                        "dns_answers", "publication_hits", "other_dropped"}) {
    counters_[c] = 0;
  }
}

bool MirRouter::is_authority() const {
  return config_.domains && config_.authority.empty() && config_.domains->contains(config_.name);
}

void MirRouter::start(NodeContext&) {}

void MirRouter::on_message(NodeContext& ctx, FaceId face, Message msg) {
  if (auto* i = std::get_if<InterestPacket>(&msg)) {
    on_interest(ctx, face, std::move(*i));
  } else if (auto* d = std::get_if<DataPacket>(&msg)) {
    on_data(ctx, face, std::move(*d));
  } else {
    on_other(ctx, face, std::move(msg));
  }
}

void MirRouter::on_other(NodeContext&, FaceId, Message) { bump("other_dropped"); }

void MirRouter::on_tick(NodeContext& ctx) {
  if (auto earliest = pit_.earliest_expiry(); earliest && *earliest <= ctx.now()) {
    bump("pit_expired", pit_.purge(ctx.now()));
  }
  for (auto it = resolving_.begin(); it != resolving_.end();) {
    ResolutionTrace& t = traces_[it->second.trace];
    if (ctx.now() >= t.started + config_.pit_lifetime) {
      t.finished = ctx.now();
      bump("resolutions_failed");
      it = resolving_.erase(it);
    } else {
      ++it;
    }
  }
}

void MirRouter::report(Counters& out) const {
  out = counters_;
  out["cs_size"] = cs_.size();
  out["cs_evictions"] = cs_.evictions();
  out["pit_size"] = pit_.size();
  out["fib_entries"] = fib_.size();
}

void MirRouter::emit(NodeContext& ctx, FaceId face, Message msg) {
  const auto& faces = ctx.faces();
  if (face < faces.size() && !faces[face].link && face != kAppFace) {
    send_virtual(ctx, face, std::move(msg));
  } else {
    ctx.send(face, std::move(msg));
  }
}

void MirRouter::send_virtual(NodeContext&, FaceId, Message) { bump("no_route"); }

bool MirRouter::on_ip_interest(NodeContext&, FaceId, const InterestPacket&) { return false; }
bool MirRouter::on_tunnel_interest(NodeContext&, FaceId, const InterestPacket&) { return false; }
bool MirRouter::on_translate_to_ip(NodeContext&, FaceId, const InterestPacket&, const Identifier&) { return false; }

void MirRouter::reply(NodeContext& ctx, FaceId face, const DataPacket& data) {
  if (face == kAppFace) {
    on_local_data(ctx, data);
  } else {
    bump("data_out");
    emit(ctx, face, data);
  }
}

void MirRouter::nack(NodeContext& ctx, FaceId face, const Identifier& name, std::string_view reason) {
  DataPacket d;
  d.name = name;
  d.content_type = ContentType::Nack;
  d.payload.assign(reason.begin(), reason.end());
  sign_data(d, key_);
  bump("nacks_out");
  if (pit_.find(name)) {
    satisfy(ctx, d);
  } else {
    reply(ctx, face, d);
  }
}

void MirRouter::express(NodeContext& ctx, InterestPacket interest) { on_interest(ctx, kAppFace, std::move(interest)); }

void MirRouter::on_interest(NodeContext& ctx, FaceId face, InterestPacket interest) {
  bump("interests_in");
  if (interest.hop_limit == 0) {
    bump("drops_hoplimit");
    return;
  }
  if (nonces_.seen(interest.nonce)) {
    bump("drops_duplicate");
    return;
  }
  nonces_.record(face, interest.nonce);

  if (interest.forwarding_hint && *interest.forwarding_hint == node_locator(config_.name) &&
      covers(control_root(), interest.name)) {
    handle_resolve_request(ctx, face, interest);
    return;
  }

  switch (interest.name.kind()) {
    case IdKind::LegacyDomain: {
      auto it = config_.dns.find(interest.name);
      if (it == config_.dns.end()) {
        nack(ctx, face, interest.name, "dns: no such name");
        return;
      }
      DataPacket d;
      d.name = interest.name;
      d.content_type = ContentType::Locator;
      std::string answer = it->second.to_string();
      d.payload.assign(answer.begin(), answer.end());
      sign_data(d, key_);
      bump("dns_answers");
      reply(ctx, face, d);
      return;
    }
    case IdKind::Ip: {
      if (on_ip_interest(ctx, face, interest)) return;
      auto hit = fib_.longest_prefix_match(interest.name);
      if (hit && std::holds_alternative<Forward>(hit->action)) {
        pit_.insert(interest, face, ctx.now() + config_.pit_lifetime);
        forward(ctx, face, interest);
        return;
      }
      bump("no_route");
      nack(ctx, face, interest.name, "no route");
      return;
    }
    default:
      break;
  }

  if (const DataPacket* hit = cs_.find(interest.name)) {
    bump("cs_hits");
    DataPacket copy = *hit;
    reply(ctx, face, copy);
    return;
  }
  if (auto* entry = pit_.find(interest.name)) {
    pit_.insert(interest, face, ctx.now() + config_.pit_lifetime);
    bump("pit_aggregations");
    (void)entry;
    return;
  }
  if (interest.tunnel_payload && covers(tunnel_prefix(config_.name), interest.name)) {
    if (on_tunnel_interest(ctx, face, interest)) return;
  }

  if (is_authority()) {
    if (auto hit = registry_lookup(config_.domains->node(config_.name), interest.name)) {
      bump("publication_hits");
      interest.forwarding_hint = hit->second;
    }
  }
  if (auto hit = fib_.longest_prefix_match(interest.name)) {
    if (const auto* t = std::get_if<Translate>(&hit->action)) {
      if (t->target.kind() == IdKind::Ip) {
        if (on_translate_to_ip(ctx, face, interest, t->target)) return;
        bump("no_route");
        nack(ctx, face, interest.name, "no ip translation handler");
        return;
      }
      interest.forwarding_hint = fib_.translate(interest.name);
    }
  }
  pit_.insert(interest, face, ctx.now() + config_.pit_lifetime);
  auto hit = fib_.longest_prefix_match(interest.name);
  if ((hit && std::holds_alternative<Forward>(hit->action)) || interest.forwarding_hint) {
    forward(ctx, face, interest);
    return;
  }
  start_resolution(ctx, interest.name);
}

void MirRouter::forward(NodeContext& ctx, FaceId in_face, InterestPacket interest) {
  Pit::Entry* entry = pit_.find(interest.name);
  std::optional<FaceId> out;
  auto name_hit = fib_.longest_prefix_match(interest.name);
  if (name_hit && std::holds_alternative<Forward>(name_hit->action)) {
    out = std::get<Forward>(name_hit->action).face;
  } else if (interest.forwarding_hint) {
    if (covers(node_locator(config_.name), *interest.forwarding_hint)) {
      bump("no_route");
      nack(ctx, in_face, interest.name, "locator reached without producer");
      return;
    }
    auto hint_hit = fib_.longest_prefix_match(*interest.forwarding_hint);
    if (hint_hit && std::holds_alternative<Forward>(hint_hit->action)) out = std::get<Forward>(hint_hit->action).face;
  }
  if (!out) {
    bump("no_route");
    nack(ctx, in_face, interest.name, "no route");
    return;
  }
  if (entry) {
    entry->forwarded = true;
    entry->interest.forwarding_hint = interest.forwarding_hint;
  }
  interest.hop_limit = static_cast<std::uint8_t>(interest.hop_limit - 1);
  bump("interests_out");
  emit(ctx, *out, std::move(interest));
}

void MirRouter::on_data(NodeContext& ctx, FaceId, DataPacket data) {
  bump("data_in");
  auto names = pit_.matching(data.name);
  if (names.empty()) {
    bump("unsolicited");
    return;
  }
  satisfy(ctx, data);
}

void MirRouter::satisfy(NodeContext& ctx, const DataPacket& data) {
  auto names = pit_.matching(data.name);
  if (names.empty()) return;
  if (data.content_type == ContentType::Blob) cs_.insert(data);
  for (const auto& n : names) {
    Pit::Entry* e = pit_.find(n);
    if (!e) continue;
    std::vector<Pit::InRecord> in = std::move(e->in);
    pit_.erase(n);
    for (const auto& r : in) reply(ctx, r.face, data);
  }
}

void MirRouter::on_local_data(NodeContext& ctx, const DataPacket& data) {
  if (!covers(control_root(), data.name) || data.name.size() != 4 || data.name.components()[2] != config_.name) {
    return;
  }
  std::uint64_t reqid = 0;
  try {
    reqid = std::stoull(data.name.components()[3]);
  } catch (const std::exception&) {
    return;
  }
  ResolveResponse resp;
  try {
    resp = decode_resolve_response(data.payload);
  } catch (const Error&) {
    resp = ResolveResponse{};
  }
  if (auto it = relays_.find(reqid); it != relays_.end()) {
    Identifier upstream = it->second.upstream_request;
    relays_.erase(it);
    resp.visited.insert(resp.visited.begin(), config_.name);
    DataPacket d;
    d.name = upstream;
    d.content_type = resp.found ? ContentType::Locator : ContentType::Nack;
    d.payload = encode(resp);
    sign_data(d, key_);
    satisfy(ctx, d);
    return;
  }
  if (auto it = own_requests_.find(reqid); it != own_requests_.end()) {
    Identifier key = it->second;
    own_requests_.erase(it);
    auto w = resolving_.find(key);
    if (w == resolving_.end()) return;
    std::vector<std::string> visited = w->second.visited_prefix;
    visited.insert(visited.end(), resp.visited.begin(), resp.visited.end());
    finish_local_resolution(ctx, key, resp.found, resp.published_name, resp.locator, std::move(visited));
  }
}

void MirRouter::resolve(NodeContext& ctx, const Identifier& name) { start_resolution(ctx, name); }

void MirRouter::start_resolution(NodeContext& ctx, const Identifier& name) {
  Identifier key = strip_segment(name);
  auto [it, inserted] = resolving_.try_emplace(key);
  if (pit_.find(name)) it->second.waiting.push_back(name);
  if (!inserted) return;
  bump("resolutions_started");
  it->second.query = key;
  it->second.trace = traces_.size();
  traces_.push_back(ResolutionTrace{key, false, {}, {}, ctx.now(), 0});

  if (!config_.domains) {
    finish_local_resolution(ctx, key, false, {}, {}, {});
    return;
  }
  std::string target = config_.authority;
  std::vector<std::string> prefix;
  if (is_authority()) {
    prefix.push_back(config_.name);
    ResolutionStep step = resolution_step(*config_.domains, config_.name, key);
    if (step.kind == ResolutionStep::Kind::Found || step.kind == ResolutionStep::Kind::NotFound) {
      finish_local_resolution(ctx, key, step.kind == ResolutionStep::Kind::Found, step.published_name, step.locator,
                              prefix);
      return;
    }
    target = step.next;
  }
  if (target.empty()) {
    finish_local_resolution(ctx, key, false, {}, {}, prefix);
    return;
  }
  it->second.visited_prefix = prefix;
  std::uint64_t reqid = next_reqid_++;
  own_requests_[reqid] = key;
  send_resolve_request(ctx, target, key, prefix, reqid);
}

void MirRouter::send_resolve_request(NodeContext& ctx, const std::string& target, const Identifier& query,
                                     const std::vector<std::string>& visited, std::uint64_t reqid) {
  InterestPacket i;
  i.name = control_root().append(std::vector<std::string>{config_.name, std::to_string(reqid)});
  i.nonce = ctx.rng().next();
  i.forwarding_hint = node_locator(target);
  i.parameters = encode(ResolveRequest{query, visited});
  express(ctx, std::move(i));
}

void MirRouter::handle_resolve_request(NodeContext& ctx, FaceId face, const InterestPacket& interest) {
  bump("control_in");
  pit_.insert(interest, face, ctx.now() + config_.pit_lifetime);
  ResolveResponse resp;
  resp.visited.push_back(config_.name);
  auto respond = [&] {
    DataPacket d;
    d.name = interest.name;
    d.content_type = resp.found ? ContentType::Locator : ContentType::Nack;
    d.payload = encode(resp);
    sign_data(d, key_);
    satisfy(ctx, d);
  };
  if (!is_authority() || !interest.parameters) {
    respond();
    return;
  }
  ResolveRequest req;
  try {
    req = decode_resolve_request(*interest.parameters);
  } catch (const Error&) {
    respond();
    return;
  }
  if (std::find(req.visited.begin(), req.visited.end(), config_.name) != req.visited.end()) {
    resp.loop = true;
    respond();
    return;
  }
  ResolutionStep step = resolution_step(*config_.domains, config_.name, req.query);
  switch (step.kind) {
    case ResolutionStep::Kind::Found:
      resp.found = true;
      resp.published_name = step.published_name;
      resp.locator = step.locator;
      respond();
      return;
    case ResolutionStep::Kind::NotFound:
      respond();
      return;
    default: {
      std::uint64_t reqid = next_reqid_++;
      relays_[reqid] = Relay{interest.name};
      req.visited.push_back(config_.name);
      send_resolve_request(ctx, step.next, req.query, req.visited, reqid);
      return;
    }
  }
}

void MirRouter::finish_local_resolution(NodeContext& ctx, const Identifier& key, bool found,
                                        const Identifier& published, const Identifier& locator,
                                        std::vector<std::string> visited) {
  auto it = resolving_.find(key);
  if (it == resolving_.end()) return;
  ResolveWait wait = std::move(it->second);
  resolving_.erase(it);
  ResolutionTrace& t = traces_[wait.trace];
  t.found = found;
  t.locator = locator;
  t.visited = std::move(visited);
  t.finished = ctx.now();
  bump(found ? "resolutions_found" : "resolutions_failed");
  if (found) fib_.insert(HptFibEntry{published, Translate{locator}, Origin::Learned});
  for (const auto& name : wait.waiting) {
    Pit::Entry* e = pit_.find(name);
    if (!e || e->forwarded || e->in.empty()) continue;
    if (!found) {
      nack(ctx, e->in.front().face, name, "not found");
      continue;
    }
    InterestPacket i = e->interest;
    i.forwarding_hint = fib_.translate(name);
    forward(ctx, e->in.front().face, std::move(i));
  }
}

}  // namespace minet
