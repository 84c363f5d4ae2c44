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

#include "minet/netsim.hpp"

#include <algorithm>
#include <sstream>

#include "minet/error.hpp"

namespace minet {

std::string_view to_string(FaceKind kind) noexcept {
  switch (kind) {
    case FaceKind::LinkLayer: return "link";
    case FaceKind::IpUdp: return "ipudp";
    case FaceKind::IpNative: return "ip";
  }
  return "?";
}

Tick NodeContext::now() const noexcept { return world_.now(); }
Rng& NodeContext::rng() { return world_.node_rng(id_); }
const std::vector<FaceInfo>& NodeContext::faces() const { return world_.faces(id_); }
void NodeContext::send(FaceId face, Message msg) { world_.send(id_, face, std::move(msg)); }
void NodeContext::set_timer(Tick delay, std::uint64_t token) { world_.set_timer(id_, delay, token); }

World::World(std::uint64_t seed) : seed_(seed), link_rng_(splitmix64(seed ^ 0x6c696e6b)) {}
World::~World() = default;

NodeId World::add_node(std::string name, std::unique_ptr<SimNode> node) {
  if (find_node(name)) fail(ErrorCode::ConfigError, "duplicate node name: " + name);
  NodeId id = static_cast<NodeId>(nodes_.size());
  NodeSlot slot{std::move(name), std::move(node), {}, Rng(splitmix64(seed_) ^ splitmix64(id + 1))};
  slot.faces.push_back(FaceInfo{kAppFace, FaceKind::LinkLayer, std::nullopt, id});
  nodes_.push_back(std::move(slot));
  return id;
}

LinkId World::connect(NodeId a, NodeId b, LinkParams params, FaceKind kind) {
  if (a >= nodes_.size() || b >= nodes_.size() || a == b) {
    fail(ErrorCode::InvalidArgument, "bad link endpoints");
  }
  if (kind == FaceKind::IpUdp) fail(ErrorCode::InvalidArgument, "links carry link-layer or native ip faces");
  if (params.capacity == 0) fail(ErrorCode::InvalidArgument, "link capacity must be positive");
  if (params.loss < 0 || params.loss > 1) fail(ErrorCode::InvalidArgument, "loss probability out of range");
  LinkId id = static_cast<LinkId>(links_.size());
  Link link;
  link.params = params;
  link.kind = kind;
  link.a = a;
  link.b = b;
  FaceId fa = static_cast<FaceId>(nodes_[a].faces.size());
  FaceId fb = static_cast<FaceId>(nodes_[b].faces.size());
  nodes_[a].faces.push_back(FaceInfo{fa, kind, id, b});
  nodes_[b].faces.push_back(FaceInfo{fb, kind, id, a});
  link.dir[0].to = b;
  link.dir[0].to_face = fb;
  link.dir[1].to = a;
  link.dir[1].to_face = fa;
  links_.push_back(std::move(link));
  return id;
}

FaceId World::add_virtual_face(NodeId node, FaceKind kind, NodeId peer) {
  auto& faces = nodes_.at(node).faces;
  FaceId id = static_cast<FaceId>(faces.size());
  faces.push_back(FaceInfo{id, kind, std::nullopt, peer});
  return id;
}

std::optional<NodeId> World::find_node(std::string_view name) const {
  for (NodeId i = 0; i < nodes_.size(); ++i) {
    if (nodes_[i].name == name) return i;
  }
  return std::nullopt;
}

const LinkStats& World::link_stats(LinkId id, bool forward) const { return links_.at(id).dir[forward ? 0 : 1].stats; }

std::pair<NodeId, NodeId> World::link_ends(LinkId id) const { return {links_.at(id).a, links_.at(id).b}; }

void World::start() {
  if (started_) return;
  started_ = true;
  for (NodeId i = 0; i < nodes_.size(); ++i) {
    NodeContext ctx(*this, i);
    nodes_[i].impl->start(ctx);
  }
}

void World::send(NodeId from, FaceId face, Message msg) {
  const auto& faces = nodes_.at(from).faces;
  if (face >= faces.size() || !faces[face].link) {
    fail(ErrorCode::InvalidArgument, "send on a face without a link: " + nodes_[from].name + "#" + std::to_string(face));
  }
  Link& link = links_[*faces[face].link];
  Direction& d = link.dir[link.a == from ? 0 : 1];
  MessageForm form = form_of(msg);
  (form == MessageForm::Ccn ? d.stats.ccn_messages : d.stats.ip_messages)++;
  bool violation = (link.kind == FaceKind::LinkLayer && form == MessageForm::Ip) ||
                   (link.kind == FaceKind::IpNative && form == MessageForm::Ccn);
  if (violation) d.stats.regime_violations++;
  std::size_t size = wire_size(msg);
  d.stats.sent++;
  d.stats.bytes_sent += size;
  sent_++;
  d.queue.push_back(InFlight{std::move(msg), size, size});
}

void World::set_timer(NodeId node, Tick delay, std::uint64_t token) {
  Event e;
  e.tick = now_ + std::max<Tick>(delay, 1);
  e.node = node;
  e.is_timer = true;
  e.token = token;
  push(std::move(e));
}

void World::push(Event e) {
  e.seq = next_seq_++;
  events_.push(std::move(e));
}

void World::transmit() {
  for (auto& link : links_) {
    for (auto& d : link.dir) {
      std::uint64_t budget = link.params.capacity;
      std::uint64_t used = 0;
      while (budget > 0 && !d.queue.empty()) {
        InFlight& head = d.queue.front();
        std::uint64_t take = std::min<std::uint64_t>(budget, head.remaining);
        head.remaining -= take;
        budget -= take;
        used += take;
        if (head.remaining > 0) break;
        // Draw jitter and loss for every message so the random stream does
        // not depend on outcomes.
        Tick jitter = link.params.jitter ? link_rng_.below(link.params.jitter + 1) : 0;
        bool lost = link.params.loss > 0 && link_rng_.chance(link.params.loss);
        if (lost) {
          d.stats.lost++;
          lost_++;
        } else {
          Tick at = now_ + link.params.latency + jitter;
          if (!link.params.reorder) at = std::max(at, d.last_delivery);
          d.last_delivery = std::max(at, d.last_delivery);
          Event e;
          e.tick = at;
          e.node = d.to;
          e.face = d.to_face;
          e.msg = std::make_shared<Message>(std::move(head.msg));
          scheduled_++;
          push(std::move(e));
        }
        d.queue.pop_front();
      }
      d.stats.bytes_transmitted += used;
      d.stats.max_bytes_per_tick = std::max(d.stats.max_bytes_per_tick, used);
    }
  }
}

void World::step() {
  start();
  ++now_;
  transmit();
  while (!events_.empty() && events_.top().tick <= now_) {
    Event e = events_.top();
    events_.pop();
    NodeContext ctx(*this, e.node);
    if (e.is_timer) {
      nodes_[e.node].impl->on_timer(ctx, e.token);
    } else {
      scheduled_--;
      delivered_++;
      // Credit the delivering link direction.
      const auto& face = nodes_[e.node].faces[e.face];
      Link& link = links_[*face.link];
      link.dir[link.b == e.node ? 0 : 1].stats.delivered++;
      nodes_[e.node].impl->on_message(ctx, e.face, std::move(*e.msg));
    }
  }
  for (NodeId i = 0; i < nodes_.size(); ++i) {
    NodeContext ctx(*this, i);
    nodes_[i].impl->on_tick(ctx);
  }
}

void World::run_for(Tick ticks) {
  for (Tick i = 0; i < ticks; ++i) step();
}

World::Conservation World::conservation() const {
  Conservation c;
  c.sent = sent_;
  c.delivered = delivered_;
  c.lost = lost_;
  c.queued = scheduled_;
  for (const auto& link : links_) {
    for (const auto& d : link.dir) c.queued += d.queue.size();
  }
  return c;
}

std::string World::metrics_csv() const {
  std::vector<std::string> rows;
  auto row = [&rows](const std::string& scope, std::string_view name, std::uint64_t v) {
    rows.push_back(scope + "," + std::string(name) + "," + std::to_string(v));
  };
  for (const auto& n : nodes_) {
    Counters c;
    n.impl->report(c);
    for (const auto& [k, v] : c) row("node:" + n.name, k, v);
  }
  for (const auto& link : links_) {
    for (int i = 0; i < 2; ++i) {
      const auto& s = link.dir[i].stats;
      std::string scope = "link:" + nodes_[i == 0 ? link.a : link.b].name + ">" + nodes_[i == 0 ? link.b : link.a].name;
      row(scope, "sent", s.sent);
      row(scope, "delivered", s.delivered);
      row(scope, "lost", s.lost);
      row(scope, "bytes_sent", s.bytes_sent);
      row(scope, "bytes_transmitted", s.bytes_transmitted);
      row(scope, "max_bytes_per_tick", s.max_bytes_per_tick);
      row(scope, "ccn_messages", s.ccn_messages);
      row(scope, "ip_messages", s.ip_messages);
      row(scope, "regime_violations", s.regime_violations);
    }
  }
  auto c = conservation();
  row("world", "tick", now_);
  row("world", "sent", c.sent);
  row("world", "delivered", c.delivered);
  row("world", "lost", c.lost);
  row("world", "queued", c.queued);
  std::sort(rows.begin(), rows.end());
  std::string out = "scope,name,value\n";
  for (const auto& r : rows) out += r + "\n";
  return out;
}

}  // namespace minet
