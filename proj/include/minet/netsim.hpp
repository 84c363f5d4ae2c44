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
#include <deque>
#include <map>
#include <memory>
#include <queue>
#include <string>
#include <vector>

#include "minet/packet.hpp"
#include "minet/rng.hpp"

namespace minet {

/// One tick is one millisecond of simulated time.
using Tick = std::uint64_t;
using NodeId = std::uint32_t;
using LinkId = std::uint32_t;
using FaceId = std::uint32_t;

/// Face 0 of every node is its local application face.
inline constexpr FaceId kAppFace = 0;

enum class FaceKind : std::uint8_t {
  LinkLayer,  // CCN frames directly on a simulated link
  IpUdp,      // virtual CCN-in-UDP face riding on the node's IP stack
  IpNative,   // raw IP side of a node
};

std::string_view to_string(FaceKind kind) noexcept;

struct LinkParams {
  std::uint64_t capacity = 12500;  // bytes per tick
  Tick latency = 2;
  double loss = 0.0;
  Tick jitter = 0;  // extra uniform delay in [0, jitter]
  /// Lets jitter reorder messages on one link direction.
  bool reorder = false;
};

struct FaceInfo {
  FaceId id = 0;
  FaceKind kind = FaceKind::LinkLayer;
  /// Link behind a physical face; virtual faces have none.
  std::optional<LinkId> link;
  NodeId peer = 0;
};

/// Named counters exported by a node. Ordered so dumps are stable.
using Counters = std::map<std::string, std::uint64_t>;

class World;

/// Handle a node uses to act on the world during a callback.
class NodeContext {
 public:
  NodeContext(World& world, NodeId id) : world_(world), id_(id) {}

  NodeId id() const noexcept { return id_; }
  Tick now() const noexcept;
  Rng& rng();
  const std::vector<FaceInfo>& faces() const;
  /// Queues `msg` on the link behind `face`. Virtual faces must be handled by
  /// the node itself.
  void send(FaceId face, Message msg);
  void set_timer(Tick delay, std::uint64_t token);
  World& world() noexcept { return world_; }

 private:
  World& world_;
  NodeId id_;
};

class SimNode {
 public:
  virtual ~SimNode() = default;

  virtual void start(NodeContext&) {}
  virtual void on_message(NodeContext& ctx, FaceId face, Message msg) = 0;
  virtual void on_timer(NodeContext&, std::uint64_t /*token*/) {}
  /// Called once per tick after message delivery.
  virtual void on_tick(NodeContext&) {}
  virtual void report(Counters&) const {}
};

struct LinkStats {
  std::uint64_t sent = 0;
  std::uint64_t delivered = 0;
  std::uint64_t lost = 0;
  std::uint64_t bytes_sent = 0;
  std::uint64_t bytes_transmitted = 0;
  std::uint64_t max_bytes_per_tick = 0;
  std::uint64_t ccn_messages = 0;
  std::uint64_t ip_messages = 0;
  std::uint64_t regime_violations = 0;
};

/// Deterministic discrete-event network simulator.
///
/// Each step advances the clock by one tick, then serializes queued bytes
/// onto every link direction (FIFO, at most `capacity` bytes per tick),
/// schedules completed messages for delivery after the link latency, fires
/// all events due at the new tick in (tick, insertion) order, and finally
/// calls every node's on_tick in node order.
class World {
 public:
  explicit World(std::uint64_t seed);
  ~World();
  World(const World&) = delete;
  World& operator=(const World&) = delete;

  NodeId add_node(std::string name, std::unique_ptr<SimNode> node);
  /// Connects two nodes; returns the link id. The face kind is LinkLayer or
  /// IpNative and applies to both ends.
  LinkId connect(NodeId a, NodeId b, LinkParams params, FaceKind kind);
  /// Adds a face with no link behind it (for example a CCN-over-UDP tunnel).
  FaceId add_virtual_face(NodeId node, FaceKind kind, NodeId peer);

  /// Calls start() on every node in id order. Idempotent.
  void start();
  void step();
  void run_for(Tick ticks);
  /// Steps until `done()` or the tick budget runs out; returns whether
  /// `done()` became true.
  template <typename Pred>
  bool run_until(Pred done, Tick max_ticks) {
    start();
    for (Tick i = 0; i < max_ticks; ++i) {
      if (done()) return true;
      step();
    }
    return done();
  }

  Tick now() const noexcept { return now_; }
  std::size_t node_count() const noexcept { return nodes_.size(); }
  std::size_t link_count() const noexcept { return links_.size(); }
  SimNode& node(NodeId id) { return *nodes_.at(id).impl; }
  const SimNode& node(NodeId id) const { return *nodes_.at(id).impl; }
  const std::string& node_name(NodeId id) const { return nodes_.at(id).name; }
  std::optional<NodeId> find_node(std::string_view name) const;
  const std::vector<FaceInfo>& faces(NodeId id) const { return nodes_.at(id).faces; }
  const LinkStats& link_stats(LinkId id, bool forward) const;
  std::pair<NodeId, NodeId> link_ends(LinkId id) const;
  const LinkParams& link_params(LinkId id) const { return links_.at(id).params; }
  FaceKind link_kind(LinkId id) const { return links_.at(id).kind; }

  struct Conservation {
    std::uint64_t sent = 0;
    std::uint64_t delivered = 0;
    std::uint64_t lost = 0;
    std::uint64_t queued = 0;  // waiting on a link or scheduled for delivery
    bool holds() const noexcept { return sent == delivered + lost + queued; }
  };
  Conservation conservation() const;

  /// CSV "scope,name,value" with node counters, per-link statistics and
  /// world totals, sorted so equal runs give equal bytes.
  std::string metrics_csv() const;

  // Used by NodeContext.
  void send(NodeId from, FaceId face, Message msg);
  void set_timer(NodeId node, Tick delay, std::uint64_t token);
  Rng& node_rng(NodeId id) { return nodes_.at(id).rng; }

 private:
  struct NodeSlot {
    std::string name;
    std::unique_ptr<SimNode> impl;
    std::vector<FaceInfo> faces;
    Rng rng;
  };
  struct InFlight {
    Message msg;
    std::size_t size = 0;
    std::size_t remaining = 0;
  };
  struct Direction {
    NodeId to = 0;
    FaceId to_face = 0;
    std::deque<InFlight> queue;
    Tick last_delivery = 0;
    LinkStats stats;
  };
  struct Link {
    LinkParams params;
    FaceKind kind = FaceKind::LinkLayer;
    NodeId a = 0, b = 0;
    Direction dir[2];  // dir[0]: a -> b
  };
  struct Event {
    Tick tick = 0;
    std::uint64_t seq = 0;
    NodeId node = 0;
    bool is_timer = false;
    FaceId face = 0;
    std::uint64_t token = 0;
    std::shared_ptr<Message> msg;
  };
  struct Later {
    bool operator()(const Event& x, const Event& y) const {
      return x.tick != y.tick ? x.tick > y.tick : x.seq > y.seq;
    }
  };

  void transmit();
  void push(Event e);

  std::uint64_t seed_;
  Rng link_rng_;
  Tick now_ = 0;
  bool started_ = false;
  std::uint64_t next_seq_ = 0;
  std::vector<NodeSlot> nodes_;
  std::vector<Link> links_;
  std::priority_queue<Event, std::vector<Event>, Later> events_;
  std::uint64_t sent_ = 0, delivered_ = 0, lost_ = 0, scheduled_ = 0;
};

}  // namespace minet
