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
#include <list>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "minet/hpt_fib.hpp"
#include "minet/netsim.hpp"
#include "minet/packet.hpp"

namespace minet {

/// LRU-bounded cache of Data packets keyed by name.
class ContentStore {
 public:
  explicit ContentStore(std::size_t capacity = 1024) : capacity_(capacity) {}

  void insert(const DataPacket& data);
  /// Data whose name equals `name` or extends it; marks it most recently used.
  const DataPacket* find(const Identifier& name);
  bool contains(const Identifier& name) const { return index_.count(name) != 0; }
  std::size_t size() const noexcept { return index_.size(); }
  std::size_t capacity() const noexcept { return capacity_; }
  std::uint64_t evictions() const noexcept { return evictions_; }
  /// Names from most to least recently used.
  std::vector<Identifier> names_by_recency() const;

 private:
  using Lru = std::list<DataPacket>;
  std::size_t capacity_;
  Lru lru_;  // front = most recent
  std::map<Identifier, Lru::iterator> index_;
  std::uint64_t evictions_ = 0;
};

/// Pending Interest Table.
class Pit {
 public:
  struct InRecord {
    FaceId face = 0;
    std::uint64_t nonce = 0;
  };
  struct Entry {
    InterestPacket interest;
    std::vector<InRecord> in;
    Tick expiry = 0;
    bool forwarded = false;
  };

  Entry* find(const Identifier& name);
  /// Creates the entry if absent. Returns the entry and whether it existed.
  std::pair<Entry*, bool> insert(const InterestPacket& interest, FaceId face, Tick expiry);
  bool erase(const Identifier& name) { return entries_.erase(name) != 0; }
  /// Names of entries an incoming Data with `name` satisfies.
  std::vector<Identifier> matching(const Identifier& data_name) const;
  /// Drops entries whose expiry is at or before `now`; returns the count.
  std::size_t purge(Tick now);
  std::size_t size() const noexcept { return entries_.size(); }
  std::optional<Tick> earliest_expiry() const;

 private:
  std::map<Identifier, Entry> entries_;
};

/// Remembers the last `window` nonces seen on each face; a nonce counts as a
/// duplicate if any face's window holds it.
class NonceWindows {
 public:
  explicit NonceWindows(std::size_t window = 1u << 16) : window_(window) {}

  bool seen(std::uint64_t nonce) const { return counts_.count(nonce) != 0; }
  void record(FaceId face, std::uint64_t nonce);

 private:
  struct Ring {
    std::vector<std::uint64_t> slots;
    std::size_t next = 0;
  };
  std::size_t window_;
  std::map<FaceId, Ring> rings_;
  std::unordered_map<std::uint64_t, std::uint32_t> counts_;
};

// --- Domain hierarchy and recursive resolution -----------------------------

enum class DomainRole : std::uint8_t { TopLevel, Supervisory, Edge };
std::string_view to_string(DomainRole role) noexcept;

struct DomainNode {
  std::string id;
  Identifier domain_path;
  DomainRole role = DomainRole::Edge;
  std::optional<std::string> parent;
  std::vector<std::string> children;
  /// Published name -> locator, for publications this node is authoritative for.
  std::map<Identifier, Identifier> registry;
};

class DomainHierarchy {
 public:
  /// Adds a domain authority; the parent must already exist. Roles are
  /// derived: no parent is TopLevel, a node with children is Supervisory.
  void add(std::string id, Identifier domain_path, std::optional<std::string> parent);
  const DomainNode& node(std::string_view id) const;
  DomainNode& node(std::string_view id);
  bool contains(std::string_view id) const { return nodes_.count(std::string(id)) != 0; }
  const std::string& top_level() const;
  std::vector<std::string> ids() const;
  std::size_t size() const noexcept { return nodes_.size(); }
  /// Deepest node whose domain path covers `name`; the top-level node when
  /// none does.
  const std::string& authority_for(const Identifier& name) const;
  /// Records the publication at its authority; returns that node id.
  const std::string& publish(const Identifier& name, const Identifier& locator);

 private:
  std::map<std::string, DomainNode> nodes_;
  std::string top_;
};

struct ResolutionStep {
  enum class Kind : std::uint8_t { Found, NotFound, Up, Down };
  Kind kind = Kind::NotFound;
  std::string next;  // Up / Down
  Identifier published_name;  // Found
  Identifier locator;         // Found
};

/// Longest registered name at `node` that is a prefix of `name`.
std::optional<std::pair<Identifier, Identifier>> registry_lookup(const DomainNode& node, const Identifier& name);

/// One hop of hierarchical resolution at `at`: a local registry hit resolves;
/// a node whose domain covers the name descends to the covering child (or
/// fails if none covers); any other node escalates to its parent, and the
/// top-level node fails.
ResolutionStep resolution_step(const DomainHierarchy& h, std::string_view at, const Identifier& name);

struct Resolution {
  bool found = false;
  Identifier published_name;
  Identifier locator;
  std::vector<std::string> visited;
};

/// Runs resolution_step from `start` until it resolves or fails. Throws
/// LoopDetected if a node would be visited twice.
Resolution resolve_recursive(const DomainHierarchy& h, std::string_view start, const Identifier& name);

// --- Router ----------------------------------------------------------------

struct MirConfig {
  std::string name;
  std::size_t cs_capacity = 1024;
  Tick pit_lifetime = 4000;
  std::size_t nonce_window = 1u << 16;
  /// Domain node this router escalates unresolved names to; empty when the
  /// router is itself a domain authority.
  std::string authority;
  std::shared_ptr<DomainHierarchy> domains;
  /// Stub legacy DNS table: domain -> answer.
  std::map<Identifier, Identifier> dns;
};

/// Locator prefix under which every CCN-capable node is routable.
Identifier node_locator(std::string_view node_name);
/// Prefix a gateway accepts tunnelled IP datagrams under.
Identifier tunnel_prefix(std::string_view gateway_name);

struct ResolutionTrace {
  Identifier query;
  bool found = false;
  Identifier locator;
  std::vector<std::string> visited;
  Tick started = 0;
  Tick finished = 0;
};

/// Multi-identifier router: CS / PIT / publication table / HPT-FIB pipeline
/// with hierarchical resolution through control Interests.
class MirRouter : public SimNode {
 public:
  explicit MirRouter(MirConfig config);

  void start(NodeContext& ctx) override;
  void on_message(NodeContext& ctx, FaceId face, Message msg) override;
  void on_tick(NodeContext& ctx) override;
  void report(Counters& out) const override;

  HptFib& fib() noexcept { return fib_; }
  const HptFib& fib() const noexcept { return fib_; }
  ContentStore& cs() noexcept { return cs_; }
  const Pit& pit() const noexcept { return pit_; }
  const MirConfig& config() const noexcept { return config_; }
  const Counters& counters() const noexcept { return counters_; }
  const std::vector<ResolutionTrace>& resolutions() const noexcept { return traces_; }
  bool is_authority() const;

  /// Injects an Interest as if issued by a local application; the answer
  /// arrives through on_local_data.
  void express(NodeContext& ctx, InterestPacket interest);
  /// Resolves `name` through the domain hierarchy without an Interest
  /// waiting on it; the outcome is appended to resolutions().
  void resolve(NodeContext& ctx, const Identifier& name);

 protected:
  virtual void on_interest(NodeContext& ctx, FaceId face, InterestPacket interest);
  virtual void on_data(NodeContext& ctx, FaceId face, DataPacket data);
  /// Data for a PIT entry that a local application requested.
  virtual void on_local_data(NodeContext& ctx, const DataPacket& data);
  /// Non-CCN messages (IP datagrams, frames). Default: counted and dropped.
  virtual void on_other(NodeContext& ctx, FaceId face, Message msg);
  /// Sends on `face`; virtual faces are delegated to send_virtual.
  void emit(NodeContext& ctx, FaceId face, Message msg);
  virtual void send_virtual(NodeContext& ctx, FaceId face, Message msg);
  /// Hooks for the interworking gateway. Return true when handled.
  virtual bool on_ip_interest(NodeContext& ctx, FaceId face, const InterestPacket& interest);
  virtual bool on_tunnel_interest(NodeContext& ctx, FaceId face, const InterestPacket& interest);
  virtual bool on_translate_to_ip(NodeContext& ctx, FaceId face, const InterestPacket& interest,
                                  const Identifier& target);

  /// Sends `data` to every in-record of matching PIT entries.
  void satisfy(NodeContext& ctx, const DataPacket& data);
  void nack(NodeContext& ctx, FaceId face, const Identifier& name, std::string_view reason);
  /// Delivers `data` on `face`, or to on_local_data for the app face.
  void reply(NodeContext& ctx, FaceId face, const DataPacket& data);
  void bump(const char* counter, std::uint64_t by = 1) { counters_[counter] += by; }

  MirConfig config_;
  HptFib fib_;
  ContentStore cs_;
  Pit pit_;
  NonceWindows nonces_;
  Counters counters_;
  KeyPair key_;

 private:
  void forward(NodeContext& ctx, FaceId in_face, InterestPacket interest);
  void start_resolution(NodeContext& ctx, const Identifier& name);
  void handle_resolve_request(NodeContext& ctx, FaceId face, const InterestPacket& interest);
  void send_resolve_request(NodeContext& ctx, const std::string& target, const Identifier& query,
                            const std::vector<std::string>& visited, std::uint64_t reqid);
  void finish_local_resolution(NodeContext& ctx, const Identifier& key, bool found, const Identifier& published,
                               const Identifier& locator, std::vector<std::string> visited);

  struct ResolveWait {
    Identifier query;
    std::vector<Identifier> waiting;  // PIT names parked on this resolution
    std::size_t trace = 0;
    std::vector<std::string> visited_prefix;
  };
  struct Relay {
    Identifier upstream_request;  // control Interest we must answer
  };
  std::uint64_t next_reqid_ = 1;
  std::map<Identifier, ResolveWait> resolving_;             // keyed by stripped query
  std::map<std::uint64_t, Identifier> own_requests_;        // reqid -> resolving_ key
  std::map<std::uint64_t, Relay> relays_;                   // reqid -> upstream request
  std::vector<ResolutionTrace> traces_;
};

// Resolution control payloads.
struct ResolveRequest {
  Identifier query;
  std::vector<std::string> visited;
};
struct ResolveResponse {
  bool found = false;
  bool loop = false;
  Identifier published_name;
  Identifier locator;
  std::vector<std::string> visited;
};
Bytes encode(const ResolveRequest& r);
ResolveRequest decode_resolve_request(ByteView data);
Bytes encode(const ResolveResponse& r);
ResolveResponse decode_resolve_response(ByteView data);

}  // namespace minet
