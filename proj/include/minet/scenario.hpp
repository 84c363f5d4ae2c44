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
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "minet/interwork.hpp"
#include "minet/mir_node.hpp"
#include "minet/netsim.hpp"

namespace minet {

enum class NodeType : std::uint8_t { Router, Gateway, Producer, Consumer, IpHost, IpRouter };
std::string_view to_string(NodeType t) noexcept;

enum class ScenarioKind : std::uint8_t { IpCcnIp, IpCcn, CcnIp, CcnIpCcn, CcnCcn };
std::string_view to_string(ScenarioKind k) noexcept;
ScenarioKind parse_scenario_kind(std::string_view text);
/// Gateways a flow of this kind must cross that actually translate.
int expected_translations(ScenarioKind k) noexcept;

struct NodeSpec {
  std::string name;
  NodeType type = NodeType::Router;
  std::string site;
  std::optional<Identifier> ip;
  std::string authority;
  int line = 0;
};

struct LinkSpec {
  std::string a, b;
  FaceKind kind = FaceKind::LinkLayer;
  LinkParams params;
  int line = 0;
};

struct DomainSpec {
  Identifier path;
  std::string node;
  std::optional<Identifier> parent;
  int line = 0;
};

struct TranslateSpec {
  std::string gateway;
  Identifier from;
  Identifier to;
  int line = 0;
};

struct TunnelSpec {
  std::string a, b;
  int line = 0;
};

struct RouteSpec {
  std::string node;
  Identifier prefix;
  std::string via;
  int line = 0;
};

struct ResourceSpec {
  std::string id;
  Identifier name;
  std::uint64_t size = 0;
  std::string host;
  std::optional<Identifier> locator;
  bool publish = true;
  int line = 0;
};

struct FlowSpec {
  std::string id;
  ScenarioKind kind = ScenarioKind::CcnCcn;
  std::string consumer;
  std::string resource;
  std::optional<Identifier> target;
  Tick start = 1;
  std::size_t window = 32;
  int line = 0;
};

/// Parsed scenario configuration. Text format: '#' comments, section headers
/// [nodes] [links] [domains] [gateways] [routes] [dns] [workloads], one
/// whitespace-separated record per line with key=value attributes.
struct NetworkConfig {
  std::vector<NodeSpec> nodes;
  std::vector<LinkSpec> links;
  std::vector<DomainSpec> domains;
  std::vector<TranslateSpec> translations;
  std::vector<TunnelSpec> tunnels;
  std::vector<RouteSpec> routes;
  std::map<Identifier, Identifier> dns;
  std::vector<ResourceSpec> resources;
  std::vector<FlowSpec> flows;

  const NodeSpec& node(std::string_view name) const;
  const NodeSpec* find_node(std::string_view name) const;
  const ResourceSpec& resource(std::string_view id) const;
  const FlowSpec& flow(std::string_view id) const;
  std::size_t site_count() const;
  /// Deepest level of the domain tree (top-level = 1).
  int domain_levels() const;
};

/// Throws ConfigError("line N: ...") on malformed or inconsistent input.
NetworkConfig parse_network_config(std::istream& in);
NetworkConfig load_network_config(const std::string& path);

/// Deterministic content of a resource.
Bytes resource_content(const ResourceSpec& r, std::uint64_t seed);

/// A built simulation: the world plus name-based access to its nodes.
struct Network {
  std::unique_ptr<World> world;
  std::shared_ptr<DomainHierarchy> domains;
  NetworkConfig config;
  std::map<std::string, NodeId> ids;
  std::map<std::string, Digest> published_hashes;  // resource id -> hash

  NodeId id(std::string_view name) const;
  template <typename T>
  T& as(std::string_view name) {
    auto* p = dynamic_cast<T*>(&world->node(id(name)));
    if (!p) throw std::bad_cast();
    return *p;
  }
  /// Routers and gateways.
  MirRouter* router(std::string_view name);
};

/// Instantiates nodes, links, tunnels and the domain hierarchy, installs
/// shortest-path CCN and IP routes plus the configured translations, loads
/// resources and publishes them. Only flows listed in `flows` are attached
/// to their consumers.
Network build_topology(const NetworkConfig& config, std::uint64_t seed, const std::vector<std::string>& flows = {});

struct LinkUtilization {
  std::string link;  // "a>b"
  std::uint64_t bytes = 0;
  double utilization = 0;  // bytes / (capacity * ticks)
};

struct TransferReport {
  std::string scenario;
  std::string flow;
  std::uint64_t bytes = 0;
  double seconds = 0;
  double mean_rate = 0;  // bytes per simulated second
  std::uint64_t translations = 0;
  std::uint64_t retransmissions = 0;
  bool complete = false;
  Digest published_hash;
  Digest delivered_hash;
  std::uint64_t regime_violations = 0;
  Tick start_tick = 0;
  Tick end_tick = 0;
  std::vector<std::pair<Tick, std::uint64_t>> arrivals;
  std::vector<LinkUtilization> links;

  bool hash_ok() const noexcept { return complete && published_hash == delivered_hash; }
};

std::string transfer_csv_header();
std::string to_csv_row(const TransferReport& r);

struct RunResult {
  std::vector<TransferReport> reports;
  std::string metrics_csv;
  Tick ticks = 0;
};

/// Runs the listed flows concurrently until all finish or `max_ticks` pass.
/// Throws ScenarioUnsatisfiable when a flow's endpoints or gateways cannot
/// realise its scenario kind, TransferIncomplete when a flow does not finish.
RunResult run_flows(const NetworkConfig& config, const std::vector<std::string>& flows, std::uint64_t seed,
                    Tick max_ticks = 2'000'000);

/// Runs the first flow of `kind` found in the configuration.
TransferReport run_scenario(ScenarioKind kind, const NetworkConfig& config, std::uint64_t seed,
                            std::string* metrics_csv = nullptr);

/// Goodput of several concurrent flows over the interval where all of them
/// were active, in bytes per tick.
struct OverlapRates {
  Tick from = 0, to = 0;
  std::vector<double> per_flow;
  double combined = 0;
};
OverlapRates overlap_rates(const std::vector<TransferReport>& reports);

}  // namespace minet
