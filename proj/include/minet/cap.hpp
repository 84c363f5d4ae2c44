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
#include <optional>
#include <string>
#include <vector>

namespace minet::cap {

enum class Role : std::uint8_t { Participant, Relay };

struct Node {
  std::string name;
  Role role = Role::Participant;
};

/// Undirected edge that is down with probability `p_fail`, independently.
struct Edge {
  std::size_t a = 0;
  std::size_t b = 0;
  double p_fail = 0.0;
};

/// Named group of nodes forming one level of a hierarchy.
struct Level {
  std::string name;
  std::vector<std::size_t> nodes;
};

/// Text form, one statement per line, `#` starts a comment:
///   node <id> <participant|relay>
///   edge <a> <b> <p_fail>
///   level <name> <node> <node> ...
struct Topology {
  std::vector<Node> nodes;
  std::vector<Edge> edges;
  std::vector<Level> levels;

  std::size_t add_node(std::string name, Role role = Role::Participant);
  void add_edge(std::size_t a, std::size_t b, double p_fail);
  std::optional<std::size_t> find(const std::string& name) const;
  std::size_t participants() const;
  /// Throws InvalidArgument on bad indices or probabilities,
  /// OverlappingSubtopologies when a node sits in two levels.
  void validate() const;

  static Topology parse(const std::string& text);
  static Topology load(const std::string& path);
  std::string to_text() const;
};

/// Consensus needs one connected component holding strictly more than
/// `fraction` of all participants.
struct QuorumRule {
  double fraction = 0.5;
};

struct PartitionReport {
  double tolerance = 1.0;
  /// Expected minimum number of failed edges to restore before quorum is
  /// reachable again, conditioned on quorum being lost. 0 if it never is.
  double avg_min_repair = 0.0;
  std::uint64_t samples = 0;
  /// 95% normal-approximation half-width of `tolerance`; 0 for exact results.
  double half_width = 0.0;
  bool exact = false;
};

/// Whether the graph minus the edges flagged in `failed` reaches quorum.
bool is_consensus_capable(const Topology& t, const std::vector<bool>& failed, const QuorumRule& rule = {});

/// Fewest failed edges whose restoration makes the graph consensus capable.
/// Throws InvalidArgument if even the intact graph is not capable.
std::size_t min_repair(const Topology& t, const std::vector<bool>& failed, const QuorumRule& rule = {});

/// Monte Carlo estimate. Samples are drawn in fixed-size blocks with
/// independent seed streams, so the result depends only on `seed` and
/// `samples`, never on `threads`.
PartitionReport estimate_tolerance(const Topology& t, const QuorumRule& rule, std::uint64_t samples,
                                   std::uint64_t seed, unsigned threads = 0);

/// Exact value by enumerating every failure state; at most 24 edges.
PartitionReport exact_tolerance(const Topology& t, const QuorumRule& rule = {});

/// Edge between two levels of a hierarchy, by level index.
struct LevelLink {
  std::size_t a = 0;
  std::size_t b = 0;
  double p_fail = 0.0;
};

/// Treats level i as a super-node that is up with probability
/// reports[i].tolerance. The hierarchy is live when every level is up and the
/// surviving links connect all levels. Repair for a failed state is the
/// repairs of the down levels plus the fewest links reconnecting the levels.
PartitionReport compose_hierarchical(const std::vector<PartitionReport>& reports, const std::vector<LevelLink>& links);

/// Splits `t` along its levels, estimates each level on its own edges and
/// composes the results. Edges joining two levels become level links.
/// Throws InvalidArgument without levels or when a node has no level.
PartitionReport estimate_hierarchical(const Topology& t, const QuorumRule& rule, std::uint64_t samples,
                                      std::uint64_t seed);

/// Monte Carlo over the whole graph of the same liveness predicate
/// compose_hierarchical assumes; used to cross-check the composition.
PartitionReport estimate_hierarchical_flat(const Topology& t, const QuorumRule& rule, std::uint64_t samples,
                                           std::uint64_t seed);

/// CSV header and row for a report.
std::string report_csv_header();
std::string report_csv_row(const std::string& label, const PartitionReport& r);

}  // namespace minet::cap
