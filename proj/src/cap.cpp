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

#include "minet/cap.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <memory>
#include <numeric>
#include <sstream>
#include <thread>
#include <unordered_map>

#include "minet/error.hpp"
#include "minet/rng.hpp"

namespace minet::cap {

namespace {

constexpr std::uint64_t kBlock = 4096;
constexpr std::size_t kMaxExactEdges = 24;

struct Dsu {
  std::vector<std::size_t> parent;
  explicit Dsu(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[b] = a;
    return true;
  }
};

bool reaches_quorum(std::size_t count, std::size_t total, const QuorumRule& rule) {
  return total > 0 && static_cast<double>(count) > rule.fraction * static_cast<double>(total);
}

double half_width(double p, std::uint64_t n) { return n == 0 ? 0.0 : 1.96 * std::sqrt(p * (1.0 - p) / n); }

/// Surviving components with their participant counts.
struct Components {
  Dsu dsu;
  std::vector<std::size_t> weight;  // indexed by root
};

Components components(const Topology& t, const std::vector<bool>& failed) {
  Components c{Dsu(t.nodes.size()), std::vector<std::size_t>(t.nodes.size(), 0)};
  for (std::size_t e = 0; e < t.edges.size(); ++e) {
    if (!failed[e]) c.dsu.unite(t.edges[e].a, t.edges[e].b);
  }
  for (std::size_t v = 0; v < t.nodes.size(); ++v) {
    if (t.nodes[v].role == Role::Participant) ++c.weight[c.dsu.find(v)];
  }
  return c;
}

/// Outcome of one failure state: nullopt when capable, else the repair count.
using Evaluator = std::function<std::optional<std::size_t>(const std::vector<bool>&)>;

struct Tally {
  std::uint64_t samples = 0;
  std::uint64_t failures = 0;
  std::uint64_t repair_sum = 0;
};

/// Draws `samples` failure states, one uniform per edge each, in blocks of
/// kBlock whose seeds depend only on `seed` and the block index.
Tally sample(const std::vector<double>& p_fail, const std::function<Evaluator()>& make_eval, std::uint64_t samples,
             std::uint64_t seed, unsigned threads) {
  std::uint64_t blocks = (samples + kBlock - 1) / kBlock;
  std::vector<Tally> out(blocks);
  std::atomic<std::uint64_t> next{0};
  auto worker = [&] {
    Evaluator eval = make_eval();
    std::vector<bool> failed(p_fail.size());
    for (std::uint64_t b; (b = next++) < blocks;) {
      Rng rng(splitmix64(seed) ^ splitmix64(b + 1));
      std::uint64_t n = std::min(kBlock, samples - b * kBlock);
      Tally& t = out[b];
      for (std::uint64_t i = 0; i < n; ++i) {
        for (std::size_t e = 0; e < p_fail.size(); ++e) failed[e] = rng.uniform() < p_fail[e];
        ++t.samples;
        if (auto r = eval(failed)) {
          ++t.failures;
          t.repair_sum += *r;
        }
      }
    }
  };
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, blocks));
  std::vector<std::thread> pool;
  for (unsigned i = 1; i < threads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  Tally total;
  for (const auto& t : out) {
    total.samples += t.samples;
    total.failures += t.failures;
    total.repair_sum += t.repair_sum;
  }
  return total;
}

PartitionReport to_report(const Tally& t) {
  PartitionReport r;
  r.samples = t.samples;
  r.tolerance = t.samples ? 1.0 - static_cast<double>(t.failures) / t.samples : 1.0;
  r.avg_min_repair = t.failures ? static_cast<double>(t.repair_sum) / t.failures : 0.0;
  r.half_width = half_width(r.tolerance, t.samples);
  return r;
}

/// Memoizes outcomes by failure mask for graphs of up to 64 edges.
Evaluator cached(const Topology& t, const QuorumRule& rule) {
  auto cache = std::make_shared<std::unordered_map<std::uint64_t, std::optional<std::size_t>>>();
  bool small = t.edges.size() <= 64;
  return [&t, rule, cache, small](const std::vector<bool>& failed) -> std::optional<std::size_t> {
    std::uint64_t key = 0;
    if (small) {
      for (std::size_t e = 0; e < failed.size(); ++e) key |= static_cast<std::uint64_t>(failed[e]) << e;
      if (auto it = cache->find(key); it != cache->end()) return it->second;
    }
    std::optional<std::size_t> r;
    if (!is_consensus_capable(t, failed, rule)) r = min_repair(t, failed, rule);
    if (small) cache->emplace(key, r);
    return r;
  };
}

void require_capable_when_intact(const Topology& t, const QuorumRule& rule) {
  if (!is_consensus_capable(t, std::vector<bool>(t.edges.size(), false), rule)) {
    fail(ErrorCode::InvalidArgument, "topology cannot reach quorum even with every edge up");
  }
}

/// Fewest of the `links` (pairs of group ids) needed to join all `groups`
/// given the ones in `up` already work; nullopt if impossible.
std::optional<std::size_t> links_to_connect(std::size_t groups, const std::vector<std::pair<std::size_t, std::size_t>>& links,
                                            const std::vector<bool>& up) {
  Dsu now(groups), all(groups);
  std::size_t parts = groups, reachable = groups;
  for (std::size_t i = 0; i < links.size(); ++i) {
    if (all.unite(links[i].first, links[i].second)) --reachable;
    if (up[i] && now.unite(links[i].first, links[i].second)) --parts;
  }
  if (reachable != 1) return std::nullopt;
  return parts - 1;
}

struct Split {
  std::vector<Topology> levels;
  std::vector<LevelLink> links;
  std::vector<std::size_t> level_of;        // node -> level
  std::vector<std::size_t> edge_level;      // edge -> level, or npos for links
  std::vector<std::size_t> edge_local;      // edge -> index within its level or link list
};

Split split_levels(const Topology& t) {
  t.validate();
  if (t.levels.empty()) fail(ErrorCode::InvalidArgument, "topology has no levels");
  constexpr std::size_t none = static_cast<std::size_t>(-1);
  Split s;
  s.level_of.assign(t.nodes.size(), none);
  std::vector<std::size_t> local(t.nodes.size());
  s.levels.resize(t.levels.size());
  for (std::size_t l = 0; l < t.levels.size(); ++l) {
    for (std::size_t v : t.levels[l].nodes) {
      s.level_of[v] = l;
      local[v] = s.levels[l].add_node(t.nodes[v].name, t.nodes[v].role);
    }
  }
  for (std::size_t v = 0; v < t.nodes.size(); ++v) {
    if (s.level_of[v] == none) fail(ErrorCode::InvalidArgument, "node " + t.nodes[v].name + " belongs to no level");
  }
  for (const auto& e : t.edges) {
    std::size_t la = s.level_of[e.a], lb = s.level_of[e.b];
    if (la == lb) {
      s.edge_level.push_back(la);
      s.edge_local.push_back(s.levels[la].edges.size());
      s.levels[la].add_edge(local[e.a], local[e.b], e.p_fail);
    } else {
      s.edge_level.push_back(none);
      s.edge_local.push_back(s.links.size());
      s.links.push_back(LevelLink{la, lb, e.p_fail});
    }
  }
  return s;
}

std::string fmt(double v) {
  std::ostringstream o;
  o << std::setprecision(10) << v;
  return o.str();
}

}  // namespace

// --- Topology ----------------------------------------------------------------

std::size_t Topology::add_node(std::string name, Role role) {
  nodes.push_back(Node{std::move(name), role});
  return nodes.size() - 1;
}

void Topology::add_edge(std::size_t a, std::size_t b, double p_fail) { edges.push_back(Edge{a, b, p_fail}); }

std::optional<std::size_t> Topology::find(const std::string& name) const {
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i].name == name) return i;
  }
  return std::nullopt;
}

std::size_t Topology::participants() const {
  return static_cast<std::size_t>(
      std::count_if(nodes.begin(), nodes.end(), [](const Node& n) { return n.role == Role::Participant; }));
}

void Topology::validate() const {
  for (const auto& e : edges) {
    if (e.a >= nodes.size() || e.b >= nodes.size()) fail(ErrorCode::InvalidArgument, "edge endpoint out of range");
    if (!(e.p_fail >= 0.0 && e.p_fail <= 1.0)) {
      fail(ErrorCode::InvalidArgument, "failure probability outside [0, 1]: " + fmt(e.p_fail));
    }
  }
  std::vector<int> seen(nodes.size(), -1);
  for (std::size_t l = 0; l < levels.size(); ++l) {
    for (std::size_t v : levels[l].nodes) {
      if (v >= nodes.size()) fail(ErrorCode::InvalidArgument, "level " + levels[l].name + " names an unknown node");
      if (seen[v] >= 0) {
        fail(ErrorCode::OverlappingSubtopologies,
             "node " + nodes[v].name + " is in levels " + levels[seen[v]].name + " and " + levels[l].name);
      }
      seen[v] = static_cast<int>(l);
    }
  }
}

Topology Topology::parse(const std::string& text) {
  Topology t;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  auto bad = [&](const std::string& msg) { fail(ErrorCode::ConfigError, "line " + std::to_string(lineno) + ": " + msg); };
  auto node = [&](const std::string& name) {
    auto id = t.find(name);
    if (!id) bad("unknown node " + name);
    return *id;
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream words(line);
    std::vector<std::string> w;
    for (std::string s; words >> s;) w.push_back(s);
    if (w.empty()) continue;
    if (w[0] == "node") {
      if (w.size() != 3) bad("expected: node <id> <participant|relay>");
      if (t.find(w[1])) bad("duplicate node " + w[1]);
      if (w[2] != "participant" && w[2] != "relay") bad("unknown role " + w[2]);
      t.add_node(w[1], w[2] == "participant" ? Role::Participant : Role::Relay);
    } else if (w[0] == "edge") {
      if (w.size() != 4) bad("expected: edge <a> <b> <p_fail>");
      double p = 0;
      auto [ptr, ec] = std::from_chars(w[3].data(), w[3].data() + w[3].size(), p);
      if (ec != std::errc{} || ptr != w[3].data() + w[3].size() || p < 0.0 || p > 1.0) {
        bad("failure probability must be a number in [0, 1]: " + w[3]);
      }
      std::size_t a = node(w[1]), b = node(w[2]);
      if (a == b) bad("self loop on " + w[1]);
      t.add_edge(a, b, p);
    } else if (w[0] == "level") {
      if (w.size() < 3) bad("expected: level <name> <node>...");
      Level l{w[1], {}};
      for (std::size_t i = 2; i < w.size(); ++i) l.nodes.push_back(node(w[i]));
      t.levels.push_back(std::move(l));
    } else {
      bad("unknown statement " + w[0]);
    }
  }
  t.validate();
  return t;
}

Topology Topology::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::Io, "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

std::string Topology::to_text() const {
  std::ostringstream o;
  for (const auto& n : nodes) o << "node " << n.name << ' ' << (n.role == Role::Participant ? "participant" : "relay") << '\n';
  for (const auto& e : edges) o << "edge " << nodes[e.a].name << ' ' << nodes[e.b].name << ' ' << fmt(e.p_fail) << '\n';
  for (const auto& l : levels) {
    o << "level " << l.name;
    for (std::size_t v : l.nodes) o << ' ' << nodes[v].name;
    o << '\n';
  }
  return o.str();
}

// --- Analysis ----------------------------------------------------------------

bool is_consensus_capable(const Topology& t, const std::vector<bool>& failed, const QuorumRule& rule) {
  Components c = components(t, failed);
  std::size_t total = t.participants();
  return std::any_of(c.weight.begin(), c.weight.end(), [&](std::size_t w) { return reaches_quorum(w, total, rule); });
}

std::size_t min_repair(const Topology& t, const std::vector<bool>& failed, const QuorumRule& rule) {
  Components c = components(t, failed);
  std::size_t total = t.participants();
  // Relabel surviving components 0..k-1.
  std::map<std::size_t, std::size_t> label;
  std::vector<std::size_t> weight;
  for (std::size_t v = 0; v < t.nodes.size(); ++v) {
    std::size_t r = c.dsu.find(v);
    if (label.emplace(r, weight.size()).second) weight.push_back(c.weight[r]);
  }
  if (std::any_of(weight.begin(), weight.end(), [&](std::size_t w) { return reaches_quorum(w, total, rule); })) return 0;
  // Candidate repairs: one failed edge per pair of distinct components.
  std::vector<std::pair<std::size_t, std::size_t>> cand;
  for (std::size_t e = 0; e < t.edges.size(); ++e) {
    if (!failed[e]) continue;
    std::size_t a = label[c.dsu.find(t.edges[e].a)], b = label[c.dsu.find(t.edges[e].b)];
    if (a == b) continue;
    cand.emplace_back(std::min(a, b), std::max(a, b));
  }
  std::sort(cand.begin(), cand.end());
  cand.erase(std::unique(cand.begin(), cand.end()), cand.end());

  // k repairs merge at most k+1 components, so start from the fewest
  // heaviest components that could reach quorum together.
  std::vector<std::size_t> sorted = weight;
  std::sort(sorted.rbegin(), sorted.rend());
  std::size_t k = 0, acc = 0;
  while (k < sorted.size() && !reaches_quorum(acc += sorted[k], total, rule)) ++k;

  std::vector<std::size_t> pick;
  std::function<bool(std::size_t, std::size_t)> search = [&](std::size_t from, std::size_t left) -> bool {
    if (left == 0) {
      Dsu d(weight.size());
      for (std::size_t i : pick) d.unite(cand[i].first, cand[i].second);
      std::vector<std::size_t> sum(weight.size(), 0);
      for (std::size_t v = 0; v < weight.size(); ++v) {
        if (reaches_quorum(sum[d.find(v)] += weight[v], total, rule)) return true;
      }
      return false;
    }
    for (std::size_t i = from; i + left <= cand.size(); ++i) {
      pick.push_back(i);
      bool ok = search(i + 1, left - 1);
      pick.pop_back();
      if (ok) return true;
    }
    return false;
  };
  for (; k <= cand.size(); ++k) {
    if (search(0, k)) return k;
  }
  fail(ErrorCode::InvalidArgument, "topology cannot reach quorum even with every edge repaired");
}

PartitionReport estimate_tolerance(const Topology& t, const QuorumRule& rule, std::uint64_t samples, std::uint64_t seed,
                                   unsigned threads) {
  if (samples == 0) fail(ErrorCode::InvalidArgument, "samples must be at least 1");
  t.validate();
  require_capable_when_intact(t, rule);
  std::vector<double> p;
  for (const auto& e : t.edges) p.push_back(e.p_fail);
  return to_report(sample(p, [&] { return cached(t, rule); }, samples, seed, threads));
}

PartitionReport exact_tolerance(const Topology& t, const QuorumRule& rule) {
  t.validate();
  require_capable_when_intact(t, rule);
  std::size_t m = t.edges.size();
  if (m > kMaxExactEdges) fail(ErrorCode::InvalidArgument, "exact enumeration supports at most 24 edges");
  double p_fail = 0, repair = 0;
  std::vector<bool> failed(m);
  for (std::uint64_t mask = 0; mask < (1ull << m); ++mask) {
    double prob = 1;
    for (std::size_t e = 0; e < m; ++e) {
      failed[e] = (mask >> e) & 1;
      prob *= failed[e] ? t.edges[e].p_fail : 1.0 - t.edges[e].p_fail;
    }
    if (prob == 0 || is_consensus_capable(t, failed, rule)) continue;
    p_fail += prob;
    repair += prob * static_cast<double>(min_repair(t, failed, rule));
  }
  PartitionReport r;
  r.exact = true;
  r.samples = 1ull << m;
  r.tolerance = std::clamp(1.0 - p_fail, 0.0, 1.0);
  r.avg_min_repair = p_fail > 0 ? repair / p_fail : 0.0;
  return r;
}

PartitionReport compose_hierarchical(const std::vector<PartitionReport>& reports, const std::vector<LevelLink>& links) {
  std::size_t n = reports.size();
  if (n == 0) fail(ErrorCode::InvalidArgument, "no levels to compose");
  if (n == 1 && links.empty()) return reports[0];
  if (n + links.size() > kMaxExactEdges) fail(ErrorCode::InvalidArgument, "too many levels and links to compose");
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (const auto& l : links) {
    if (l.a >= n || l.b >= n) fail(ErrorCode::InvalidArgument, "level link references an unknown level");
    if (l.a == l.b) fail(ErrorCode::OverlappingSubtopologies, "level link joins a level to itself");
    if (!(l.p_fail >= 0.0 && l.p_fail <= 1.0)) fail(ErrorCode::InvalidArgument, "failure probability outside [0, 1]");
    pairs.emplace_back(l.a, l.b);
  }
  if (!links_to_connect(n, pairs, std::vector<bool>(pairs.size(), true))) {
    fail(ErrorCode::InvalidArgument, "level links do not connect every level");
  }

  // Liveness is (all levels up) and (links connect the levels); the two
  // factors are independent.
  double p_connected = 0, link_repair_failed = 0;  // link repair summed over disconnected link states
  std::vector<bool> up(links.size());
  for (std::uint64_t mask = 0; mask < (1ull << links.size()); ++mask) {
    double prob = 1;
    for (std::size_t i = 0; i < links.size(); ++i) {
      up[i] = !((mask >> i) & 1);
      prob *= up[i] ? 1.0 - links[i].p_fail : links[i].p_fail;
    }
    std::size_t need = *links_to_connect(n, pairs, up);
    if (need == 0) {
      p_connected += prob;
    } else {
      link_repair_failed += prob * static_cast<double>(need);
    }
  }
  double all_up = 1;
  for (const auto& r : reports) all_up *= r.tolerance;
  double tolerance = all_up * p_connected;

  // E[repair * 1{failed}] = E[level repairs] + E[link repairs]; both terms
  // vanish on the live state.
  double level_repair = 0;
  for (const auto& r : reports) level_repair += (1.0 - r.tolerance) * r.avg_min_repair;
  double p_fail = 1.0 - tolerance;

  PartitionReport out;
  out.tolerance = tolerance;
  out.avg_min_repair = p_fail > 1e-15 ? (level_repair + link_repair_failed) / p_fail : 0.0;
  out.exact = true;
  double var = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double d = p_connected;
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) d *= reports[j].tolerance;
    }
    var += (d * reports[i].half_width) * (d * reports[i].half_width);
    out.samples += reports[i].samples;
    out.exact = out.exact && reports[i].exact;
  }
  out.half_width = std::sqrt(var);
  return out;
}

PartitionReport estimate_hierarchical(const Topology& t, const QuorumRule& rule, std::uint64_t samples,
                                      std::uint64_t seed) {
  Split s = split_levels(t);
  std::vector<PartitionReport> reports;
  for (std::size_t l = 0; l < s.levels.size(); ++l) {
    reports.push_back(estimate_tolerance(s.levels[l], rule, samples, splitmix64(seed + l)));
  }
  return compose_hierarchical(reports, s.links);
}

PartitionReport estimate_hierarchical_flat(const Topology& t, const QuorumRule& rule, std::uint64_t samples,
                                           std::uint64_t seed) {
  if (samples == 0) fail(ErrorCode::InvalidArgument, "samples must be at least 1");
  Split s = split_levels(t);
  for (const auto& l : s.levels) require_capable_when_intact(l, rule);
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (const auto& l : s.links) pairs.emplace_back(l.a, l.b);
  if (!links_to_connect(s.levels.size(), pairs, std::vector<bool>(pairs.size(), true))) {
    fail(ErrorCode::InvalidArgument, "level links do not connect every level");
  }
  std::vector<double> p;
  for (const auto& e : t.edges) p.push_back(e.p_fail);
  auto make = [&]() -> Evaluator {
    std::vector<Evaluator> per_level;
    for (const auto& l : s.levels) per_level.push_back(cached(l, rule));
    return [&s, &pairs, per_level](const std::vector<bool>& failed) -> std::optional<std::size_t> {
      std::vector<std::vector<bool>> level_failed(s.levels.size());
      for (std::size_t l = 0; l < s.levels.size(); ++l) level_failed[l].assign(s.levels[l].edges.size(), false);
      std::vector<bool> link_up(pairs.size());
      for (std::size_t e = 0; e < failed.size(); ++e) {
        if (s.edge_level[e] == static_cast<std::size_t>(-1)) {
          link_up[s.edge_local[e]] = !failed[e];
        } else {
          level_failed[s.edge_level[e]][s.edge_local[e]] = failed[e];
        }
      }
      std::size_t repair = *links_to_connect(s.levels.size(), pairs, link_up);
      for (std::size_t l = 0; l < s.levels.size(); ++l) {
        if (auto r = per_level[l](level_failed[l])) repair += *r;
      }
      if (repair == 0) return std::nullopt;
      return repair;
    };
  };
  return to_report(sample(p, make, samples, seed, 0));
}

std::string report_csv_header() { return "label,tolerance,avg_min_repair,samples,half_width,exact\n"; }

std::string report_csv_row(const std::string& label, const PartitionReport& r) {
  return label + ',' + fmt(r.tolerance) + ',' + fmt(r.avg_min_repair) + ',' + std::to_string(r.samples) + ',' +
         fmt(r.half_width) + ',' + (r.exact ? "yes" : "no") + '\n';
}

}  // namespace minet::cap
