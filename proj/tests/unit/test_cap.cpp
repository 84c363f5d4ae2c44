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

#include <cmath>
#include <functional>

#include "doctest.h"
#include "minet/cap.hpp"
#include "minet/error.hpp"
#include "minet/rng.hpp"

using namespace minet;
using namespace minet::cap;

namespace {

Topology ring(std::size_t n, double p) {
  Topology t;
  for (std::size_t i = 0; i < n; ++i) t.add_node("n" + std::to_string(i));
  for (std::size_t i = 0; i < n; ++i) t.add_edge(i, (i + 1) % n, p);
  return t;
}

/// Connected components by depth-first search over an adjacency matrix.
std::vector<std::size_t> component_sizes(const Topology& t, const std::vector<bool>& failed) {
  std::size_t n = t.nodes.size();
  std::vector<std::vector<bool>> adj(n, std::vector<bool>(n));
  for (std::size_t e = 0; e < t.edges.size(); ++e) {
    if (!failed[e]) adj[t.edges[e].a][t.edges[e].b] = adj[t.edges[e].b][t.edges[e].a] = true;
  }
  std::vector<bool> seen(n);
  std::vector<std::size_t> sizes;
  for (std::size_t s = 0; s < n; ++s) {
    if (seen[s]) continue;
    std::size_t count = 0;
    std::vector<std::size_t> stack{s};
    seen[s] = true;
    while (!stack.empty()) {
      std::size_t v = stack.back();
      stack.pop_back();
      count += t.nodes[v].role == Role::Participant;
      for (std::size_t w = 0; w < n; ++w) {
        if (adj[v][w] && !seen[w]) {
          seen[w] = true;
          stack.push_back(w);
        }
      }
    }
    sizes.push_back(count);
  }
  return sizes;
}

bool oracle_capable(const Topology& t, const std::vector<bool>& failed) {
  for (std::size_t s : component_sizes(t, failed)) {
    if (2 * s > t.participants()) return true;
  }
  return false;
}

/// Smallest number of failed edges to restore, trying every subset.
std::size_t oracle_repair(const Topology& t, const std::vector<bool>& failed) {
  std::vector<std::size_t> down;
  for (std::size_t e = 0; e < failed.size(); ++e) {
    if (failed[e]) down.push_back(e);
  }
  std::size_t best = down.size() + 1;
  for (std::uint64_t m = 0; m < (1ull << down.size()); ++m) {
    std::vector<bool> f = failed;
    for (std::size_t i = 0; i < down.size(); ++i) {
      if ((m >> i) & 1) f[down[i]] = false;
    }
    if (oracle_capable(t, f)) best = std::min<std::size_t>(best, __builtin_popcountll(m));
  }
  return best;
}

Topology random_topology(Rng& rng, std::size_t max_edges) {
  Topology t;
  std::size_t n = 2 + rng.below(6);
  for (std::size_t i = 0; i < n; ++i) t.add_node("v" + std::to_string(i), rng.chance(0.8) ? Role::Participant : Role::Relay);
  t.nodes[0].role = Role::Participant;
  for (std::size_t i = 1; i < n; ++i) t.add_edge(rng.below(i), i, 0.05 + 0.5 * rng.uniform());
  while (t.edges.size() < max_edges && rng.chance(0.7)) {
    std::size_t a = rng.below(n), b = rng.below(n);
    if (a != b) t.add_edge(a, b, rng.uniform() * 0.6);
  }
  return t;
}

}  // namespace

TEST_CASE("capability on a five node ring matches component analysis") {
  Topology t = ring(5, 0.1);
  std::vector<bool> none(5, false), all(5, true);
  CHECK(is_consensus_capable(t, none));
  CHECK_FALSE(is_consensus_capable(t, all));
  for (std::uint64_t m = 0; m < 32; ++m) {
    std::vector<bool> f(5);
    for (std::size_t e = 0; e < 5; ++e) f[e] = (m >> e) & 1;
    CAPTURE(m);
    REQUIRE(is_consensus_capable(t, f) == oracle_capable(t, f));
    if (!oracle_capable(t, f)) REQUIRE(min_repair(t, f) == oracle_repair(t, f));
  }
}

TEST_CASE("minimum repair agrees with subset search on random graphs") {
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    Topology t = random_topology(rng, 10);
    std::vector<bool> f(t.edges.size());
    for (std::size_t e = 0; e < f.size(); ++e) f[e] = rng.chance(0.5);
    REQUIRE(is_consensus_capable(t, f) == oracle_capable(t, f));
    if (!oracle_capable(t, f)) REQUIRE(min_repair(t, f) == oracle_repair(t, f));
  }
}

TEST_CASE("trivial estimates") {
  Topology safe = ring(4, 0.0);
  PartitionReport r = estimate_tolerance(safe, {}, 1000, 1);
  CHECK(r.tolerance == 1.0);
  CHECK(r.avg_min_repair == 0.0);
  CHECK(r.half_width == 0.0);

  Topology pair;
  pair.add_node("a");
  pair.add_node("b");
  pair.add_edge(0, 1, 1.0);
  r = estimate_tolerance(pair, {}, 1000, 1);
  CHECK(r.tolerance == 0.0);
  CHECK(r.avg_min_repair == 1.0);
  CHECK(exact_tolerance(pair).tolerance == 0.0);

  CHECK_THROWS_AS(estimate_tolerance(pair, {}, 0, 1), Error);
  Topology split;
  split.add_node("a");
  split.add_node("b");
  CHECK_THROWS_AS(estimate_tolerance(split, {}, 10, 1), Error);
}

TEST_CASE("exact enumeration of a ring") {
  // Probability-weighted sum of the brute-force verdicts.
  double p = 0.2;
  Topology t = ring(5, p);
  double tol = 0;
  for (std::uint64_t m = 0; m < 32; ++m) {
    std::vector<bool> f(5);
    double prob = 1;
    for (std::size_t e = 0; e < 5; ++e) {
      f[e] = (m >> e) & 1;
      prob *= f[e] ? p : 1 - p;
    }
    if (oracle_capable(t, f)) tol += prob;
  }
  CHECK(exact_tolerance(t).tolerance == doctest::Approx(tol).epsilon(1e-12));
}

TEST_CASE("sampling converges to enumeration and is reproducible") {
  Rng rng(5);
  for (int trial = 0; trial < 5; ++trial) {
    Topology t = random_topology(rng, 12);
    PartitionReport exact = exact_tolerance(t);
    PartitionReport mc = estimate_tolerance(t, {}, 20000, 100 + trial);
    CHECK(std::abs(mc.tolerance - exact.tolerance) <= 3 * std::max(mc.half_width, 0.005));
    PartitionReport again = estimate_tolerance(t, {}, 20000, 100 + trial, 1);
    CHECK(again.tolerance == mc.tolerance);
    CHECK(again.avg_min_repair == mc.avg_min_repair);
    if (exact.tolerance == 1.0) CHECK(exact.avg_min_repair == 0.0);
  }
}

TEST_CASE("half width shrinks with the square root of the sample count") {
  Topology t = ring(5, 0.3);
  PartitionReport small = estimate_tolerance(t, {}, 4096, 3);
  PartitionReport large = estimate_tolerance(t, {}, 4096 * 16, 3);
  CHECK(large.half_width == doctest::Approx(small.half_width / 4).epsilon(0.1));
}

TEST_CASE("lowering a failure probability never lowers tolerance") {
  Rng rng(8);
  for (int trial = 0; trial < 50; ++trial) {
    Topology t = random_topology(rng, 12);
    Topology better = t;
    std::size_t e = rng.below(t.edges.size());
    better.edges[e].p_fail *= rng.uniform();
    std::uint64_t seed = 1000 + trial;
    CHECK(estimate_tolerance(better, {}, 5000, seed).tolerance >= estimate_tolerance(t, {}, 5000, seed).tolerance);
  }
}

TEST_CASE("hierarchical composition") {
  SUBCASE("single level is the identity") {
    PartitionReport r{0.7, 1.5, 1000, 0.01, false};
    PartitionReport c = compose_hierarchical({r}, {});
    CHECK(c.tolerance == r.tolerance);
    CHECK(c.avg_min_repair == r.avg_min_repair);
  }
  SUBCASE("two levels on a reliable link multiply") {
    Topology t;
    for (const char* n : {"a1", "a2", "a3", "b1", "b2", "b3"}) t.add_node(n);
    t.add_edge(0, 1, 0.2);
    t.add_edge(1, 2, 0.3);
    t.add_edge(0, 2, 0.1);
    t.add_edge(3, 4, 0.25);
    t.add_edge(4, 5, 0.15);
    t.add_edge(2, 3, 0.0);
    t.levels = {{"a", {0, 1, 2}}, {"b", {3, 4, 5}}};
    Topology a, b;
    for (const char* n : {"a1", "a2", "a3"}) a.add_node(n);
    for (const char* n : {"b1", "b2", "b3"}) b.add_node(n);
    a.edges = {{0, 1, 0.2}, {1, 2, 0.3}, {0, 2, 0.1}};
    b.edges = {{0, 1, 0.25}, {1, 2, 0.15}};
    double ta = exact_tolerance(a).tolerance, tb = exact_tolerance(b).tolerance;
    PartitionReport composed = compose_hierarchical({exact_tolerance(a), exact_tolerance(b)}, {{0, 1, 0.0}});
    CHECK(composed.tolerance == doctest::Approx(ta * tb));
    PartitionReport flat = estimate_hierarchical_flat(t, {}, 200000, 9);
    CHECK(std::abs(flat.tolerance - ta * tb) <= 2 * flat.half_width);
  }
  SUBCASE("three level tree agrees with flat sampling") {
    Topology t;
    for (int i = 0; i < 9; ++i) t.add_node("t" + std::to_string(i));
    t.levels = {{"top", {0, 1, 2}}, {"mid", {3, 4, 5}}, {"leaf", {6, 7, 8}}};
    for (std::size_t l = 0; l < 3; ++l) {
      t.add_edge(3 * l, 3 * l + 1, 0.1 + 0.05 * l);
      t.add_edge(3 * l, 3 * l + 2, 0.2);
    }
    t.add_edge(0, 3, 0.05);
    t.add_edge(3, 6, 0.08);
    PartitionReport composed = estimate_hierarchical(t, {}, 100000, 4);
    PartitionReport flat = estimate_hierarchical_flat(t, {}, 100000, 5);
    double combined = std::hypot(composed.half_width, flat.half_width);
    CHECK(std::abs(composed.tolerance - flat.tolerance) <= 2 * combined);
    CHECK(composed.avg_min_repair == doctest::Approx(flat.avg_min_repair).epsilon(0.05));
  }
  SUBCASE("overlapping levels are rejected") {
    Topology t = ring(4, 0.1);
    t.levels = {{"x", {0, 1}}, {"y", {1, 2, 3}}};
    try {
      estimate_hierarchical(t, {}, 100, 1);
      FAIL("overlap accepted");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::OverlappingSubtopologies);
    }
  }
}

TEST_CASE("text format") {
  Topology t = Topology::parse(
      "# ring with a relay\n"
      "node a participant\nnode b participant\nnode r relay\n"
      "edge a b 0.1\nedge b r 0.25 # uplink\nedge r a 0\n"
      "level l1 a b\nlevel l2 r\n");
  CHECK(t.nodes.size() == 3);
  CHECK(t.participants() == 2);
  CHECK(t.edges[1].p_fail == 0.25);
  CHECK(Topology::parse(t.to_text()).to_text() == t.to_text());
  auto code = [](const std::string& text) {
    try {
      Topology::parse(text);
    } catch (const Error& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK(code("node a participant\nedge a z 0.1\n").find("line 2") == 0);
  CHECK(code("node a participant\nnode b relay\nedge a b 1.5\n").find("line 3") == 0);
  CHECK(code("node a boss\n").find("line 1") == 0);
  CHECK(code("frob\n").find("line 1") == 0);
  CHECK_THROWS_AS(Topology::parse("node a participant\nnode b participant\nlevel x a\nlevel y a b\n"), Error);
}
