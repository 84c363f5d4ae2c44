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

#include <memory>

#include "doctest.h"
#include "minet/error.hpp"
#include "minet/netsim.hpp"

using namespace minet;

namespace {

Frame frame_of_size(std::size_t size) {
  Frame f;
  while (wire_size(Message{f}) < size) f.body.push_back(0);
  REQUIRE(wire_size(Message{f}) == size);
  return f;
}

/// Records arrivals; optionally sends scripted messages at start.
class Probe : public SimNode {
 public:
  struct Arrival {
    Tick tick;
    FaceId face;
    Message msg;
  };
  std::vector<std::pair<FaceId, Message>> at_start;
  std::vector<Arrival> arrivals;
  std::vector<std::pair<Tick, std::uint64_t>> timers;

  void start(NodeContext& ctx) override {
    for (auto& [face, msg] : at_start) ctx.send(face, msg);
  }
  void on_message(NodeContext& ctx, FaceId face, Message msg) override {
    arrivals.push_back({ctx.now(), face, std::move(msg)});
  }
  void on_timer(NodeContext& ctx, std::uint64_t token) override { timers.push_back({ctx.now(), token}); }
};

/// Sends random frames to random neighbours each tick.
class Chatter : public SimNode {
 public:
  std::uint64_t received = 0;
  void on_message(NodeContext&, FaceId, Message) override { ++received; }
  void on_tick(NodeContext& ctx) override {
    if (ctx.now() > 200 || !ctx.rng().chance(0.5)) return;
    const auto& faces = ctx.faces();
    FaceId f = static_cast<FaceId>(1 + ctx.rng().below(faces.size() - 1));
    Frame fr;
    fr.body.resize(ctx.rng().below(3000));
    ctx.send(f, std::move(fr));
  }
  void report(Counters& out) const override { out["received"] = received; }
};

std::unique_ptr<World> chatter_world(std::uint64_t seed, double loss, Tick jitter) {
  auto w = std::make_unique<World>(seed);
  for (int i = 0; i < 5; ++i) w->add_node("n" + std::to_string(i), std::make_unique<Chatter>());
  LinkParams p;
  p.capacity = 1500;
  p.loss = loss;
  p.jitter = jitter;
  for (NodeId i = 0; i < 5; ++i) w->connect(i, (i + 1) % 5, p, FaceKind::LinkLayer);
  w->connect(0, 2, p, FaceKind::LinkLayer);
  return w;
}

}  // namespace

TEST_CASE("serialization is bounded by link capacity") {
  World w(1);
  auto a = std::make_unique<Probe>();
  auto b = std::make_unique<Probe>();
  a->at_start.push_back({1, frame_of_size(25)});
  Probe* pb = b.get();
  NodeId na = w.add_node("a", std::move(a));
  NodeId nb = w.add_node("b", std::move(b));
  LinkId l = w.connect(na, nb, LinkParams{10, 0, 0.0, 0}, FaceKind::LinkLayer);
  w.run_for(2);
  CHECK(pb->arrivals.empty());
  w.step();
  REQUIRE(pb->arrivals.size() == 1);
  CHECK(pb->arrivals[0].tick == 3);
  CHECK(w.link_stats(l, true).bytes_transmitted == 25);
  CHECK(w.link_stats(l, true).max_bytes_per_tick == 10);
}

TEST_CASE("latency delays delivery and FIFO order is kept") {
  World w(1);
  auto a = std::make_unique<Probe>();
  for (int i = 0; i < 20; ++i) {
    Frame f;
    f.channel = static_cast<std::uint16_t>(i);
    a->at_start.push_back({1, f});
  }
  auto b = std::make_unique<Probe>();
  Probe* pb = b.get();
  NodeId na = w.add_node("a", std::move(a));
  NodeId nb = w.add_node("b", std::move(b));
  w.connect(na, nb, LinkParams{1'000'000, 7, 0.0, 5}, FaceKind::LinkLayer);
  w.run_for(30);
  REQUIRE(pb->arrivals.size() == 20);
  for (int i = 0; i < 20; ++i) {
    CHECK(std::get<Frame>(pb->arrivals[i].msg).channel == i);
    CHECK(pb->arrivals[i].tick >= 8);
    CHECK(pb->arrivals[i].tick <= 13);
  }
}

TEST_CASE("timers fire in order and never in the past") {
  World w(1);
  auto p = std::make_unique<Probe>();
  Probe* pp = p.get();
  NodeId n = w.add_node("p", std::move(p));
  w.start();
  w.set_timer(n, 5, 1);
  w.set_timer(n, 0, 2);
  w.set_timer(n, 5, 3);
  w.run_for(6);
  REQUIRE(pp->timers.size() == 3);
  CHECK(pp->timers[0] == std::pair<Tick, std::uint64_t>{1, 2});
  CHECK(pp->timers[1] == std::pair<Tick, std::uint64_t>{5, 1});
  CHECK(pp->timers[2] == std::pair<Tick, std::uint64_t>{5, 3});
}

TEST_CASE("regime violations are counted per link kind") {
  World w(1);
  SimIpDatagram d;
  d.src = parse_identifier("ip:10.0.0.1");
  d.dst = parse_identifier("ip:10.0.0.2");
  InterestPacket i;
  i.name = parse_identifier("ccn:/a");
  auto a = std::make_unique<Probe>();
  a->at_start = {{1, d}, {1, i}, {2, d}, {2, i}, {2, i}};
  NodeId na = w.add_node("a", std::move(a));
  NodeId nb = w.add_node("b", std::make_unique<Probe>());
  NodeId nc = w.add_node("c", std::make_unique<Probe>());
  LinkId ccn = w.connect(na, nb, LinkParams{}, FaceKind::LinkLayer);
  LinkId ip = w.connect(na, nc, LinkParams{}, FaceKind::IpNative);
  w.run_for(10);
  CHECK(w.link_stats(ccn, true).regime_violations == 1);
  CHECK(w.link_stats(ip, true).regime_violations == 2);
  CHECK(w.link_stats(ip, true).ip_messages == 1);
  CHECK(w.link_stats(ip, true).ccn_messages == 2);
}

TEST_CASE("sending on a face without a link fails") {
  World w(1);
  NodeId a = w.add_node("a", std::make_unique<Probe>());
  NodeId b = w.add_node("b", std::make_unique<Probe>());
  FaceId v = w.add_virtual_face(a, FaceKind::IpUdp, b);
  CHECK_THROWS_AS(w.send(a, v, Message{Frame{}}), Error);
  CHECK_THROWS_AS(w.send(a, 9, Message{Frame{}}), Error);
  CHECK_THROWS_AS(w.add_node("a", std::make_unique<Probe>()), Error);
}

TEST_CASE("message conservation holds at every tick") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    auto w = chatter_world(seed, 0.1, 3);
    for (int t = 0; t < 400; ++t) {
      w->step();
      REQUIRE(w->conservation().holds());
    }
    auto c = w->conservation();
    CHECK(c.queued == 0);
    CHECK(c.lost > 0);
    std::uint64_t received = 0;
    for (NodeId i = 0; i < 5; ++i) received += dynamic_cast<Chatter&>(w->node(i)).received;
    CHECK(received == c.delivered);
    for (LinkId l = 0; l < w->link_count(); ++l) {
      CHECK(w->link_stats(l, true).max_bytes_per_tick <= 1500);
      CHECK(w->link_stats(l, false).max_bytes_per_tick <= 1500);
    }
  }
}

TEST_CASE("equal seeds give identical metrics") {
  auto a = chatter_world(42, 0.05, 4);
  auto b = chatter_world(42, 0.05, 4);
  auto c = chatter_world(43, 0.05, 4);
  a->run_for(300);
  b->run_for(300);
  c->run_for(300);
  CHECK(a->metrics_csv() == b->metrics_csv());
  CHECK(a->metrics_csv() != c->metrics_csv());
  CHECK(a->metrics_csv().rfind("scope,name,value\n", 0) == 0);
}
