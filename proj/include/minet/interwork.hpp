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
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "minet/mir_node.hpp"
#include "minet/netsim.hpp"
#include "minet/packet.hpp"

namespace minet {

/// Interest carrying `datagram` towards the gateway owning `gateway_prefix`.
/// Name: <gateway_prefix>/<dst>/<src>/<seq>.
InterestPacket encap_ip_in_interest(const SimIpDatagram& datagram, const Identifier& gateway_prefix,
                                    std::uint64_t nonce = 0);
/// Inverse of encap_ip_in_interest. Throws BadEncoding without a payload.
SimIpDatagram decap_interest(const InterestPacket& interest);

/// Splits `content` into kSegmentSize segments (at least one, possibly empty).
std::vector<Bytes> segment(ByteView content);

/// Windowed segment fetcher shared by CCN and IP consumers. Segment 0 is
/// requested alone until the final segment index is known.
class PullFlow {
 public:
  struct Options {
    std::size_t window = 32;
    Tick rto = 6000;
    Tick start = 1;
  };

  PullFlow(std::string label, Options options);

  /// Segments to (re)send at `now`; timed-out ones count as retransmissions.
  std::vector<std::uint64_t> due(Tick now);
  void on_segment(std::uint64_t index, std::uint64_t final_segment, ByteView body, Tick now);
  void fail(std::string reason, Tick now);

  bool active(Tick now) const { return !done() && now >= options_.start; }
  bool done() const noexcept { return complete_ || failed_; }
  bool complete() const noexcept { return complete_; }
  bool failed() const noexcept { return failed_; }
  const std::string& error() const noexcept { return error_; }
  const std::string& label() const noexcept { return label_; }
  Tick started() const noexcept { return first_request_; }
  Tick finished() const noexcept { return finished_; }
  std::uint64_t retransmissions() const noexcept { return retransmissions_; }
  /// (tick, payload bytes) for every accepted segment in arrival order.
  const std::vector<std::pair<Tick, std::uint64_t>>& arrivals() const noexcept { return arrivals_; }
  Bytes assembled() const;
  std::uint64_t bytes() const noexcept { return bytes_; }

 private:
  std::string label_;
  Options options_;
  std::optional<std::uint64_t> final_;
  std::uint64_t next_ = 0;
  std::map<std::uint64_t, Tick> outstanding_;
  std::vector<std::optional<Bytes>> segments_;
  std::vector<std::pair<Tick, std::uint64_t>> arrivals_;
  std::uint64_t received_ = 0, bytes_ = 0, retransmissions_ = 0;
  Tick first_request_ = 0, finished_ = 0;
  bool started_ = false, complete_ = false, failed_ = false;
  std::string error_;
};

/// Serves named resources as signed, segmented Data.
class CcnProducer : public SimNode {
 public:
  explicit CcnProducer(std::string name);
  void add_resource(const Identifier& name, Bytes content);
  void on_message(NodeContext& ctx, FaceId face, Message msg) override;
  void report(Counters& out) const override;
  const KeyPair& key() const noexcept { return key_; }

 private:
  std::string name_;
  KeyPair key_;
  std::map<Identifier, std::vector<Bytes>> resources_;
  Counters counters_;
};

/// CCN consumer attached to a router by its single link-layer face.
class CcnConsumer : public SimNode {
 public:
  explicit CcnConsumer(std::string name);
  void add_flow(const Identifier& resource, PullFlow::Options options);
  void on_message(NodeContext& ctx, FaceId face, Message msg) override;
  void on_tick(NodeContext& ctx) override;
  void report(Counters& out) const override;
  const std::vector<std::pair<Identifier, PullFlow>>& flows() const noexcept { return flows_; }

 private:
  std::string name_;
  std::vector<std::pair<Identifier, PullFlow>> flows_;
  Counters counters_;
};

/// IP host or router: forwards datagrams by longest prefix, serves resources
/// to Get requests and optionally pulls one or more resources.
class IpNode : public SimNode {
 public:
  IpNode(std::string name, Identifier address);
  HptFib& routes() noexcept { return routes_; }
  const Identifier& address() const noexcept { return address_; }
  void add_resource(const std::string& name, Bytes content);
  /// Pulls `resource` by sending Get requests to `target`.
  void add_flow(const std::string& resource, const Identifier& target, PullFlow::Options options);
  const std::vector<std::tuple<std::string, Identifier, PullFlow>>& flows() const noexcept { return flows_; }

  void on_message(NodeContext& ctx, FaceId face, Message msg) override;
  void on_tick(NodeContext& ctx) override;
  void report(Counters& out) const override;

 private:
  void route(NodeContext& ctx, SimIpDatagram d);

  std::string name_;
  Identifier address_;
  HptFib routes_;
  std::map<std::string, std::vector<Bytes>> resources_;
  std::vector<std::tuple<std::string, Identifier, PullFlow>> flows_;
  std::map<std::uint64_t, std::pair<std::size_t, std::uint64_t>> sent_;  // seq -> (flow, segment)
  std::uint64_t next_seq_ = 1;
  Counters counters_;
};

/// Multi-identifier router with an IP side. Translation behaviour is driven
/// by HPT-FIB Translate entries:
///   ip prefix -> ccn:/tunnel/<egress>  tunnel datagrams to another gateway
///   ip prefix -> ccn name             answer IP Gets from named content
///   ccn prefix -> ip address          answer Interests from an IP server
/// and CCN-over-UDP tunnels to peer gateways appear as IpUdp faces.
class Gateway : public MirRouter {
 public:
  Gateway(MirConfig config, Identifier address);
  const Identifier& address() const noexcept { return address_; }
  /// Registers an IpUdp face reaching the peer gateway at `peer_address`.
  void add_tunnel(FaceId face, Identifier peer_address);
  std::uint64_t translations() const;

  void report(Counters& out) const override;

 protected:
  void on_other(NodeContext& ctx, FaceId face, Message msg) override;
  void on_local_data(NodeContext& ctx, const DataPacket& data) override;
  void send_virtual(NodeContext& ctx, FaceId face, Message msg) override;
  bool on_tunnel_interest(NodeContext& ctx, FaceId face, const InterestPacket& interest) override;
  bool on_translate_to_ip(NodeContext& ctx, FaceId face, const InterestPacket& interest,
                          const Identifier& target) override;

 private:
  void ip_receive(NodeContext& ctx, FaceId face, SimIpDatagram d);
  void ip_forward(NodeContext& ctx, SimIpDatagram d);

  struct ProxyWaiter {
    Identifier client;
    Identifier service;
    std::uint64_t seq = 0;
  };
  using FlowKey = std::tuple<Identifier, Identifier, std::uint64_t>;  // (src, dst, seq) of the request

  Identifier address_;
  std::map<FaceId, Identifier> tunnel_peers_;
  std::map<Identifier, FaceId> tunnel_faces_;
  std::map<FlowKey, Identifier> tunnel_pending_;             // egress: request -> Interest name
  std::map<Identifier, std::vector<ProxyWaiter>> proxy_pending_;  // ip->ccn: Interest name -> clients
  std::map<std::uint64_t, Identifier> server_pending_;       // ccn->ip: Get seq -> Interest name
  std::uint64_t next_seq_ = 1;
};

}  // namespace minet
