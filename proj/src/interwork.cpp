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

#include "minet/interwork.hpp"

#include <algorithm>

#include "minet/error.hpp"

namespace minet {
namespace {

std::string address_label(const Identifier& ip) {
  std::string s = ip.to_string();
  return s.substr(s.find(':') + 1);
}

std::optional<FaceId> forward_face(const HptFib& fib, const Identifier& dst) {
  auto hit = fib.longest_prefix_match(dst);
  if (!hit) return std::nullopt;
  if (const auto* f = std::get_if<Forward>(&hit->action)) return f->face;
  return std::nullopt;
}

}  // namespace

InterestPacket encap_ip_in_interest(const SimIpDatagram& datagram, const Identifier& gateway_prefix,
                                    std::uint64_t nonce) {
  InterestPacket i;
  i.name = gateway_prefix.append(std::vector<std::string>{address_label(datagram.dst), address_label(datagram.src),
                                                          std::to_string(datagram.seq)});
  i.nonce = nonce;
  i.tunnel_payload = encode(datagram);
  return i;
}

SimIpDatagram decap_interest(const InterestPacket& interest) {
  if (!interest.tunnel_payload) fail(ErrorCode::BadEncoding, "interest carries no tunnelled datagram");
  return decode_datagram(*interest.tunnel_payload);
}

std::vector<Bytes> segment(ByteView content) {
  std::vector<Bytes> out;
  for (std::size_t off = 0; off < content.size(); off += kSegmentSize) {
    std::size_t n = std::min(kSegmentSize, content.size() - off);
    out.emplace_back(content.begin() + static_cast<long>(off), content.begin() + static_cast<long>(off + n));
  }
  if (out.empty()) out.emplace_back();
  return out;
}

// --- PullFlow ----------------------------------------------------------------------

PullFlow::PullFlow(std::string label, Options options) : label_(std::move(label)), options_(options) {}

std::vector<std::uint64_t> PullFlow::due(Tick now) {
  std::vector<std::uint64_t> out;
  if (!active(now)) return out;
  if (!started_) {
    started_ = true;
    first_request_ = now;
  }
  for (auto& [seg, sent] : outstanding_) {
    if (now >= sent + options_.rto) {
      sent = now;
      retransmissions_++;
      out.push_back(seg);
    }
  }
  std::uint64_t limit = final_ ? *final_ + 1 : 1;
  while (outstanding_.size() < options_.window && next_ < limit) {
    outstanding_[next_] = now;
    out.push_back(next_++);
  }
  return out;
}

void PullFlow::on_segment(std::uint64_t index, std::uint64_t final_segment, ByteView body, Tick now) {
  if (done()) return;
  if (!final_) {
    final_ = final_segment;
    segments_.resize(final_segment + 1);
  }
  if (index > *final_ || segments_[index]) {
    outstanding_.erase(index);
    return;
  }
  segments_[index] = Bytes(body.begin(), body.end());
  outstanding_.erase(index);
  arrivals_.emplace_back(now, body.size());
  bytes_ += body.size();
  if (++received_ == *final_ + 1) {
    complete_ = true;
    finished_ = now;
  }
}

void PullFlow::fail(std::string reason, Tick now) {
  if (done()) return;
  failed_ = true;
  error_ = std::move(reason);
  finished_ = now;
}

Bytes PullFlow::assembled() const {
  Bytes out;
  out.reserve(bytes_);
  for (const auto& s : segments_) {
    if (s) out.insert(out.end(), s->begin(), s->end());
  }
  return out;
}

// --- CcnProducer ---------------------------------------------------------------------

CcnProducer::CcnProducer(std::string name) : name_(std::move(name)), key_(keypair_from_label("node:" + name_)) {
  counters_["interests_in"] = 0;
  counters_["data_out"] = 0;
  counters_["nacks_out"] = 0;
}

void CcnProducer::add_resource(const Identifier& name, Bytes content) { resources_[name] = segment(content); }

void CcnProducer::on_message(NodeContext& ctx, FaceId face, Message msg) {
  auto* interest = std::get_if<InterestPacket>(&msg);
  if (!interest) return;
  counters_["interests_in"]++;
  Identifier base = strip_segment(interest->name);
  std::uint64_t index = segment_index(interest->name).value_or(0);
  auto it = resources_.find(base);
  DataPacket d;
  if (it == resources_.end() || index >= it->second.size()) {
    d.name = interest->name;
    d.content_type = ContentType::Nack;
    counters_["nacks_out"]++;
  } else {
    d.name = segment_name(base, index);
    d.payload = it->second[index];
    d.final_segment = it->second.size() - 1;
    counters_["data_out"]++;
  }
  sign_data(d, key_);
  ctx.send(face, std::move(d));
}

void CcnProducer::report(Counters& out) const { out = counters_; }

// --- CcnConsumer ---------------------------------------------------------------------

CcnConsumer::CcnConsumer(std::string name) : name_(std::move(name)) {
  counters_["interests_out"] = 0;
  counters_["data_in"] = 0;
  counters_["nacks_in"] = 0;
}

void CcnConsumer::add_flow(const Identifier& resource, PullFlow::Options options) {
  flows_.emplace_back(resource, PullFlow(resource.to_string(), options));
}

void CcnConsumer::on_tick(NodeContext& ctx) {
  if (ctx.faces().size() < 2) return;
  for (auto& [resource, flow] : flows_) {
    for (std::uint64_t seg : flow.due(ctx.now())) {
      InterestPacket i;
      i.name = segment_name(resource, seg);
      i.nonce = ctx.rng().next();
      counters_["interests_out"]++;
      ctx.send(1, std::move(i));
    }
  }
}

void CcnConsumer::on_message(NodeContext& ctx, FaceId, Message msg) {
  auto* d = std::get_if<DataPacket>(&msg);
  if (!d) return;
  counters_["data_in"]++;
  for (auto& [resource, flow] : flows_) {
    if (!covers(resource, d->name)) continue;
    if (d->content_type == ContentType::Nack) {
      counters_["nacks_in"]++;
      flow.fail("nack: " + std::string(d->payload.begin(), d->payload.end()), ctx.now());
      return;
    }
    auto index = segment_index(d->name);
    if (!index || !d->final_segment) return;
    flow.on_segment(*index, *d->final_segment, d->payload, ctx.now());
    return;
  }
}

void CcnConsumer::report(Counters& out) const {
  out = counters_;
  for (std::size_t i = 0; i < flows_.size(); ++i) {
    const auto& f = flows_[i].second;
    std::string p = "flow" + std::to_string(i) + "_";
    out[p + "bytes"] = f.bytes();
    out[p + "retransmissions"] = f.retransmissions();
    out[p + "complete"] = f.complete();
  }
}

// --- IpNode ---------------------------------------------------------------------------

IpNode::IpNode(std::string name, Identifier address) : name_(std::move(name)), address_(std::move(address)) {
  if (address_.kind() != IdKind::Ip) fail(ErrorCode::WrongKind, "ip node address must be an ip identifier");
  for (const char* c : {"ip_in", "ip_forwarded", "ip_no_route", "gets_served", "gets_sent", "chunks_in"}) {
    counters_[c] = 0;
  }
}

void IpNode::add_resource(const std::string& name, Bytes content) { resources_[name] = segment(content); }

void IpNode::add_flow(const std::string& resource, const Identifier& target, PullFlow::Options options) {
  flows_.emplace_back(resource, target, PullFlow(resource, options));
}

void IpNode::route(NodeContext& ctx, SimIpDatagram d) {
  if (auto face = forward_face(routes_, d.dst)) {
    ctx.send(*face, std::move(d));
  } else {
    counters_["ip_no_route"]++;
  }
}

void IpNode::on_message(NodeContext& ctx, FaceId, Message msg) {
  auto* d = std::get_if<SimIpDatagram>(&msg);
  if (!d) return;
  counters_["ip_in"]++;
  if (d->dst != address_) {
    counters_["ip_forwarded"]++;
    route(ctx, std::move(*d));
    return;
  }
  AppMessage m;
  try {
    m = decode_app_message(d->payload);
  } catch (const Error&) {
    return;
  }
  if (m.type == AppMessage::Type::Get) {
    counters_["gets_served"]++;
    AppMessage r;
    r.name = m.name;
    r.segment = m.segment;
    auto it = resources_.find(m.name);
    if (it == resources_.end() || m.segment >= it->second.size()) {
      r.type = AppMessage::Type::Error;
    } else {
      r.type = AppMessage::Type::Chunk;
      r.final_segment = it->second.size() - 1;
      r.body = it->second[m.segment];
    }
    SimIpDatagram out;
    out.src = address_;
    out.dst = d->src;
    out.proto = IpProto::Tcp;
    out.payload = encode(r);
    out.seq = d->seq;
    route(ctx, std::move(out));
    return;
  }
  auto it = sent_.find(d->seq);
  if (it == sent_.end()) return;
  auto [flow_index, seg] = it->second;
  sent_.erase(it);
  PullFlow& flow = std::get<2>(flows_[flow_index]);
  if (m.type == AppMessage::Type::Error) {
    flow.fail("server error for " + m.name, ctx.now());
    return;
  }
  counters_["chunks_in"]++;
  flow.on_segment(m.segment, m.final_segment, m.body, ctx.now());
}

void IpNode::on_tick(NodeContext& ctx) {
  for (std::size_t i = 0; i < flows_.size(); ++i) {
    auto& [resource, target, flow] = flows_[i];
    for (std::uint64_t seg : flow.due(ctx.now())) {
      AppMessage m;
      m.type = AppMessage::Type::Get;
      m.name = resource;
      m.segment = seg;
      std::uint64_t seq = next_seq_++;
      sent_[seq] = {i, seg};
      counters_["gets_sent"]++;
      SimIpDatagram d;
      d.src = address_;
      d.dst = target;
      d.proto = IpProto::Tcp;
      d.payload = encode(m);
      d.seq = seq;
      route(ctx, std::move(d));
    }
  }
}

void IpNode::report(Counters& out) const {
  out = counters_;
  for (std::size_t i = 0; i < flows_.size(); ++i) {
    const auto& f = std::get<2>(flows_[i]);
    std::string p = "flow" + std::to_string(i) + "_";
    out[p + "bytes"] = f.bytes();
    out[p + "retransmissions"] = f.retransmissions();
    out[p + "complete"] = f.complete();
  }
}

// --- Gateway --------------------------------------------------------------------------

Gateway::Gateway(MirConfig config, Identifier address) : MirRouter(std::move(config)), address_(std::move(address)) {
  if (address_.kind() != IdKind::Ip) fail(ErrorCode::WrongKind, "gateway address must be an ip identifier");
  for (const char* c : {"translations", "tunnel_encap", "tunnel_decap", "ip_in", "ip_forwarded", "ip_no_route"}) {
    counters_[c] = 0;
  }
}

void Gateway::add_tunnel(FaceId face, Identifier peer_address) {
  tunnel_peers_[face] = peer_address;
  tunnel_faces_[peer_address] = face;
}

std::uint64_t Gateway::translations() const { return counters_.at("translations"); }

void Gateway::report(Counters& out) const { MirRouter::report(out); }

void Gateway::on_other(NodeContext& ctx, FaceId face, Message msg) {
  if (auto* d = std::get_if<SimIpDatagram>(&msg)) {
    ip_receive(ctx, face, std::move(*d));
  } else {
    MirRouter::on_other(ctx, face, std::move(msg));
  }
}

void Gateway::ip_forward(NodeContext& ctx, SimIpDatagram d) {
  if (auto face = forward_face(fib_, d.dst)) {
    bump("ip_forwarded");
    ctx.send(*face, std::move(d));
  } else {
    bump("ip_no_route");
  }
}

void Gateway::ip_receive(NodeContext& ctx, FaceId, SimIpDatagram d) {
  bump("ip_in");
  if (d.dst == address_) {
    if (d.proto == IpProto::Udp) {
      auto it = tunnel_faces_.find(d.src);
      if (it == tunnel_faces_.end()) {
        bump("ip_no_route");
        return;
      }
      Message inner;
      try {
        inner = decode_message(d.payload);
      } catch (const Error&) {
        bump("other_dropped");
        return;
      }
      bump("translations");
      bump("tunnel_decap");
      MirRouter::on_message(ctx, it->second, std::move(inner));
      return;
    }
    AppMessage m;
    try {
      m = decode_app_message(d.payload);
    } catch (const Error&) {
      bump("other_dropped");
      return;
    }
    auto it = server_pending_.find(d.seq);
    if (it == server_pending_.end()) return;
    Identifier name = it->second;
    server_pending_.erase(it);
    bump("translations");
    if (m.type != AppMessage::Type::Chunk) {
      nack(ctx, kAppFace, name, "ip server error");
      return;
    }
    DataPacket data;
    data.name = name;
    data.payload = std::move(m.body);
    data.final_segment = m.final_segment;
    sign_data(data, key_);
    satisfy(ctx, data);
    return;
  }

  if (auto it = tunnel_pending_.find(FlowKey{d.dst, d.src, d.seq}); it != tunnel_pending_.end()) {
    DataPacket data;
    data.name = it->second;
    data.content_type = ContentType::Tunnel;
    data.payload = encode(d);
    sign_data(data, key_);
    tunnel_pending_.erase(it);
    bump("translations");
    satisfy(ctx, data);
    return;
  }

  auto hit = fib_.longest_prefix_match(d.dst);
  if (!hit) {
    bump("ip_no_route");
    return;
  }
  if (const auto* f = std::get_if<Forward>(&hit->action)) {
    bump("ip_forwarded");
    ctx.send(f->face, std::move(d));
    return;
  }
  const Identifier& target = std::get<Translate>(hit->action).target;
  if (!target.is_hierarchical()) {
    bump("ip_no_route");
    return;
  }
  if (target.size() >= 2 && target.components()[0] == "tunnel") {
    bump("translations");
    express(ctx, encap_ip_in_interest(d, target, ctx.rng().next()));
    return;
  }
  AppMessage m;
  try {
    m = decode_app_message(d.payload);
  } catch (const Error&) {
    bump("other_dropped");
    return;
  }
  if (m.type != AppMessage::Type::Get) return;
  Identifier name = segment_name(target, m.segment);
  bump("translations");
  proxy_pending_[name].push_back(ProxyWaiter{d.src, d.dst, d.seq});
  if (!pit_.find(name)) {
    InterestPacket i;
    i.name = name;
    i.nonce = ctx.rng().next();
    express(ctx, std::move(i));
  }
}

void Gateway::on_local_data(NodeContext& ctx, const DataPacket& data) {
  if (data.content_type == ContentType::Tunnel) {
    SimIpDatagram d;
    try {
      d = decode_datagram(data.payload);
    } catch (const Error&) {
      bump("other_dropped");
      return;
    }
    bump("translations");
    ip_forward(ctx, std::move(d));
    return;
  }
  if (auto it = proxy_pending_.find(data.name); it != proxy_pending_.end()) {
    std::vector<ProxyWaiter> waiters = std::move(it->second);
    proxy_pending_.erase(it);
    AppMessage m;
    m.name = strip_segment(data.name).to_string();
    m.segment = segment_index(data.name).value_or(0);
    if (data.content_type == ContentType::Blob && data.final_segment) {
      m.type = AppMessage::Type::Chunk;
      m.final_segment = *data.final_segment;
      m.body = data.payload;
    } else {
      m.type = AppMessage::Type::Error;
    }
    for (const auto& w : waiters) {
      SimIpDatagram d;
      d.src = w.service;
      d.dst = w.client;
      d.proto = IpProto::Tcp;
      d.payload = encode(m);
      d.seq = w.seq;
      ip_forward(ctx, std::move(d));
    }
    return;
  }
  MirRouter::on_local_data(ctx, data);
}

void Gateway::send_virtual(NodeContext& ctx, FaceId face, Message msg) {
  auto it = tunnel_peers_.find(face);
  if (it == tunnel_peers_.end()) {
    MirRouter::send_virtual(ctx, face, std::move(msg));
    return;
  }
  SimIpDatagram d;
  d.src = address_;
  d.dst = it->second;
  d.proto = IpProto::Udp;
  d.payload = encode_message(msg);
  d.seq = next_seq_++;
  bump("translations");
  bump("tunnel_encap");
  ip_forward(ctx, std::move(d));
}

bool Gateway::on_tunnel_interest(NodeContext& ctx, FaceId face, const InterestPacket& interest) {
  SimIpDatagram d;
  try {
    d = decap_interest(interest);
  } catch (const Error&) {
    return false;
  }
  pit_.insert(interest, face, ctx.now() + config_.pit_lifetime);
  tunnel_pending_[FlowKey{d.src, d.dst, d.seq}] = interest.name;
  bump("translations");
  ip_forward(ctx, std::move(d));
  return true;
}

bool Gateway::on_translate_to_ip(NodeContext& ctx, FaceId face, const InterestPacket& interest,
                                 const Identifier& target) {
  pit_.insert(interest, face, ctx.now() + config_.pit_lifetime);
  std::uint64_t seq = next_seq_++;
  server_pending_[seq] = interest.name;
  AppMessage m;
  m.type = AppMessage::Type::Get;
  m.name = strip_segment(interest.name).to_string();
  m.segment = segment_index(interest.name).value_or(0);
  SimIpDatagram d;
  d.src = address_;
  d.dst = target;
  d.proto = IpProto::Tcp;
  d.payload = encode(m);
  d.seq = seq;
  bump("translations");
  ip_forward(ctx, std::move(d));
  return true;
}

}  // namespace minet
