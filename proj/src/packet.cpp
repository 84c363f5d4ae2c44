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

#include "minet/packet.hpp"

#include <charconv>

#include "minet/error.hpp"
#include "minet/tlv.hpp"

namespace minet {
namespace {

enum : std::uint8_t {
  kInterest = 0x05,
  kData = 0x06,
  kDatagram = 0x07,
  kFrame = 0x08,
  kApp = 0x09,

  kName = 0x20,
  kNonce = 0x21,
  kHopLimit = 0x22,
  kTunnel = 0x23,
  kHint = 0x24,
  kParams = 0x25,
  kPayload = 0x26,
  kSignature = 0x27,
  kPublisher = 0x28,
  kContentType = 0x29,
  kFinalSegment = 0x2a,
  kSrc = 0x2b,
  kDst = 0x2c,
  kProto = 0x2d,
  kSeq = 0x2e,
  kChannel = 0x2f,
  kAppType = 0x30,
  kSegment = 0x31,
};

constexpr std::string_view kSegPrefix = "seg=";

TlvWriter interest_body(const InterestPacket& p) {
  TlvWriter w;
  w.put(kName, p.name.to_string()).put_u64(kNonce, p.nonce).put_u64(kHopLimit, p.hop_limit);
  if (p.tunnel_payload) w.put(kTunnel, *p.tunnel_payload);
  if (p.forwarding_hint) w.put(kHint, p.forwarding_hint->to_string());
  if (p.parameters) w.put(kParams, *p.parameters);
  return w;
}

TlvWriter data_fields(const DataPacket& p, bool with_signature) {
  TlvWriter w;
  w.put(kName, p.name.to_string())
      .put_u64(kContentType, static_cast<std::uint64_t>(p.content_type))
      .put(kPayload, p.payload)
      .put_digest(kPublisher, p.publisher.value);
  if (p.final_segment) w.put_u64(kFinalSegment, *p.final_segment);
  if (with_signature) w.put(kSignature, p.signature);
  return w;
}

Bytes wrap(std::uint8_t type, const TlvWriter& body) {
  TlvWriter outer;
  outer.put_nested(type, body);
  return std::move(outer).take();
}

ByteView unwrap(ByteView data, std::uint8_t type) {
  TlvReader r(data);
  auto f = r.expect(type);
  if (!r.done()) fail(ErrorCode::BadEncoding, "trailing bytes after message");
  return f.value;
}

InterestPacket interest_from(ByteView body) {
  TlvReader r(body);
  InterestPacket p;
  p.name = parse_identifier(r.expect(kName).as_string());
  p.nonce = r.expect(kNonce).as_u64();
  std::uint64_t hops = r.expect(kHopLimit).as_u64();
  if (hops > 255) fail(ErrorCode::BadEncoding, "hop limit out of range");
  p.hop_limit = static_cast<std::uint8_t>(hops);
  if (!r.done() && r.peek_type() == kTunnel) p.tunnel_payload = r.next().as_bytes();
  if (!r.done() && r.peek_type() == kHint) p.forwarding_hint = parse_identifier(r.next().as_string());
  if (!r.done() && r.peek_type() == kParams) p.parameters = r.next().as_bytes();
  if (!r.done()) fail(ErrorCode::BadEncoding, "unexpected field in interest");
  return p;
}

DataPacket data_from(ByteView body) {
  TlvReader r(body);
  DataPacket p;
  p.name = parse_identifier(r.expect(kName).as_string());
  std::uint64_t ct = r.expect(kContentType).as_u64();
  if (ct > 3) fail(ErrorCode::BadEncoding, "unknown content type");
  p.content_type = static_cast<ContentType>(ct);
  p.payload = r.expect(kPayload).as_bytes();
  p.publisher = PublisherId{r.expect(kPublisher).as_digest()};
  if (!r.done() && r.peek_type() == kFinalSegment) p.final_segment = r.next().as_u64();
  p.signature = r.expect(kSignature).as_bytes();
  if (!r.done()) fail(ErrorCode::BadEncoding, "unexpected field in data");
  return p;
}

SimIpDatagram datagram_from(ByteView body) {
  TlvReader r(body);
  SimIpDatagram d;
  d.src = parse_identifier(r.expect(kSrc).as_string());
  d.dst = parse_identifier(r.expect(kDst).as_string());
  if (d.src.kind() != IdKind::Ip || d.dst.kind() != IdKind::Ip) {
    fail(ErrorCode::BadEncoding, "datagram endpoints must be ip identifiers");
  }
  std::uint64_t proto = r.expect(kProto).as_u64();
  if (proto != 6 && proto != 17) fail(ErrorCode::BadEncoding, "unknown ip protocol");
  d.proto = static_cast<IpProto>(proto);
  d.payload = r.expect(kPayload).as_bytes();
  d.seq = r.expect(kSeq).as_u64();
  if (!r.done()) fail(ErrorCode::BadEncoding, "unexpected field in datagram");
  return d;
}

Frame frame_from(ByteView body) {
  TlvReader r(body);
  Frame f;
  std::uint64_t ch = r.expect(kChannel).as_u64();
  if (ch > 0xffff) fail(ErrorCode::BadEncoding, "frame channel out of range");
  f.channel = static_cast<std::uint16_t>(ch);
  f.body = r.expect(kPayload).as_bytes();
  if (!r.done()) fail(ErrorCode::BadEncoding, "unexpected field in frame");
  return f;
}

}  // namespace

MessageForm form_of(const Message& m) noexcept {
  return std::holds_alternative<SimIpDatagram>(m) ? MessageForm::Ip : MessageForm::Ccn;
}

Bytes encode(const InterestPacket& p) { return wrap(kInterest, interest_body(p)); }
Bytes encode(const DataPacket& p) { return wrap(kData, data_fields(p, true)); }

Bytes encode(const SimIpDatagram& d) {
  TlvWriter w;
  w.put(kSrc, d.src.to_string())
      .put(kDst, d.dst.to_string())
      .put_u64(kProto, static_cast<std::uint64_t>(d.proto))
      .put(kPayload, d.payload)
      .put_u64(kSeq, d.seq);
  return wrap(kDatagram, w);
}

Bytes encode_message(const Message& m) {
  return std::visit(
      [](const auto& p) -> Bytes {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, Frame>) {
          TlvWriter w;
          w.put_u64(kChannel, p.channel).put(kPayload, p.body);
          return wrap(kFrame, w);
        } else {
          return encode(p);
        }
      },
      m);
}

InterestPacket decode_interest(ByteView data) { return interest_from(unwrap(data, kInterest)); }
DataPacket decode_data(ByteView data) { return data_from(unwrap(data, kData)); }
SimIpDatagram decode_datagram(ByteView data) { return datagram_from(unwrap(data, kDatagram)); }

Message decode_message(ByteView data) {
  TlvReader r(data);
  auto f = r.next();
  if (!r.done()) fail(ErrorCode::BadEncoding, "trailing bytes after message");
  switch (f.type) {
    case kInterest: return interest_from(f.value);
    case kData: return data_from(f.value);
    case kDatagram: return datagram_from(f.value);
    case kFrame: return frame_from(f.value);
    default: fail(ErrorCode::BadEncoding, "unknown message type");
  }
}

std::size_t wire_size(const Message& m) { return encode_message(m).size(); }

Bytes data_signed_portion(const DataPacket& p) { return wrap(kData, data_fields(p, false)); }

void sign_data(DataPacket& p, const KeyPair& keypair, const SignatureScheme& scheme) {
  p.publisher = publisher_id(keypair.public_key);
  p.signature = scheme.sign(data_signed_portion(p), keypair.secret_key);
}

bool verify_data(const DataPacket& p, ByteView public_key, const SignatureScheme& scheme) {
  return publisher_id(public_key) == p.publisher &&
         scheme.verify(data_signed_portion(p), p.signature, public_key);
}

bool satisfies(const DataPacket& data, const InterestPacket& interest) noexcept {
  return covers(interest.name, data.name);
}

Identifier segment_name(const Identifier& base, std::uint64_t index) {
  return base.append(std::string(kSegPrefix) + std::to_string(index));
}

std::optional<std::uint64_t> segment_index(const Identifier& name) {
  if (!name.is_hierarchical() || name.size() == 0) return std::nullopt;
  const std::string& last = name.components().back();
  if (last.size() <= kSegPrefix.size() || last.compare(0, kSegPrefix.size(), kSegPrefix) != 0) {
    return std::nullopt;
  }
  std::uint64_t v = 0;
  const char* b = last.data() + kSegPrefix.size();
  const char* e = last.data() + last.size();
  auto [ptr, ec] = std::from_chars(b, e, v);
  if (ec != std::errc() || ptr != e) return std::nullopt;
  return v;
}

Identifier strip_segment(const Identifier& name) {
  if (name.size() > 1 && segment_index(name)) return name.prefix(name.size() - 1);
  return name;
}

Bytes encode(const AppMessage& m) {
  TlvWriter w;
  w.put_u64(kAppType, static_cast<std::uint64_t>(m.type))
      .put(kName, m.name)
      .put_u64(kSegment, m.segment)
      .put_u64(kFinalSegment, m.final_segment)
      .put(kPayload, m.body);
  return wrap(kApp, w);
}

AppMessage decode_app_message(ByteView data) {
  TlvReader r(unwrap(data, kApp));
  AppMessage m;
  std::uint64_t t = r.expect(kAppType).as_u64();
  if (t < 1 || t > 3) fail(ErrorCode::BadEncoding, "unknown app message type");
  m.type = static_cast<AppMessage::Type>(t);
  m.name = r.expect(kName).as_string();
  m.segment = r.expect(kSegment).as_u64();
  m.final_segment = r.expect(kFinalSegment).as_u64();
  m.body = r.expect(kPayload).as_bytes();
  if (!r.done()) fail(ErrorCode::BadEncoding, "unexpected field in app message");
  return m;
}

}  // namespace minet
