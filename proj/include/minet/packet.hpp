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
#include <variant>

#include "minet/crypto.hpp"
#include "minet/identifier.hpp"

namespace minet {

inline constexpr std::uint8_t kDefaultHopLimit = 32;
inline constexpr std::size_t kSegmentSize = 8192;

struct InterestPacket {
  Identifier name;
  std::uint64_t nonce = 0;
  std::uint8_t hop_limit = kDefaultHopLimit;
  /// Encapsulated IP datagram (IP-over-CCN tunnelling).
  std::optional<Bytes> tunnel_payload;
  /// Routable locator to steer the Interest by when the name itself is not
  /// in the FIB.
  std::optional<Identifier> forwarding_hint;
  /// Opaque request parameters (used by resolution control Interests).
  std::optional<Bytes> parameters;

  friend bool operator==(const InterestPacket&, const InterestPacket&) = default;
};

enum class ContentType : std::uint8_t { Blob = 0, Locator = 1, Nack = 2, Tunnel = 3 };

struct DataPacket {
  Identifier name;
  Bytes payload;
  Bytes signature;
  PublisherId publisher;
  ContentType content_type = ContentType::Blob;
  /// Index of the last segment when the name carries a segment component.
  std::optional<std::uint64_t> final_segment;

  friend bool operator==(const DataPacket&, const DataPacket&) = default;
};

enum class IpProto : std::uint8_t { Tcp = 6, Udp = 17 };

struct SimIpDatagram {
  Identifier src;
  Identifier dst;
  IpProto proto = IpProto::Tcp;
  Bytes payload;
  std::uint64_t seq = 0;

  friend bool operator==(const SimIpDatagram&, const SimIpDatagram&) = default;
};

/// Opaque link-layer frame for non-CCN protocols that share the simulated
/// links (consensus traffic).
struct Frame {
  std::uint16_t channel = 0;
  Bytes body;

  friend bool operator==(const Frame&, const Frame&) = default;
};

using Message = std::variant<InterestPacket, DataPacket, SimIpDatagram, Frame>;

enum class MessageForm : std::uint8_t { Ccn, Ip };
MessageForm form_of(const Message& m) noexcept;

Bytes encode(const InterestPacket& p);
Bytes encode(const DataPacket& p);
Bytes encode(const SimIpDatagram& p);
Bytes encode_message(const Message& m);
InterestPacket decode_interest(ByteView data);
DataPacket decode_data(ByteView data);
SimIpDatagram decode_datagram(ByteView data);
Message decode_message(ByteView data);
std::size_t wire_size(const Message& m);

/// Bytes covered by a Data signature.
Bytes data_signed_portion(const DataPacket& p);
void sign_data(DataPacket& p, const KeyPair& keypair, const SignatureScheme& scheme = default_scheme());
bool verify_data(const DataPacket& p, ByteView public_key, const SignatureScheme& scheme = default_scheme());

/// `true` iff `data` satisfies `interest`: equal names, or the Interest name
/// is a prefix of the Data name.
bool satisfies(const DataPacket& data, const InterestPacket& interest) noexcept;

// Segment naming: "<base>/seg=<n>".
Identifier segment_name(const Identifier& base, std::uint64_t index);
/// Segment index of the last component, if it is a segment component.
std::optional<std::uint64_t> segment_index(const Identifier& name);
/// `name` without a trailing segment component.
Identifier strip_segment(const Identifier& name);

/// Request/response messages exchanged by IP applications inside datagrams.
struct AppMessage {
  enum class Type : std::uint8_t { Get = 1, Chunk = 2, Error = 3 };
  Type type = Type::Get;
  std::string name;
  std::uint64_t segment = 0;
  std::uint64_t final_segment = 0;
  Bytes body;

  friend bool operator==(const AppMessage&, const AppMessage&) = default;
};

Bytes encode(const AppMessage& m);
AppMessage decode_app_message(ByteView data);

}  // namespace minet
