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

#include <array>
#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace minet {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

/// 256-bit SHA-256 digest.
struct Digest {
  std::array<std::uint8_t, 32> bytes{};

  auto operator<=>(const Digest&) const = default;
  ByteView view() const { return bytes; }
};

Digest sha256(ByteView data);
Digest sha256(std::string_view data);

std::string to_hex(ByteView data);
std::string to_hex(const Digest& d);
Bytes from_hex(std::string_view hex);
Digest digest_from_hex(std::string_view hex);

inline ByteView as_bytes(std::string_view s) {
  return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}

/// Publisher identity: SHA-256 of the publisher's public key.
struct PublisherId {
  Digest value;

  auto operator<=>(const PublisherId&) const = default;
};

struct KeyPair {
  Bytes public_key;
  Bytes secret_key;
};

/// Asymmetric signature scheme. Implementations must be deterministic:
/// the same seed yields the same key pair, the same message the same
/// signature.
class SignatureScheme {
 public:
  virtual ~SignatureScheme() = default;

  virtual std::string_view name() const = 0;
  virtual KeyPair keypair_from_seed(const Digest& seed) const = 0;
  virtual Bytes sign(ByteView message, ByteView secret_key) const = 0;
  virtual bool verify(ByteView message, ByteView signature,
                      ByteView public_key) const = 0;
};

/// Ed25519 (libsodium).
const SignatureScheme& ed25519();

/// Scheme used by records, transactions and votes.
const SignatureScheme& default_scheme();

PublisherId publisher_id(ByteView public_key);

/// Derives a key pair from an arbitrary label, for reproducible fixtures.
KeyPair keypair_from_label(std::string_view label);

}  // namespace minet
