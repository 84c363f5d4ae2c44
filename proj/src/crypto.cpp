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

#include "minet/crypto.hpp"

#include <sodium.h>

#include "minet/error.hpp"

namespace minet {
namespace {

void ensure_sodium() {
  static const bool ready = [] { return sodium_init() >= 0; }();
  if (!ready) {
    throw std::runtime_error("libsodium initialisation failed");
  }
}

class Ed25519 final : public SignatureScheme {
 public:
  std::string_view name() const override { return "ed25519"; }

  KeyPair keypair_from_seed(const Digest& seed) const override {
    ensure_sodium();
    KeyPair kp;
    kp.public_key.resize(crypto_sign_PUBLICKEYBYTES);
    kp.secret_key.resize(crypto_sign_SECRETKEYBYTES);
    crypto_sign_seed_keypair(kp.public_key.data(), kp.secret_key.data(),
                             seed.bytes.data());
    return kp;
  }

  Bytes sign(ByteView message, ByteView secret_key) const override {
    ensure_sodium();
    if (secret_key.size() != crypto_sign_SECRETKEYBYTES) {
      fail(ErrorCode::InvalidArgument, "ed25519: bad secret key length");
    }
    Bytes sig(crypto_sign_BYTES);
    crypto_sign_detached(sig.data(), nullptr, message.data(), message.size(),
                         secret_key.data());
    return sig;
  }

  bool verify(ByteView message, ByteView signature,
              ByteView public_key) const override {
    ensure_sodium();
    if (signature.size() != crypto_sign_BYTES ||
        public_key.size() != crypto_sign_PUBLICKEYBYTES) {
      return false;
    }
    return crypto_sign_verify_detached(signature.data(), message.data(),
                                       message.size(), public_key.data()) == 0;
  }
};

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

Digest sha256(ByteView data) {
  ensure_sodium();
  Digest d;
  crypto_hash_sha256(d.bytes.data(), data.data(), data.size());
  return d;
}

Digest sha256(std::string_view data) { return sha256(as_bytes(data)); }

std::string to_hex(ByteView data) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(data.size() * 2);
  for (std::uint8_t b : data) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0xf]);
  }
  return out;
}

std::string to_hex(const Digest& d) { return to_hex(d.view()); }

Bytes from_hex(std::string_view hex) {
  if (hex.size() % 2 != 0) {
    fail(ErrorCode::BadEncoding, "hex string has odd length");
  }
  Bytes out(hex.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i) {
    int hi = hex_value(hex[2 * i]);
    int lo = hex_value(hex[2 * i + 1]);
    if (hi < 0 || lo < 0) {
      fail(ErrorCode::BadEncoding, "invalid hex digit");
    }
    out[i] = static_cast<std::uint8_t>(hi << 4 | lo);
  }
  return out;
}

Digest digest_from_hex(std::string_view hex) {
  Bytes raw = from_hex(hex);
  if (raw.size() != 32) {
    fail(ErrorCode::BadEncoding, "digest must be 32 bytes");
  }
  Digest d;
  std::copy(raw.begin(), raw.end(), d.bytes.begin());
  return d;
}

const SignatureScheme& ed25519() {
  static const Ed25519 scheme;
  return scheme;
}

const SignatureScheme& default_scheme() { return ed25519(); }

PublisherId publisher_id(ByteView public_key) {
  return PublisherId{sha256(public_key)};
}

KeyPair keypair_from_label(std::string_view label) {
  return default_scheme().keypair_from_seed(sha256(label));
}

}  // namespace minet
