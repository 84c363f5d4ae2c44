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

#include <optional>

#include "minet/crypto.hpp"
#include "minet/identifier.hpp"

namespace minet {

/// A published resource bound to its publisher's key. The signature covers
/// (name, content_hash, locator); the publisher id is the digest of the key
/// that produced it.
struct ResourceRecord {
  Identifier name;
  PublisherId publisher;
  Digest content_hash;
  Identifier locator;
  Bytes signature;

  friend bool operator==(const ResourceRecord&, const ResourceRecord&) = default;
};

/// Bytes covered by the record signature.
Bytes signed_portion(const Identifier& name, const Digest& content_hash, const Identifier& locator);

/// Throws WrongKind unless `name` is a content identifier.
ResourceRecord sign_record(const Identifier& name, const Digest& content_hash,
                           const Identifier& locator, const KeyPair& keypair,
                           const SignatureScheme& scheme = default_scheme());

/// Signature valid under `public_key` and publisher id derived from it.
bool verify_record(const ResourceRecord& record, ByteView public_key,
                   const SignatureScheme& scheme = default_scheme());

/// As above, and additionally the stored bytes hash to content_hash.
bool verify_record(const ResourceRecord& record, ByteView public_key, ByteView content,
                   const SignatureScheme& scheme = default_scheme());

Bytes encode_record(const ResourceRecord& record);
ResourceRecord decode_record(ByteView data);

}  // namespace minet
