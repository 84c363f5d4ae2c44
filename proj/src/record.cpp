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

#include "minet/record.hpp"

#include "minet/error.hpp"
#include "minet/tlv.hpp"

namespace minet {
namespace {

enum : std::uint8_t {
  kName = 0x10,
  kPublisher = 0x11,
  kContentHash = 0x12,
  kLocator = 0x13,
  kSignature = 0x14,
  kSigned = 0x15,
};

}  // namespace

Bytes signed_portion(const Identifier& name, const Digest& content_hash, const Identifier& locator) {
  TlvWriter w;
  w.put(kName, name.to_string()).put_digest(kContentHash, content_hash).put(kLocator, locator.to_string());
  TlvWriter outer;
  outer.put_nested(kSigned, w);
  return std::move(outer).take();
}

ResourceRecord sign_record(const Identifier& name, const Digest& content_hash,
                           const Identifier& locator, const KeyPair& keypair,
                           const SignatureScheme& scheme) {
  if (name.kind() != IdKind::Content) {
    fail(ErrorCode::WrongKind, "resource names must be content identifiers: " + name.to_string());
  }
  ResourceRecord r;
  r.name = name;
  r.publisher = publisher_id(keypair.public_key);
  r.content_hash = content_hash;
  r.locator = locator;
  r.signature = scheme.sign(signed_portion(name, content_hash, locator), keypair.secret_key);
  return r;
}

bool verify_record(const ResourceRecord& record, ByteView public_key, const SignatureScheme& scheme) {
  if (record.name.kind() != IdKind::Content) return false;
  if (publisher_id(public_key) != record.publisher) return false;
  return scheme.verify(signed_portion(record.name, record.content_hash, record.locator),
                       record.signature, public_key);
}

bool verify_record(const ResourceRecord& record, ByteView public_key, ByteView content,
                   const SignatureScheme& scheme) {
  return verify_record(record, public_key, scheme) && sha256(content) == record.content_hash;
}

Bytes encode_record(const ResourceRecord& record) {
  TlvWriter w;
  w.put(kName, record.name.to_string())
      .put_digest(kPublisher, record.publisher.value)
      .put_digest(kContentHash, record.content_hash)
      .put(kLocator, record.locator.to_string())
      .put(kSignature, record.signature);
  return std::move(w).take();
}

ResourceRecord decode_record(ByteView data) {
  TlvReader r(data);
  ResourceRecord rec;
  rec.name = parse_identifier(r.expect(kName).as_string());
  rec.publisher = PublisherId{r.expect(kPublisher).as_digest()};
  rec.content_hash = r.expect(kContentHash).as_digest();
  rec.locator = parse_identifier(r.expect(kLocator).as_string());
  rec.signature = r.expect(kSignature).as_bytes();
  if (!r.done()) fail(ErrorCode::BadEncoding, "trailing bytes after record");
  return rec;
}

}  // namespace minet
