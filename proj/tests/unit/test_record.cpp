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

#include "doctest.h"
#include "minet/error.hpp"
#include "minet/record.hpp"
#include "minet/rng.hpp"

using namespace minet;

TEST_CASE("sign and verify") {
  auto kp = keypair_from_label("alice");
  auto cv = as_bytes("hello world");
  Bytes content(cv.begin(), cv.end());
  auto rec = sign_record(parse_identifier("ccn:/pku/video/1"), sha256(content),
                         parse_identifier("ip:10.0.0.7"), kp);
  CHECK(verify_record(rec, kp.public_key));
  CHECK(verify_record(rec, kp.public_key, content));
  CHECK_FALSE(verify_record(rec, keypair_from_label("mallory").public_key));
  CHECK(decode_record(encode_record(rec)) == rec);
}

TEST_CASE("non-content names cannot be signed") {
  auto kp = keypair_from_label("alice");
  CHECK_THROWS_AS(sign_record(parse_identifier("id:/alice"), sha256(std::string_view("x")),
                              parse_identifier("ip:10.0.0.1"), kp),
                  Error);
}

TEST_CASE("any single-bit flip breaks verification") {
  auto kp = keypair_from_label("bob");
  auto cv = as_bytes("payload bytes");
  Bytes content(cv.begin(), cv.end());
  auto rec = sign_record(parse_identifier("ccn:/x/y"), sha256(content), parse_identifier("ccn:/loc/a"), kp);
  Rng rng(1);
  for (int trial = 0; trial < 200; ++trial) {
    auto copy = rec;
    Bytes c = content;
    switch (trial % 3) {
      case 0: copy.signature[rng.below(copy.signature.size())] ^= 1u << rng.below(8); break;
      case 1: copy.content_hash.bytes[rng.below(32)] ^= 1u << rng.below(8); break;
      default: c[rng.below(c.size())] ^= 1u << rng.below(8); break;
    }
    CHECK_FALSE(verify_record(copy, kp.public_key, c));
  }
}

TEST_CASE("truncated encodings are rejected") {
  auto kp = keypair_from_label("carol");
  auto rec = sign_record(parse_identifier("ccn:/a"), sha256(std::string_view("z")), parse_identifier("ccn:/b"), kp);
  Bytes enc = encode_record(rec);
  for (std::size_t n = 0; n < enc.size(); n += 7) {
    Bytes cut(enc.begin(), enc.begin() + static_cast<long>(n));
    CHECK_THROWS_AS(decode_record(cut), Error);
  }
}
