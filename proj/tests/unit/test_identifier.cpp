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
#include "minet/identifier.hpp"
#include "support/generators.hpp"

using namespace minet;

namespace {

ErrorCode code_of(std::string_view text) {
  try {
    parse_identifier(text);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected parse failure for " << text);
  return ErrorCode::Io;
}

}  // namespace

TEST_CASE("canonical forms parse and print") {
  CHECK(parse_identifier("ccn:/a/b").to_string() == "ccn:/a/b");
  CHECK(parse_identifier("/a/b") == parse_identifier("ccn:/a/b"));
  CHECK(parse_identifier("id:/alice").kind() == IdKind::Identity);
  CHECK(parse_identifier("geo:/cn/gd/sz").size() == 3);
  auto dns = parse_identifier("dns:www.example.com");
  CHECK(dns.kind() == IdKind::LegacyDomain);
  CHECK(dns.components() == std::vector<std::string>{"com", "example", "www"});
  CHECK(dns.to_string() == "dns:www.example.com");
  auto net = parse_identifier("ip:10.1.2.3/8");
  CHECK(net.to_string() == "ip:10.0.0.0/8");
  CHECK(parse_identifier("ip:2001:db8::1").is_v6());
}

TEST_CASE("malformed identifiers are rejected with specific codes") {
  CHECK(code_of("") == ErrorCode::EmptyName);
  CHECK(code_of("ccn:/") == ErrorCode::EmptyName);
  CHECK(code_of("ccn:/a//b") == ErrorCode::IllegalLabel);
  CHECK(code_of("ccn:/a b") == ErrorCode::IllegalLabel);
  CHECK(code_of("ip:300.1.1.1") == ErrorCode::BadIpSyntax);
  CHECK(code_of("ip:10.0.0.0/33") == ErrorCode::BadIpSyntax);
  CHECK(code_of("foo:/x") == ErrorCode::BadScheme);
  CHECK(code_of(std::string("ccn:/a\xff")) == ErrorCode::IllegalLabel);
}

TEST_CASE("round trip over random identifiers") {
  Rng rng(7);
  for (int i = 0; i < 10000; ++i) {
    Identifier id = testing::random_identifier(rng);
    std::string s = id.to_string();
    Identifier back = parse_identifier(s);
    REQUIRE_MESSAGE(back == id, s);
    CHECK(back.to_string() == s);
  }
}

TEST_CASE("prefix relation matches component comparison") {
  Rng rng(11);
  for (int i = 0; i < 5000; ++i) {
    auto a = testing::random_small_name(rng);
    auto b = testing::random_small_name(rng);
    bool expected = a.size() <= b.size() &&
                    std::equal(a.components().begin(), a.components().end(), b.components().begin());
    CHECK(is_prefix_of(a, b) == expected);
  }
  CHECK_THROWS_AS(is_prefix_of(parse_identifier("ccn:/a"), parse_identifier("id:/a")), Error);
  CHECK_FALSE(covers(parse_identifier("ccn:/a"), parse_identifier("id:/a")));
}

TEST_CASE("ip prefix containment is bitwise") {
  Rng rng(3);
  for (int i = 0; i < 2000; ++i) {
    std::array<std::uint8_t, 4> a{}, b{};
    for (auto& x : a) x = static_cast<std::uint8_t>(rng.below(256));
    b = a;
    if (rng.chance(0.5)) b[rng.below(4)] ^= static_cast<std::uint8_t>(1u << rng.below(8));
    int len = static_cast<int>(rng.between(0, 32));
    auto net = Identifier::ip(a, len);
    auto host = Identifier::ip(b);
    std::uint32_t ua = (a[0] << 24) | (a[1] << 16) | (a[2] << 8) | a[3];
    std::uint32_t ub = (b[0] << 24) | (b[1] << 16) | (b[2] << 8) | b[3];
    std::uint32_t mask = len == 0 ? 0 : ~0u << (32 - len);
    CHECK(is_prefix_of(net, host) == ((ua & mask) == (ub & mask)));
  }
}

TEST_CASE("ordering is consistent with equality") {
  Rng rng(5);
  for (int i = 0; i < 2000; ++i) {
    auto a = testing::random_identifier(rng);
    auto b = testing::random_identifier(rng);
    CHECK(((a <=> b) == 0) == (a == b));
    CHECK(((a <=> b) < 0) == ((b <=> a) > 0));
    if (a == b) CHECK(IdentifierHash{}(a) == IdentifierHash{}(b));
  }
}
