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

#include <set>
#include <sstream>

#include "doctest.h"
#include "minet/error.hpp"
#include "minet/hpt_fib.hpp"
#include "oracles/lpm_oracle.hpp"
#include "support/generators.hpp"

using namespace minet;

namespace {

HptFibEntry fwd(std::string_view key, FaceId face) {
  return {parse_identifier(key), Forward{face}, Origin::Static};
}

HptFibEntry xlt(std::string_view key, std::string_view target) {
  return {parse_identifier(key), Translate{parse_identifier(target)}, Origin::Static};
}

Identifier random_v4(Rng& rng, bool prefix) {
  std::array<std::uint8_t, 4> a{10, static_cast<std::uint8_t>(rng.below(4)), static_cast<std::uint8_t>(rng.below(4)),
                                static_cast<std::uint8_t>(rng.below(256))};
  return Identifier::ip(a, prefix ? static_cast<int>(rng.between(8, 32)) : 32);
}

}  // namespace

TEST_CASE("exact and longest-prefix lookups") {
  HptFib fib;
  fib.insert(fwd("ccn:/a", 1));
  fib.insert(fwd("ccn:/a/b/c", 2));
  fib.insert(fwd("ip:10.0.0.0/8", 3));
  fib.insert(fwd("ip:10.1.0.0/16", 4));
  CHECK(fib.size() == 4);
  CHECK(std::get<Forward>(fib.longest_prefix_match(parse_identifier("ccn:/a/b"))->action).face == 1);
  CHECK(std::get<Forward>(fib.longest_prefix_match(parse_identifier("ccn:/a/b/c/d"))->action).face == 2);
  CHECK_FALSE(fib.longest_prefix_match(parse_identifier("ccn:/z")));
  CHECK_FALSE(fib.longest_prefix_match(parse_identifier("id:/a")));
  CHECK(std::get<Forward>(fib.longest_prefix_match(parse_identifier("ip:10.1.9.9"))->action).face == 4);
  CHECK(std::get<Forward>(fib.longest_prefix_match(parse_identifier("ip:10.2.9.9"))->action).face == 3);
  CHECK(fib.lookup_exact(parse_identifier("ccn:/a/b/c")));
  CHECK_FALSE(fib.lookup_exact(parse_identifier("ccn:/a/b")));
}

TEST_CASE("insert replaces and remove deletes") {
  HptFib fib;
  fib.insert(fwd("ccn:/a/b", 1));
  CHECK(fib.insert(fwd("ccn:/a/b", 9)) == 1);
  CHECK(std::get<Forward>(fib.lookup_exact(parse_identifier("ccn:/a/b"))->action).face == 9);
  CHECK(fib.remove(parse_identifier("ccn:/a/b")));
  CHECK_FALSE(fib.remove(parse_identifier("ccn:/a/b")));
  CHECK(fib.size() == 0);
  CHECK(fib.check_coherence());
}

TEST_CASE("translate appends the unmatched suffix") {
  HptFib fib;
  fib.insert(xlt("ip:10.9.0.0/16", "ccn:/tunnel/gw"));
  fib.insert(xlt("ccn:/old/site", "ccn:/new/site"));
  CHECK(fib.translate(parse_identifier("ccn:/old/site/x/y"))->to_string() == "ccn:/new/site/x/y");
  CHECK(fib.translate(parse_identifier("ip:10.9.1.1"))->to_string() == "ccn:/tunnel/gw");
  CHECK_FALSE(fib.translate(parse_identifier("ccn:/other")));
}

TEST_CASE("face validator refuses unknown faces") {
  HptFib fib;
  fib.set_face_validator([](FaceId f) { return f < 4; });
  fib.insert(fwd("ccn:/ok", 3));
  CHECK_THROWS_AS(fib.insert(fwd("ccn:/bad", 7)), Error);
  CHECK(fib.size() == 1);
}

TEST_CASE("agrees with linear scan under random inserts and removes") {
  Rng rng(42);
  HptFib fib;
  oracle::LinearFib ref;
  for (int step = 0; step < 10000; ++step) {
    bool ip = rng.chance(0.3);
    Identifier key = ip ? random_v4(rng, true) : testing::random_small_name(rng, 5, 3);
    if (rng.chance(0.25)) {
      CHECK(fib.remove(key) == ref.remove(key));
    } else {
      HptFibEntry e{key, Forward{static_cast<FaceId>(rng.below(16))}, Origin::Static};
      fib.insert(e);
      ref.insert(e);
    }
    Identifier q = ip ? random_v4(rng, false) : testing::random_small_name(rng, 6, 3);
    auto got = fib.longest_prefix_match(q);
    auto want = ref.lpm(q);
    REQUIRE_MESSAGE(got.has_value() == want.has_value(), q.to_string());
    if (got) CHECK(*got == *want);
  }
  CHECK(fib.size() == ref.size());
  CHECK(fib.check_coherence());
}

TEST_CASE("dump and load round trip") {
  auto entries = generate_entries(2000, 9);
  HptFib fib;
  for (const auto& e : entries) fib.insert(e);
  std::string text = dump_fib(fib);
  HptFib copy;
  std::istringstream in(text);
  CHECK(load_fib(copy, in) == fib.size());
  CHECK(copy.entries() == fib.entries());
  CHECK(dump_fib(copy) == text);
}

TEST_CASE("load reports the offending line") {
  HptFib fib;
  std::istringstream in("# comment\nccn:/a FWD 1\n\nccn:/b JUMP 2\n");
  try {
    load_fib(fib, in);
    FAIL("expected ConfigError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ConfigError);
    CHECK(std::string(e.what()).find("line 4") != std::string::npos);
  }
}

TEST_CASE("generator yields distinct keys deterministically") {
  auto a = generate_entries(5000, 123);
  auto b = generate_entries(5000, 123);
  CHECK(a == b);
  std::set<Identifier> keys;
  std::set<IdKind> kinds;
  for (const auto& e : a) {
    keys.insert(e.key);
    kinds.insert(e.key.kind());
  }
  CHECK(keys.size() == a.size());
  CHECK(kinds.size() == 5);
}
