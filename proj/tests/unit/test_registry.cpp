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

#include <filesystem>
#include <fstream>
#include <random>

#include "doctest.h"
#include "minet/error.hpp"
#include "minet/registry.hpp"

using namespace minet;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path = fs::temp_directory_path() / ("minet-reg-" + std::to_string(std::random_device{}()));
  ~TempDir() { fs::remove_all(path); }
};

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return ErrorCode::Io;
}

Bytes payload(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  Bytes b(n);
  for (auto& x : b) x = static_cast<std::uint8_t>(rng.next());
  return b;
}

}  // namespace

TEST_CASE("register, publish and query end to end") {
  TempDir dir;
  KeyPair alice = KeyFile::from_seed(sha256("alice")).key;
  KeyPair bob = KeyFile::from_seed(sha256("bob")).key;
  Bytes video = payload(50000, 1);
  {
    Registry reg(dir.path);
    reg.register_prefix(parse_identifier("ccn:/pkusz"), alice, as_bytes("Alice"));
    ResourceRecord rec = reg.publish(parse_identifier("ccn:/pkusz/v1"), video, alice);
    CHECK(rec.content_hash == sha256(video));
    QueryResult q = reg.query(parse_identifier("ccn:/pkusz/v1"));
    CHECK(q.content == video);
    CHECK(q.fetch_ticks > 0);

    CHECK(code_of([&] { reg.register_prefix(parse_identifier("ccn:/pkusz"), bob, as_bytes("Bob")); }) ==
          ErrorCode::PrefixTaken);
    CHECK(code_of([&] { reg.register_prefix(parse_identifier("ccn:/pkusz/lab"), bob, as_bytes("Bob")); }) ==
          ErrorCode::PrefixTaken);
    std::size_t audited = reg.index().audit().size();
    CHECK(code_of([&] { reg.publish(parse_identifier("ccn:/pkusz/v2"), video, bob); }) == ErrorCode::NotRegistered);
    REQUIRE(reg.index().audit().size() == audited + 1);
    CHECK(reg.index().audit().back().height == reg.chain().height());
    CHECK_FALSE(reg.store().record(parse_identifier("ccn:/pkusz/v2")).has_value());
    CHECK(code_of([&] { reg.query(parse_identifier("ccn:/pkusz/v2")); }) == ErrorCode::NotFound);
  }
  Registry again(dir.path);
  CHECK(again.chain().height() == 5);
  CHECK(again.index().dump() == Registry(dir.path).index().dump());
  CHECK(again.query(parse_identifier("ccn:/pkusz/v1")).content == video);

  std::string hex = to_hex(sha256(video));
  {
    std::fstream f(dir.path / "store" / "blobs" / hex.substr(0, 2) / hex, std::ios::in | std::ios::out | std::ios::binary);
    f.seekp(100);
    f.put('\x5a');
  }
  CHECK(code_of([&] { again.query(parse_identifier("ccn:/pkusz/v1")); }) == ErrorCode::IntegrityFailure);
}

TEST_CASE("tampered chain logs are refused") {
  TempDir dir;
  {
    Registry reg(dir.path);
    reg.register_prefix(parse_identifier("ccn:/a"), KeyFile::from_seed(sha256("a")).key, as_bytes("a"));
  }
  std::string log;
  {
    std::ifstream in(dir.path / "chain.log");
    std::getline(in, log);
  }
  std::size_t at = log.size() / 8;  // inside the transaction, covered by the block hash
  log[at] = log[at] == '0' ? '1' : '0';
  std::ofstream(dir.path / "chain.log", std::ios::trunc) << log << '\n';
  CHECK(code_of([&] { Registry r(dir.path); }) == ErrorCode::IntegrityFailure);
}

TEST_CASE("key files round trip") {
  TempDir dir;
  fs::create_directories(dir.path);
  KeyFile k = KeyFile::from_seed(sha256("k"));
  k.save(dir.path / "k.json");
  KeyFile back = KeyFile::load(dir.path / "k.json");
  CHECK(back.key.public_key == k.key.public_key);
  std::ofstream(dir.path / "bad.json") << "{\"scheme\": \"ed25519\", \"seed\": \"zz\", \"public_key\": \"\"}";
  CHECK(code_of([&] { KeyFile::load(dir.path / "bad.json"); }) == ErrorCode::ConfigError);
}
