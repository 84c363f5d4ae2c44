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
#include "minet/packet.hpp"
#include "support/generators.hpp"

using namespace minet;
using minet::testing::random_small_name;

namespace {

Bytes random_bytes(Rng& rng, std::size_t max) {
  Bytes b(rng.below(max + 1));
  for (auto& x : b) x = static_cast<std::uint8_t>(rng.next());
  return b;
}

Identifier v4(std::uint8_t last) {
  std::array<std::uint8_t, 4> a{10, 0, 0, last};
  return Identifier::ip(a, 32);
}

}  // namespace

TEST_CASE("interest, data and datagram survive encoding") {
  Rng rng(11);
  for (int i = 0; i < 500; ++i) {
    InterestPacket in;
    in.name = random_small_name(rng);
    in.nonce = rng.next();
    in.hop_limit = static_cast<std::uint8_t>(rng.below(256));
    if (rng.chance(0.5)) in.tunnel_payload = random_bytes(rng, 64);
    if (rng.chance(0.5)) in.forwarding_hint = random_small_name(rng);
    if (rng.chance(0.5)) in.parameters = random_bytes(rng, 32);
    Bytes wire = encode(in);
    CHECK(decode_interest(wire) == in);
    CHECK(wire_size(Message{in}) == wire.size());
    CHECK(std::get<InterestPacket>(decode_message(encode_message(Message{in}))) == in);

    DataPacket d;
    d.name = random_small_name(rng);
    d.payload = random_bytes(rng, 300);
    d.content_type = static_cast<ContentType>(rng.below(4));
    if (rng.chance(0.5)) d.final_segment = rng.below(1000);
    d.signature = random_bytes(rng, 64);
    CHECK(decode_data(encode(d)) == d);

    SimIpDatagram g{v4(1), v4(static_cast<std::uint8_t>(rng.below(256))), rng.chance(0.5) ? IpProto::Tcp : IpProto::Udp,
                    random_bytes(rng, 100), rng.next()};
    CHECK(decode_datagram(encode(g)) == g);
    CHECK(std::get<SimIpDatagram>(decode_message(encode_message(Message{g}))) == g);

    Frame f{static_cast<std::uint16_t>(rng.below(65536)), random_bytes(rng, 50)};
    CHECK(std::get<Frame>(decode_message(encode_message(Message{f}))) == f);
  }
}

TEST_CASE("malformed packets are rejected") {
  InterestPacket in;
  in.name = parse_identifier("ccn:/a/b");
  Bytes wire = encode(in);
  for (std::size_t cut = 0; cut < wire.size(); ++cut) {
    Bytes part(wire.begin(), wire.begin() + static_cast<std::ptrdiff_t>(cut));
    CHECK_THROWS_AS(decode_interest(part), Error);
  }
  CHECK_THROWS_AS(decode_data(wire), Error);
  try {
    decode_data(wire);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::BadEncoding);
  }
}

TEST_CASE("message forms") {
  CHECK(form_of(Message{InterestPacket{}}) == MessageForm::Ccn);
  CHECK(form_of(Message{DataPacket{}}) == MessageForm::Ccn);
  CHECK(form_of(Message{SimIpDatagram{v4(1), v4(2)}}) == MessageForm::Ip);
}

TEST_CASE("data signatures cover name and payload") {
  KeyPair kp = keypair_from_label("producer");
  DataPacket d;
  d.name = parse_identifier("ccn:/x/y/seg=0");
  d.payload = Bytes{1, 2, 3};
  d.final_segment = 4;
  sign_data(d, kp);
  CHECK(d.publisher == publisher_id(kp.public_key));
  CHECK(verify_data(d, kp.public_key));
  CHECK_FALSE(verify_data(d, keypair_from_label("other").public_key));
  DataPacket t = d;
  t.payload[0] ^= 1;
  CHECK_FALSE(verify_data(t, kp.public_key));
  t = d;
  t.name = parse_identifier("ccn:/x/z/seg=0");
  CHECK_FALSE(verify_data(t, kp.public_key));
  t = d;
  t.final_segment = 5;
  CHECK_FALSE(verify_data(t, kp.public_key));
}

TEST_CASE("interest satisfaction is name prefix") {
  InterestPacket i;
  i.name = parse_identifier("ccn:/a/b");
  DataPacket d;
  d.name = parse_identifier("ccn:/a/b/seg=3");
  CHECK(satisfies(d, i));
  d.name = parse_identifier("ccn:/a/b");
  CHECK(satisfies(d, i));
  d.name = parse_identifier("ccn:/a");
  CHECK_FALSE(satisfies(d, i));
  d.name = parse_identifier("ccn:/a/bc");
  CHECK_FALSE(satisfies(d, i));
}

TEST_CASE("segment names") {
  Identifier base = parse_identifier("ccn:/v/video");
  for (std::uint64_t n : {0ull, 1ull, 1279ull, 1ull << 40}) {
    Identifier s = segment_name(base, n);
    CHECK(segment_index(s) == n);
    CHECK(strip_segment(s) == base);
    CHECK(is_prefix_of(base, s));
  }
  CHECK_FALSE(segment_index(base).has_value());
  CHECK(strip_segment(base) == base);
}

TEST_CASE("application messages round trip") {
  Rng rng(5);
  for (int i = 0; i < 200; ++i) {
    AppMessage m;
    m.type = static_cast<AppMessage::Type>(1 + rng.below(3));
    m.name = "ccn:/r/" + std::to_string(rng.below(1000));
    m.segment = rng.next();
    m.final_segment = rng.next();
    m.body = random_bytes(rng, 200);
    CHECK(decode_app_message(encode(m)) == m);
  }
  CHECK_THROWS_AS(decode_app_message(Bytes{0xff, 0x00}), Error);
}
