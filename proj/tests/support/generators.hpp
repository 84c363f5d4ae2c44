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

// Random value generators for property tests.

#include <array>
#include <string>
#include <vector>

#include "minet/identifier.hpp"
#include "minet/rng.hpp"

namespace minet::testing {

inline std::string random_label(Rng& rng, IdKind kind) {
  // Mix of ASCII, punctuation and multi-byte UTF-8.
  static const std::vector<std::string> kPieces = {
      "a", "b", "z", "0", "9", "-", "_", "~", "%", ":", "=", "é", "ß", "中", "文", "𝄞", "Ω", ".", "+", "@"};
  std::string s;
  int len = static_cast<int>(rng.between(1, 8));
  for (int i = 0; i < len; ++i) {
    std::string p = kPieces[rng.below(kPieces.size())];
    if (kind == IdKind::LegacyDomain && p == ".") p = "d";
    s += p;
  }
  return s;
}

inline Identifier random_identifier(Rng& rng) {
  static constexpr IdKind kKinds[] = {IdKind::Content, IdKind::Identity, IdKind::Geo, IdKind::Ip,
                                      IdKind::LegacyDomain};
  IdKind kind = kKinds[rng.below(5)];
  if (kind == IdKind::Ip) {
    bool v6 = rng.chance(0.5);
    std::array<std::uint8_t, 16> a{};
    for (auto& b : a) b = static_cast<std::uint8_t>(rng.below(256));
    int bits = v6 ? 128 : 32;
    int len = rng.chance(0.5) ? bits : static_cast<int>(rng.between(0, bits));
    return Identifier::ip(std::span<const std::uint8_t>(a.data(), v6 ? 16 : 4), len);
  }
  std::vector<std::string> comps;
  int n = static_cast<int>(rng.between(1, 6));
  for (int i = 0; i < n; ++i) comps.push_back(random_label(rng, kind));
  return Identifier::hierarchical(kind, comps);
}

/// Hierarchical content name over a tiny alphabet so prefixes collide often.
inline Identifier random_small_name(Rng& rng, int max_depth = 5, int alphabet = 3) {
  std::vector<std::string> comps;
  int n = static_cast<int>(rng.between(1, max_depth));
  for (int i = 0; i < n; ++i) comps.push_back(std::string(1, static_cast<char>('a' + rng.below(alphabet))));
  return Identifier::content(comps);
}

}  // namespace minet::testing
