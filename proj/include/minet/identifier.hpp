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
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace minet {

/// The identifier modalities a multi-identifier router understands.
enum class IdKind : std::uint8_t { Content, Identity, Geo, Ip, LegacyDomain };

std::string_view to_string(IdKind kind) noexcept;

/// Canonical text syntax:
///
///   ccn:/a/b/c          content name
///   id:/alice           identity
///   geo:/cn/gd/sz       geospatial path (administrative hierarchy)
///   ip:10.0.0.7         IPv4/IPv6 host address
///   ip:10.0.0.0/8       IPv4/IPv6 prefix (host bits are cleared)
///   dns:www.example.com legacy domain, stored root-first (com, example, www)
///
/// A bare "/a/b" is accepted as a content name. Labels are non-empty UTF-8
/// and may not contain '/', whitespace or control characters; dns labels
/// additionally may not contain '.'.
class Identifier {
 public:
  Identifier() = default;

  static Identifier hierarchical(IdKind kind, std::vector<std::string> components);
  static Identifier content(std::vector<std::string> components) {
    return hierarchical(IdKind::Content, std::move(components));
  }
  /// `address` must be 4 or 16 bytes; `prefix_length` defaults to the full
  /// address width.
  static Identifier ip(std::span<const std::uint8_t> address, int prefix_length = -1);

  IdKind kind() const noexcept { return kind_; }
  bool is_hierarchical() const noexcept { return kind_ != IdKind::Ip; }
  const std::vector<std::string>& components() const noexcept { return components_; }
  std::size_t size() const noexcept { return components_.size(); }

  // Ip only.
  bool is_v6() const noexcept { return addr_len_ == 16; }
  std::span<const std::uint8_t> address() const noexcept { return {addr_.data(), addr_len_}; }
  int prefix_length() const noexcept { return prefix_len_; }
  int address_bits() const noexcept { return addr_len_ * 8; }
  bool bit(int i) const noexcept { return (addr_[i / 8] >> (7 - i % 8)) & 1; }

  /// Canonical string form; parse_identifier(to_string()) == *this.
  std::string to_string() const;

  /// First `n` components (hierarchical) or first `n` bits (Ip).
  Identifier prefix(std::size_t n) const;
  Identifier append(std::string label) const;
  Identifier append(const std::vector<std::string>& labels) const;

  friend bool operator==(const Identifier&, const Identifier&) = default;
  friend std::strong_ordering operator<=>(const Identifier& a, const Identifier& b);

 private:
  IdKind kind_ = IdKind::Content;
  std::vector<std::string> components_;
  std::array<std::uint8_t, 16> addr_{};
  std::uint8_t addr_len_ = 0;
  std::uint8_t prefix_len_ = 0;
};

Identifier parse_identifier(std::string_view text);

/// True iff `label` may appear as a component of an identifier of `kind`.
bool is_valid_label(IdKind kind, std::string_view label) noexcept;

/// True iff `a` is a leading sublist of `b` (or, for Ip, `a`'s prefix covers
/// `b`). Throws KindMismatch if the kinds differ.
bool is_prefix_of(const Identifier& a, const Identifier& b);

/// Same as is_prefix_of but returns false instead of throwing on kind mismatch.
bool covers(const Identifier& a, const Identifier& b) noexcept;

struct IdentifierHash {
  std::size_t operator()(const Identifier& id) const noexcept;
};

}  // namespace minet
