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

#include "minet/identifier.hpp"

#include <arpa/inet.h>

#include <algorithm>
#include <charconv>

#include "minet/error.hpp"

namespace minet {
namespace {

struct Scheme {
  std::string_view prefix;
  IdKind kind;
};

constexpr std::array<Scheme, 5> kSchemes{{
    {"ccn:", IdKind::Content},
    {"id:", IdKind::Identity},
    {"geo:", IdKind::Geo},
    {"ip:", IdKind::Ip},
    {"dns:", IdKind::LegacyDomain},
}};

std::string_view scheme_of(IdKind kind) {
  for (const auto& s : kSchemes) {
    if (s.kind == kind) return s.prefix;
  }
  return "ccn:";
}

// Decodes one UTF-8 code point starting at s[i]; returns its length or 0 if
// the sequence is malformed (overlong, surrogate, out of range, truncated).
std::size_t decode_utf8(std::string_view s, std::size_t i, char32_t& cp) {
  auto byte = [&](std::size_t k) { return static_cast<unsigned char>(s[k]); };
  unsigned char b0 = byte(i);
  std::size_t len;
  char32_t min;
  if (b0 < 0x80) {
    cp = b0;
    return 1;
  } else if ((b0 & 0xE0) == 0xC0) {
    len = 2, cp = b0 & 0x1F, min = 0x80;
  } else if ((b0 & 0xF0) == 0xE0) {
    len = 3, cp = b0 & 0x0F, min = 0x800;
  } else if ((b0 & 0xF8) == 0xF0) {
    len = 4, cp = b0 & 0x07, min = 0x10000;
  } else {
    return 0;
  }
  if (i + len > s.size()) return 0;
  for (std::size_t k = 1; k < len; ++k) {
    unsigned char b = byte(i + k);
    if ((b & 0xC0) != 0x80) return 0;
    cp = (cp << 6) | (b & 0x3F);
  }
  if (cp < min || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) return 0;
  return len;
}

void mask_host_bits(std::array<std::uint8_t, 16>& addr, int len, int prefix) {
  for (int bit = prefix; bit < len * 8; ++bit) {
    addr[bit / 8] &= static_cast<std::uint8_t>(~(0x80 >> (bit % 8)));
  }
}

Identifier parse_ip(std::string_view body) {
  if (body.empty()) fail(ErrorCode::EmptyName, "empty ip identifier");
  std::string_view addr_text = body;
  int prefix = -1;
  if (auto slash = body.find('/'); slash != std::string_view::npos) {
    addr_text = body.substr(0, slash);
    std::string_view len_text = body.substr(slash + 1);
    if (len_text.empty() || len_text.size() > 3 ||
        (len_text.size() > 1 && len_text[0] == '0')) {
      fail(ErrorCode::BadIpSyntax, "bad prefix length in 'ip:" + std::string(body) + "'");
    }
    auto [ptr, ec] = std::from_chars(len_text.data(), len_text.data() + len_text.size(), prefix);
    if (ec != std::errc() || ptr != len_text.data() + len_text.size()) {
      fail(ErrorCode::BadIpSyntax, "bad prefix length in 'ip:" + std::string(body) + "'");
    }
  }
  std::string text(addr_text);
  std::array<std::uint8_t, 16> raw{};
  bool v6 = text.find(':') != std::string::npos;
  if (inet_pton(v6 ? AF_INET6 : AF_INET, text.c_str(), raw.data()) != 1) {
    fail(ErrorCode::BadIpSyntax, "invalid ip address '" + text + "'");
  }
  int bits = v6 ? 128 : 32;
  if (prefix > bits) {
    fail(ErrorCode::BadIpSyntax, "prefix length exceeds address width");
  }
  return Identifier::ip(std::span<const std::uint8_t>(raw.data(), v6 ? 16 : 4), prefix);
}

std::vector<std::string> split_path(std::string_view body, IdKind kind) {
  if (body.empty() || body == "/") {
    fail(ErrorCode::EmptyName, "identifier has no components");
  }
  if (body.front() != '/') {
    fail(ErrorCode::IllegalLabel, "hierarchical name must start with '/'");
  }
  std::vector<std::string> parts;
  std::size_t pos = 1;
  while (pos <= body.size()) {
    std::size_t next = body.find('/', pos);
    if (next == std::string_view::npos) next = body.size();
    std::string_view label = body.substr(pos, next - pos);
    if (!is_valid_label(kind, label)) {
      fail(ErrorCode::IllegalLabel, "illegal label '" + std::string(label) + "'");
    }
    parts.emplace_back(label);
    pos = next + 1;
  }
  return parts;
}

std::vector<std::string> split_domain(std::string_view body) {
  if (body.empty()) fail(ErrorCode::EmptyName, "empty domain name");
  std::vector<std::string> parts;
  std::size_t pos = 0;
  while (pos <= body.size()) {
    std::size_t next = body.find('.', pos);
    if (next == std::string_view::npos) next = body.size();
    std::string_view label = body.substr(pos, next - pos);
    if (!is_valid_label(IdKind::LegacyDomain, label)) {
      fail(ErrorCode::IllegalLabel, "illegal domain label '" + std::string(label) + "'");
    }
    parts.emplace_back(label);
    pos = next + 1;
  }
  std::reverse(parts.begin(), parts.end());
  return parts;
}

}  // namespace

std::string_view to_string(IdKind kind) noexcept {
  switch (kind) {
    case IdKind::Content: return "content";
    case IdKind::Identity: return "identity";
    case IdKind::Geo: return "geo";
    case IdKind::Ip: return "ip";
    case IdKind::LegacyDomain: return "dns";
  }
  return "unknown";
}

bool is_valid_label(IdKind kind, std::string_view label) noexcept {
  if (label.empty()) return false;
  for (std::size_t i = 0; i < label.size();) {
    char32_t cp;
    std::size_t n = decode_utf8(label, i, cp);
    if (n == 0) return false;
    if (cp <= 0x20 || cp == 0x7F || (cp >= 0x80 && cp <= 0x9F) || cp == '/') {
      return false;
    }
    if (kind == IdKind::LegacyDomain && cp == '.') return false;
    i += n;
  }
  return true;
}

Identifier Identifier::hierarchical(IdKind kind, std::vector<std::string> components) {
  if (kind == IdKind::Ip) {
    fail(ErrorCode::WrongKind, "ip identifiers are not hierarchical");
  }
  if (components.empty()) {
    fail(ErrorCode::EmptyName, "identifier has no components");
  }
  for (const auto& c : components) {
    if (!is_valid_label(kind, c)) {
      fail(ErrorCode::IllegalLabel, "illegal label '" + c + "'");
    }
  }
  Identifier id;
  id.kind_ = kind;
  id.components_ = std::move(components);
  return id;
}

Identifier Identifier::ip(std::span<const std::uint8_t> address, int prefix_length) {
  if (address.size() != 4 && address.size() != 16) {
    fail(ErrorCode::BadIpSyntax, "ip address must be 4 or 16 bytes");
  }
  int bits = static_cast<int>(address.size()) * 8;
  if (prefix_length < 0) prefix_length = bits;
  if (prefix_length > bits) {
    fail(ErrorCode::BadIpSyntax, "prefix length exceeds address width");
  }
  Identifier id;
  id.kind_ = IdKind::Ip;
  std::copy(address.begin(), address.end(), id.addr_.begin());
  id.addr_len_ = static_cast<std::uint8_t>(address.size());
  id.prefix_len_ = static_cast<std::uint8_t>(prefix_length);
  mask_host_bits(id.addr_, id.addr_len_, prefix_length);
  return id;
}

std::string Identifier::to_string() const {
  std::string out(scheme_of(kind_));
  switch (kind_) {
    case IdKind::Ip: {
      char buf[INET6_ADDRSTRLEN];
      inet_ntop(is_v6() ? AF_INET6 : AF_INET, addr_.data(), buf, sizeof buf);
      out += buf;
      if (prefix_len_ != address_bits()) {
        out += '/';
        out += std::to_string(prefix_len_);
      }
      break;
    }
    case IdKind::LegacyDomain:
      for (auto it = components_.rbegin(); it != components_.rend(); ++it) {
        if (it != components_.rbegin()) out += '.';
        out += *it;
      }
      break;
    default:
      for (const auto& c : components_) {
        out += '/';
        out += c;
      }
  }
  return out;
}

Identifier Identifier::prefix(std::size_t n) const {
  if (kind_ == IdKind::Ip) {
    return ip(address(), static_cast<int>(std::min<std::size_t>(n, prefix_len_)));
  }
  Identifier id = *this;
  id.components_.resize(std::min(n, components_.size()));
  if (id.components_.empty()) {
    fail(ErrorCode::EmptyName, "prefix would have no components");
  }
  return id;
}

Identifier Identifier::append(std::string label) const {
  if (kind_ == IdKind::Ip) {
    fail(ErrorCode::WrongKind, "cannot append labels to an ip identifier");
  }
  if (!is_valid_label(kind_, label)) {
    fail(ErrorCode::IllegalLabel, "illegal label '" + label + "'");
  }
  Identifier id = *this;
  id.components_.push_back(std::move(label));
  return id;
}

Identifier Identifier::append(const std::vector<std::string>& labels) const {
  Identifier id = *this;
  for (const auto& l : labels) id = id.append(l);
  return id;
}

std::strong_ordering operator<=>(const Identifier& a, const Identifier& b) {
  if (auto c = a.kind_ <=> b.kind_; c != 0) return c;
  if (a.kind_ != IdKind::Ip) {
    return std::lexicographical_compare_three_way(
        a.components_.begin(), a.components_.end(), b.components_.begin(),
        b.components_.end(), [](const std::string& x, const std::string& y) {
          int r = x.compare(y);
          return r < 0 ? std::strong_ordering::less
                       : r > 0 ? std::strong_ordering::greater
                               : std::strong_ordering::equal;
        });
  }
  if (auto c = a.addr_len_ <=> b.addr_len_; c != 0) return c;
  if (auto c = a.addr_ <=> b.addr_; c != 0) return c;
  return a.prefix_len_ <=> b.prefix_len_;
}

Identifier parse_identifier(std::string_view text) {
  if (text.empty()) fail(ErrorCode::EmptyName, "empty identifier");
  if (text.front() == '/') {
    return Identifier::content(split_path(text, IdKind::Content));
  }
  for (const auto& s : kSchemes) {
    if (text.substr(0, s.prefix.size()) == s.prefix) {
      std::string_view body = text.substr(s.prefix.size());
      switch (s.kind) {
        case IdKind::Ip: return parse_ip(body);
        case IdKind::LegacyDomain:
          return Identifier::hierarchical(s.kind, split_domain(body));
        default: return Identifier::hierarchical(s.kind, split_path(body, s.kind));
      }
    }
  }
  fail(ErrorCode::BadScheme, "unknown identifier scheme in '" + std::string(text) + "'");
}

bool covers(const Identifier& a, const Identifier& b) noexcept {
  if (a.kind() != b.kind()) return false;
  if (a.kind() == IdKind::Ip) {
    if (a.is_v6() != b.is_v6() || a.prefix_length() > b.prefix_length()) return false;
    for (int i = 0; i < a.prefix_length(); ++i) {
      if (a.bit(i) != b.bit(i)) return false;
    }
    return true;
  }
  const auto& ac = a.components();
  const auto& bc = b.components();
  return ac.size() <= bc.size() && std::equal(ac.begin(), ac.end(), bc.begin());
}

bool is_prefix_of(const Identifier& a, const Identifier& b) {
  if (a.kind() != b.kind()) {
    fail(ErrorCode::KindMismatch, "cannot compare " + std::string(to_string(a.kind())) +
                                      " with " + std::string(to_string(b.kind())));
  }
  return covers(a, b);
}

std::size_t IdentifierHash::operator()(const Identifier& id) const noexcept {
  std::size_t h = std::hash<int>{}(static_cast<int>(id.kind()));
  auto mix = [&h](std::size_t v) { h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2); };
  if (id.kind() == IdKind::Ip) {
    for (auto b : id.address()) mix(b);
    mix(static_cast<std::size_t>(id.prefix_length()));
  } else {
    for (const auto& c : id.components()) mix(std::hash<std::string>{}(c));
  }
  return h;
}

}  // namespace minet
