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

#include "minet/hpt_fib.hpp"

#include <absl/container/flat_hash_map.h>
#include <absl/container/flat_hash_set.h>
#include <absl/hash/hash.h>
#include <sodium.h>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <istream>
#include <sstream>

#include "minet/error.hpp"

namespace minet {
namespace {

constexpr std::uint32_t kNone = 0xFFFFFFFFu;
constexpr std::uint16_t kIpSymbol = 0xFFFF;

enum Root : std::uint32_t { kContent, kIdentity, kGeo, kDomain, kIp4, kIp6, kRootCount };

std::uint32_t root_of(const Identifier& id) {
  switch (id.kind()) {
    case IdKind::Content: return kContent;
    case IdKind::Identity: return kIdentity;
    case IdKind::Geo: return kGeo;
    case IdKind::LegacyDomain: return kDomain;
    case IdKind::Ip: return id.is_v6() ? kIp6 : kIp4;
  }
  return kContent;
}

IdKind kind_of_root(std::uint32_t root) {
  switch (root) {
    case kContent: return IdKind::Content;
    case kIdentity: return IdKind::Identity;
    case kGeo: return IdKind::Geo;
    case kDomain: return IdKind::LegacyDomain;
    default: return IdKind::Ip;
  }
}

// Ip tree symbol: high byte = number of significant bits (1..8), low byte =
// the bits themselves (host bits cleared).
std::uint32_t ip_symbol(std::uint8_t byte, int bits) {
  auto mask = static_cast<std::uint8_t>(0xFF << (8 - bits));
  return static_cast<std::uint32_t>(bits) << 8 | (byte & mask);
}

struct Node {
  std::uint32_t parent = kNone;
  std::uint32_t label_off = 0;  // arena offset, or ip symbol
  std::uint16_t label_len = 0;  // kIpSymbol for ip nodes
  std::uint32_t entry = kNone;
  std::uint32_t children = 0;
};

struct Slot {
  std::uint32_t node = kNone;
  std::uint32_t value = 0;  // face id or translate target index
  bool translate = false;
  Origin origin = Origin::Static;
};

struct Key128 {
  std::uint64_t hi = 0;
  std::uint64_t lo = 0;

  friend bool operator==(const Key128&, const Key128&) = default;
  template <typename H>
  friend H AbslHashValue(H h, const Key128& k) {
    return H::combine(std::move(h), k.hi, k.lo);
  }
};

struct ChildProbe {
  std::uint32_t parent;
  std::uint32_t symbol;  // used for ip nodes
  std::string_view label;
  bool ip;
};

}  // namespace

struct HptFib::Impl {
  struct ChildHash {
    using is_transparent = void;
    const Impl* impl;
    std::size_t operator()(std::uint32_t id) const { return (*this)(impl->probe_of(id)); }
    std::size_t operator()(const ChildProbe& p) const {
      return p.ip ? absl::Hash<std::tuple<std::uint32_t, std::uint32_t, bool>>{}({p.parent, p.symbol, true})
                  : absl::Hash<std::tuple<std::uint32_t, std::string_view>>{}({p.parent, p.label});
    }
  };
  struct ChildEq {
    using is_transparent = void;
    const Impl* impl;
    bool operator()(std::uint32_t a, std::uint32_t b) const { return a == b; }
    bool operator()(std::uint32_t a, const ChildProbe& p) const { return same(impl->probe_of(a), p); }
    bool operator()(const ChildProbe& p, std::uint32_t a) const { return same(impl->probe_of(a), p); }
    static bool same(const ChildProbe& x, const ChildProbe& y) {
      return x.parent == y.parent && x.ip == y.ip &&
             (x.ip ? x.symbol == y.symbol : x.label == y.label);
    }
  };

  std::vector<Node> nodes;
  std::vector<std::uint32_t> free_nodes;
  std::string arena;
  std::vector<Slot> slots;
  std::vector<std::uint32_t> free_slots;
  std::vector<Identifier> targets;
  std::vector<std::uint32_t> free_targets;
  absl::flat_hash_set<std::uint32_t, ChildHash, ChildEq> children;
  absl::flat_hash_map<Key128, std::uint32_t> digests;
  std::size_t count = 0;
  std::function<bool(FaceId)> face_valid;

  Impl() : children(0, ChildHash{this}, ChildEq{this}) { reset(); }

  void reset() {
    nodes.assign(kRootCount, Node{});
    free_nodes.clear();
    arena.clear();
    slots.clear();
    free_slots.clear();
    targets.clear();
    free_targets.clear();
    children.clear();
    digests.clear();
    count = 0;
  }

  ChildProbe probe_of(std::uint32_t id) const {
    const Node& n = nodes[id];
    if (n.label_len == kIpSymbol) return {n.parent, n.label_off, {}, true};
    return {n.parent, 0, std::string_view(arena).substr(n.label_off, n.label_len), false};
  }

  std::uint32_t find_child(std::uint32_t parent, std::string_view label) const {
    auto it = children.find(ChildProbe{parent, 0, label, false});
    return it == children.end() ? kNone : *it;
  }
  std::uint32_t find_child(std::uint32_t parent, std::uint32_t symbol) const {
    auto it = children.find(ChildProbe{parent, symbol, {}, true});
    return it == children.end() ? kNone : *it;
  }

  std::uint32_t new_node(std::uint32_t parent) {
    std::uint32_t id;
    if (!free_nodes.empty()) {
      id = free_nodes.back();
      free_nodes.pop_back();
      nodes[id] = Node{};
    } else {
      id = static_cast<std::uint32_t>(nodes.size());
      nodes.emplace_back();
    }
    nodes[id].parent = parent;
    return id;
  }

  std::uint32_t child_or_create(std::uint32_t parent, std::string_view label) {
    if (std::uint32_t c = find_child(parent, label); c != kNone) return c;
    if (label.size() >= kIpSymbol) fail(ErrorCode::IllegalLabel, "label too long for fib");
    std::uint32_t id = new_node(parent);
    nodes[id].label_off = static_cast<std::uint32_t>(arena.size());
    nodes[id].label_len = static_cast<std::uint16_t>(label.size());
    arena.append(label);
    children.insert(id);
    ++nodes[parent].children;
    return id;
  }

  std::uint32_t child_or_create(std::uint32_t parent, std::uint32_t symbol) {
    if (std::uint32_t c = find_child(parent, symbol); c != kNone) return c;
    std::uint32_t id = new_node(parent);
    nodes[id].label_off = symbol;
    nodes[id].label_len = kIpSymbol;
    children.insert(id);
    ++nodes[parent].children;
    return id;
  }

  // Node whose path spells `key`, creating missing nodes when `create` is
  // set. Returns kNone if absent.
  std::uint32_t walk(const Identifier& key, bool create) {
    std::uint32_t cur = root_of(key);
    if (key.kind() != IdKind::Ip) {
      for (const auto& c : key.components()) {
        cur = create ? child_or_create(cur, c) : find_child(cur, c);
        if (cur == kNone) return kNone;
      }
      return cur;
    }
    auto addr = key.address();
    int len = key.prefix_length();
    for (int i = 0; i * 8 < len; ++i) {
      int bits = std::min(8, len - i * 8);
      std::uint32_t sym = ip_symbol(addr[i], bits);
      cur = create ? child_or_create(cur, sym) : find_child(cur, sym);
      if (cur == kNone) return kNone;
    }
    return cur;
  }

  std::uint32_t find_node(const Identifier& key) const {
    return const_cast<Impl*>(this)->walk(key, false);
  }

  Identifier key_of(std::uint32_t node) const {
    std::vector<std::uint32_t> path;
    std::uint32_t cur = node;
    while (nodes[cur].parent != kNone) {
      path.push_back(cur);
      cur = nodes[cur].parent;
    }
    std::reverse(path.begin(), path.end());
    std::uint32_t root = cur;
    if (root == kIp4 || root == kIp6) {
      std::array<std::uint8_t, 16> addr{};
      int len = 0;
      for (std::size_t i = 0; i < path.size(); ++i) {
        std::uint32_t sym = nodes[path[i]].label_off;
        addr[i] = static_cast<std::uint8_t>(sym & 0xFF);
        len += static_cast<int>(sym >> 8);
      }
      return Identifier::ip(std::span<const std::uint8_t>(addr.data(), root == kIp6 ? 16 : 4), len);
    }
    std::vector<std::string> comps;
    comps.reserve(path.size());
    for (auto id : path) comps.emplace_back(arena.substr(nodes[id].label_off, nodes[id].label_len));
    return Identifier::hierarchical(kind_of_root(root), std::move(comps));
  }

  static Key128 digest_of(const Identifier& key) {
    crypto_hash_sha256_state st;
    crypto_hash_sha256_init(&st);
    auto feed_u32 = [&st](std::uint32_t v) {
      std::uint8_t b[4] = {static_cast<std::uint8_t>(v >> 24), static_cast<std::uint8_t>(v >> 16),
                           static_cast<std::uint8_t>(v >> 8), static_cast<std::uint8_t>(v)};
      crypto_hash_sha256_update(&st, b, 4);
    };
    feed_u32(static_cast<std::uint32_t>(root_of(key)));
    if (key.kind() == IdKind::Ip) {
      feed_u32(static_cast<std::uint32_t>(key.prefix_length()));
      crypto_hash_sha256_update(&st, key.address().data(), key.address().size());
    } else {
      for (const auto& c : key.components()) {
        feed_u32(static_cast<std::uint32_t>(c.size()));
        crypto_hash_sha256_update(&st, reinterpret_cast<const unsigned char*>(c.data()), c.size());
      }
    }
    unsigned char out[crypto_hash_sha256_BYTES];
    crypto_hash_sha256_final(&st, out);
    Key128 k;
    for (int i = 0; i < 8; ++i) {
      k.hi = k.hi << 8 | out[i];
      k.lo = k.lo << 8 | out[8 + i];
    }
    return k;
  }

  HptFibEntry entry_at(std::uint32_t slot_id) const {
    const Slot& s = slots[slot_id];
    HptFibEntry e;
    e.key = key_of(s.node);
    e.origin = s.origin;
    if (s.translate) {
      e.action = Translate{targets[s.value]};
    } else {
      e.action = Forward{s.value};
    }
    return e;
  }

  void set_action(Slot& s, const HptFibEntry& e) {
    if (s.translate) {
      free_targets.push_back(s.value);
      targets[s.value] = Identifier{};
      s.translate = false;
    }
    s.origin = e.origin;
    if (const auto* fwd = std::get_if<Forward>(&e.action)) {
      s.value = fwd->face;
    } else {
      const auto& t = std::get<Translate>(e.action).target;
      if (!free_targets.empty()) {
        s.value = free_targets.back();
        free_targets.pop_back();
        targets[s.value] = t;
      } else {
        s.value = static_cast<std::uint32_t>(targets.size());
        targets.push_back(t);
      }
      s.translate = true;
    }
  }

  // Returns the slot for `key` after confirming via the tree, or kNone.
  std::uint32_t exact_slot(const Identifier& key, const Key128& digest) const {
    auto it = digests.find(digest);
    if (it == digests.end()) return kNone;
    std::uint32_t node = find_node(key);
    if (node == kNone || nodes[node].entry != it->second) {
      throw std::logic_error("hpt-fib: digest index disagrees with prefix tree for " + key.to_string());
    }
    return it->second;
  }

  void prune(std::uint32_t node) {
    while (node >= kRootCount && nodes[node].entry == kNone && nodes[node].children == 0) {
      std::uint32_t parent = nodes[node].parent;
      children.erase(node);
      --nodes[parent].children;
      nodes[node] = Node{};
      free_nodes.push_back(node);
      node = parent;
    }
  }
};

HptFib::HptFib() : impl_(std::make_unique<Impl>()) {}
HptFib::~HptFib() = default;
HptFib::HptFib(HptFib&&) noexcept = default;
HptFib& HptFib::operator=(HptFib&&) noexcept = default;

std::size_t HptFib::insert(const HptFibEntry& entry) {
  Impl& m = *impl_;
  if (const auto* fwd = std::get_if<Forward>(&entry.action); fwd && m.face_valid && !m.face_valid(fwd->face)) {
    fail(ErrorCode::InvalidArgument, "fib entry " + entry.key.to_string() + " names unknown face " +
                                         std::to_string(fwd->face));
  }
  if (entry.key.kind() != IdKind::Ip && entry.key.components().empty()) {
    fail(ErrorCode::EmptyName, "fib key has no components");
  }
  Key128 digest = Impl::digest_of(entry.key);
  if (std::uint32_t slot = m.exact_slot(entry.key, digest); slot != kNone) {
    m.set_action(m.slots[slot], entry);
    return m.count;
  }
  std::uint32_t node = m.walk(entry.key, true);
  std::uint32_t slot;
  if (!m.free_slots.empty()) {
    slot = m.free_slots.back();
    m.free_slots.pop_back();
    m.slots[slot] = Slot{};
  } else {
    slot = static_cast<std::uint32_t>(m.slots.size());
    m.slots.emplace_back();
  }
  m.slots[slot].node = node;
  m.set_action(m.slots[slot], entry);
  m.nodes[node].entry = slot;
  m.digests.emplace(digest, slot);
  return ++m.count;
}

bool HptFib::remove(const Identifier& key) {
  Impl& m = *impl_;
  Key128 digest = Impl::digest_of(key);
  std::uint32_t slot = m.exact_slot(key, digest);
  if (slot == kNone) return false;
  Slot& s = m.slots[slot];
  if (s.translate) {
    m.targets[s.value] = Identifier{};
    m.free_targets.push_back(s.value);
  }
  std::uint32_t node = s.node;
  s = Slot{};
  m.free_slots.push_back(slot);
  m.nodes[node].entry = kNone;
  m.digests.erase(digest);
  --m.count;
  m.prune(node);
  return true;
}

void HptFib::clear() { impl_->reset(); }

std::optional<HptFibEntry> HptFib::lookup_exact(const Identifier& key) const {
  std::uint32_t slot = impl_->exact_slot(key, Impl::digest_of(key));
  if (slot == kNone) return std::nullopt;
  return impl_->entry_at(slot);
}

std::optional<HptFibEntry> HptFib::longest_prefix_match(const Identifier& name) const {
  const Impl& m = *impl_;
  std::uint32_t cur = root_of(name);
  std::uint32_t best = m.nodes[cur].entry;
  if (name.kind() != IdKind::Ip) {
    for (const auto& c : name.components()) {
      cur = m.find_child(cur, c);
      if (cur == kNone) break;
      if (m.nodes[cur].entry != kNone) best = m.nodes[cur].entry;
    }
  } else {
    auto addr = name.address();
    int len = name.prefix_length();
    for (int i = 0; i * 8 < len; ++i) {
      // Partial-byte children of this node are longer than its own entry.
      int avail = std::min(8, len - i * 8);
      for (int bits = std::min(7, avail); bits >= 1; --bits) {
        std::uint32_t p = m.find_child(cur, ip_symbol(addr[i], bits));
        if (p != kNone && m.nodes[p].entry != kNone) {
          best = m.nodes[p].entry;
          break;
        }
      }
      if (avail < 8) break;
      cur = m.find_child(cur, ip_symbol(addr[i], 8));
      if (cur == kNone) break;
      if (m.nodes[cur].entry != kNone) best = m.nodes[cur].entry;
    }
  }
  if (best == kNone) return std::nullopt;
  return m.entry_at(best);
}

std::optional<Identifier> HptFib::translate(const Identifier& name) const {
  auto match = longest_prefix_match(name);
  if (!match) return std::nullopt;
  const auto* xlt = std::get_if<Translate>(&match->action);
  if (!xlt) return std::nullopt;
  Identifier out = xlt->target;
  if (out.is_hierarchical() && name.is_hierarchical()) {
    const auto& comps = name.components();
    for (std::size_t i = match->key.size(); i < comps.size(); ++i) out = out.append(comps[i]);
  }
  return out;
}

std::size_t HptFib::size() const noexcept { return impl_->count; }

std::size_t HptFib::node_count() const noexcept {
  return impl_->nodes.size() - impl_->free_nodes.size();
}

void HptFib::reserve(std::size_t entries) {
  Impl& m = *impl_;
  m.digests.reserve(entries);
  m.children.reserve(entries + entries / 2);
  m.nodes.reserve(entries + entries / 2 + kRootCount);
  m.slots.reserve(entries);
  m.arena.reserve(entries * 8);
}

std::vector<HptFibEntry> HptFib::entries() const {
  const Impl& m = *impl_;
  std::vector<HptFibEntry> out;
  out.reserve(m.count);
  for (std::uint32_t i = 0; i < m.slots.size(); ++i) {
    if (m.slots[i].node != kNone) out.push_back(m.entry_at(i));
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.key < b.key; });
  return out;
}

bool HptFib::check_coherence() const {
  const Impl& m = *impl_;
  if (m.digests.size() != m.count) return false;
  std::size_t live_slots = 0;
  for (std::uint32_t i = 0; i < m.slots.size(); ++i) {
    if (m.slots[i].node == kNone) continue;
    ++live_slots;
    if (m.nodes[m.slots[i].node].entry != i) return false;
  }
  if (live_slots != m.count) return false;
  // hash -> tree
  for (const auto& [digest, slot] : m.digests) {
    if (slot >= m.slots.size() || m.slots[slot].node == kNone) return false;
    Identifier key = m.key_of(m.slots[slot].node);
    if (!(Impl::digest_of(key) == digest)) return false;
    if (m.find_node(key) != m.slots[slot].node) return false;
  }
  // tree -> hash, and child counts
  std::vector<std::uint32_t> child_count(m.nodes.size(), 0);
  std::size_t tree_entries = 0;
  std::vector<bool> free(m.nodes.size(), false);
  for (auto f : m.free_nodes) free[f] = true;
  for (std::uint32_t id = kRootCount; id < m.nodes.size(); ++id) {
    if (free[id]) continue;
    ++child_count[m.nodes[id].parent];
    if (!m.children.contains(id)) return false;
  }
  for (std::uint32_t id = 0; id < m.nodes.size(); ++id) {
    if (free[id]) continue;
    if (child_count[id] != m.nodes[id].children) return false;
    if (m.nodes[id].entry == kNone) continue;
    ++tree_entries;
    auto it = m.digests.find(Impl::digest_of(m.key_of(id)));
    if (it == m.digests.end() || it->second != m.nodes[id].entry) return false;
  }
  return tree_entries == m.count;
}

void HptFib::set_face_validator(std::function<bool(FaceId)> valid) {
  impl_->face_valid = std::move(valid);
}

std::string format_entry(const HptFibEntry& entry) {
  std::string out = entry.key.to_string();
  if (const auto* fwd = std::get_if<Forward>(&entry.action)) {
    out += " FWD " + std::to_string(fwd->face);
  } else {
    out += " XLT " + std::get<Translate>(entry.action).target.to_string();
  }
  return out;
}

HptFibEntry parse_entry(std::string_view line) {
  std::istringstream in{std::string(line)};
  std::string key, verb, arg, extra;
  if (!(in >> key >> verb >> arg) || (in >> extra)) {
    fail(ErrorCode::ConfigError, "expected '<key> FWD <face>' or '<key> XLT <target>'");
  }
  HptFibEntry e;
  e.key = parse_identifier(key);
  if (verb == "FWD") {
    std::uint32_t face = 0;
    auto [ptr, ec] = std::from_chars(arg.data(), arg.data() + arg.size(), face);
    if (ec != std::errc() || ptr != arg.data() + arg.size()) {
      fail(ErrorCode::ConfigError, "bad face id '" + arg + "'");
    }
    e.action = Forward{face};
  } else if (verb == "XLT") {
    e.action = Translate{parse_identifier(arg)};
  } else {
    fail(ErrorCode::ConfigError, "unknown action '" + verb + "'");
  }
  return e;
}

std::string dump_fib(const HptFib& fib) {
  std::string out;
  for (const auto& e : fib.entries()) {
    out += format_entry(e);
    out += '\n';
  }
  return out;
}

std::size_t load_fib(HptFib& fib, std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  std::size_t loaded = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    try {
      fib.insert(parse_entry(line));
      ++loaded;
    } catch (const Error& e) {
      fail(ErrorCode::ConfigError, "line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return loaded;
}

EntryGenerator::EntryGenerator(std::uint64_t seed, GeneratorOptions options)
    : options_(options), rng_(seed) {
  zipf_cdf_.resize(options_.top_labels);
  double total = 0;
  for (std::size_t k = 0; k < options_.top_labels; ++k) {
    total += 1.0 / std::pow(static_cast<double>(k + 1), options_.zipf_exponent);
    zipf_cdf_[k] = total;
  }
  for (auto& c : zipf_cdf_) c /= total;
}

std::size_t EntryGenerator::zipf_index() {
  double u = rng_.uniform();
  auto it = std::upper_bound(zipf_cdf_.begin(), zipf_cdf_.end(), u);
  return std::min<std::size_t>(static_cast<std::size_t>(it - zipf_cdf_.begin()), zipf_cdf_.size() - 1);
}

namespace {

std::string base36(std::uint64_t v) {
  static constexpr char kDigits[] = "0123456789abcdefghijklmnopqrstuvwxyz";
  std::string s;
  do {
    s.push_back(kDigits[v % 36]);
    v /= 36;
  } while (v);
  std::reverse(s.begin(), s.end());
  return s;
}

// Bijection on 32-bit integers, so distinct counters give distinct addresses.
std::uint32_t permute32(std::uint32_t x) {
  x ^= x >> 16;
  x *= 0x7feb352dU;
  x ^= x >> 15;
  x *= 0x846ca68bU;
  x ^= x >> 16;
  return x;
}

}  // namespace

Identifier EntryGenerator::random_identifier(IdKind kind, bool unique) {
  std::uint64_t serial = unique ? counter_++ : rng_.next();
  if (kind == IdKind::Ip) {
    if (serial % 4 == 3) {
      std::array<std::uint8_t, 16> a{0x20, 0x01, 0x0d, 0xb8};
      for (int i = 0; i < 8; ++i) a[8 + i] = static_cast<std::uint8_t>(serial >> (56 - 8 * i));
      return Identifier::ip(a);
    }
    std::uint32_t v = permute32(static_cast<std::uint32_t>(serial));
    std::array<std::uint8_t, 4> a{static_cast<std::uint8_t>(v >> 24), static_cast<std::uint8_t>(v >> 16),
                                  static_cast<std::uint8_t>(v >> 8), static_cast<std::uint8_t>(v)};
    return Identifier::ip(a);
  }
  static constexpr const char* kTop[] = {"org", "user", "region", "tld"};
  int top_kind = kind == IdKind::Content ? 0 : kind == IdKind::Identity ? 1 : kind == IdKind::Geo ? 2 : 3;
  int depth = static_cast<int>(rng_.between(options_.min_depth, options_.max_depth));
  std::vector<std::string> comps;
  comps.reserve(depth);
  comps.push_back(kTop[top_kind] + std::to_string(zipf_index()));
  for (int i = 1; i + 1 < depth; ++i) {
    comps.push_back("m" + std::to_string(rng_.below(options_.mid_vocabulary)));
  }
  comps.push_back("e" + base36(serial));
  return Identifier::hierarchical(kind, std::move(comps));
}

HptFibEntry EntryGenerator::next() {
  double u = rng_.uniform();
  IdKind kind = u < 0.50   ? IdKind::Content
                : u < 0.70 ? IdKind::Identity
                : u < 0.85 ? IdKind::Geo
                : u < 0.95 ? IdKind::Ip
                           : IdKind::LegacyDomain;
  HptFibEntry e;
  e.key = random_identifier(kind, true);
  if (rng_.chance(options_.translate_fraction)) {
    static constexpr IdKind kTargets[] = {IdKind::Ip, IdKind::Content, IdKind::Content, IdKind::Identity,
                                          IdKind::Ip};
    e.action = Translate{random_identifier(kTargets[static_cast<int>(kind)], false)};
  } else {
    e.action = Forward{static_cast<FaceId>(1 + rng_.below(options_.max_face))};
  }
  return e;
}

std::vector<HptFibEntry> generate_entries(std::size_t n, std::uint64_t seed, GeneratorOptions options) {
  EntryGenerator gen(seed, options);
  std::vector<HptFibEntry> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(gen.next());
  return out;
}

FibBenchRow bench_fib_insert(std::size_t n, std::uint64_t seed) {
  HptFib fib;
  fib.reserve(n);
  EntryGenerator gen(seed);
  auto start = std::chrono::steady_clock::now();
  for (std::size_t i = 0; i < n; ++i) fib.insert(gen.next());
  auto stop = std::chrono::steady_clock::now();
  if (fib.size() != n) {
    throw std::logic_error("bench: generated keys collided");
  }
  FibBenchRow row;
  row.n = n;
  row.seconds = std::chrono::duration<double>(stop - start).count();
  row.ns_per_entry = n ? row.seconds * 1e9 / static_cast<double>(n) : 0.0;
  return row;
}

}  // namespace minet
