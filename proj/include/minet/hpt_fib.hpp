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

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "minet/identifier.hpp"
#include "minet/rng.hpp"

namespace minet {

using FaceId = std::uint32_t;

struct Forward {
  FaceId face = 0;
  friend bool operator==(const Forward&, const Forward&) = default;
};

/// Inter-translation: the matched prefix maps to `target`, which may be of a
/// different identifier kind.
struct Translate {
  Identifier target;
  friend bool operator==(const Translate&, const Translate&) = default;
};

using FibAction = std::variant<Forward, Translate>;

enum class Origin : std::uint8_t { Static, Learned };

struct HptFibEntry {
  Identifier key;
  FibAction action;
  Origin origin = Origin::Static;

  friend bool operator==(const HptFibEntry&, const HptFibEntry&) = default;
};

/// Hash Prefix Table FIB.
///
/// Two indices over the same entries: a hash map from the 128-bit digest of
/// the full key to the entry, used for exact lookups, and one prefix tree per
/// identifier kind whose node paths spell the key components (bytes and
/// partial bytes for Ip keys), used for longest-prefix match. Tree child
/// lookups are themselves hashed on (parent, label).
///
/// Any number of threads may call const members concurrently; mutation
/// requires exclusive access. The table is movable but not copyable.
class HptFib {
 public:
  HptFib();
  ~HptFib();
  HptFib(HptFib&&) noexcept;
  HptFib& operator=(HptFib&&) noexcept;
  HptFib(const HptFib&) = delete;
  HptFib& operator=(const HptFib&) = delete;

  /// Inserts or replaces the entry for `entry.key`; returns the entry count.
  std::size_t insert(const HptFibEntry& entry);
  bool remove(const Identifier& key);
  void clear();

  std::optional<HptFibEntry> lookup_exact(const Identifier& key) const;
  std::optional<HptFibEntry> longest_prefix_match(const Identifier& name) const;

  /// If the longest match is a Translate, returns its target with the
  /// unmatched suffix appended (hierarchical targets only). Forward matches
  /// and misses yield nullopt.
  std::optional<Identifier> translate(const Identifier& name) const;

  std::size_t size() const noexcept;
  std::size_t node_count() const noexcept;
  void reserve(std::size_t entries);

  /// Entries sorted by key.
  std::vector<HptFibEntry> entries() const;

  /// Verifies that the hash index and the prefix trees hold exactly the same
  /// entries and that both agree with size().
  bool check_coherence() const;

  /// When set, Forward entries naming a face rejected by `valid` are refused.
  void set_face_validator(std::function<bool(FaceId)> valid);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Line format: "<canonical-key> FWD <face>" or "<canonical-key> XLT <target>".
std::string format_entry(const HptFibEntry& entry);
HptFibEntry parse_entry(std::string_view line);
std::string dump_fib(const HptFib& fib);
/// Loads entries from `in`, skipping blank lines and '#' comments. Throws
/// ConfigError naming the offending line.
std::size_t load_fib(HptFib& fib, std::istream& in);

struct GeneratorOptions {
  double zipf_exponent = 1.0;
  std::size_t top_labels = 1024;
  std::size_t mid_vocabulary = 64;
  int min_depth = 2;
  int max_depth = 6;
  double translate_fraction = 0.05;
  FaceId max_face = 16;
};

/// Deterministic synthetic workload: mixed identifier kinds, Zipf-distributed
/// popularity over top-level labels, depth uniform in [min_depth, max_depth].
/// Every generated key is distinct.
class EntryGenerator {
 public:
  explicit EntryGenerator(std::uint64_t seed, GeneratorOptions options = {});

  HptFibEntry next();

 private:
  Identifier random_identifier(IdKind kind, bool unique);
  std::size_t zipf_index();

  GeneratorOptions options_;
  Rng rng_;
  std::vector<double> zipf_cdf_;
  std::uint64_t counter_ = 0;
};

std::vector<HptFibEntry> generate_entries(std::size_t n, std::uint64_t seed,
                                          GeneratorOptions options = {});

struct FibBenchRow {
  std::size_t n = 0;
  double seconds = 0;
  double ns_per_entry = 0;
};

/// Generates and inserts `n` entries into a fresh table, timing the whole
/// stream (generation included).
FibBenchRow bench_fib_insert(std::size_t n, std::uint64_t seed);

}  // namespace minet
