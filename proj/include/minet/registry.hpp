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
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "minet/data_layer.hpp"
#include "minet/netsim.hpp"
#include "minet/pov.hpp"

namespace minet {

/// Key file: {"scheme": "ed25519", "seed": "<64 hex>", "public_key": "<hex>"}.
struct KeyFile {
  Digest seed;
  KeyPair key;

  static KeyFile from_seed(const Digest& seed);
  static KeyFile load(const std::filesystem::path& path);
  void save(const std::filesystem::path& path) const;
};

struct QueryResult {
  ResourceRecord record;
  Bytes content;
  /// Simulated ticks from the first Interest to the last segment.
  Tick fetch_ticks = 0;
};

/// Settings used when a registry directory is first created.
struct RegistryOptions {
  std::uint64_t seed = 1;
  std::size_t commissioners = 5;
  std::size_t butlers = 3;
  std::size_t candidates = 1;
  std::uint64_t term_length = 64;
};

/// Name registry backed by a local committee and a directory:
///   manifest.json   format version and seed
///   genesis.json    consensus roles and keys
///   chain.log       one hex-encoded committed block per line
///   store/          off-chain blobs and records
/// Each operation commits one block: the scheduled butler proposes, every
/// commissioner votes and the block is appended once a majority signed it.
class Registry {
 public:
  /// Opens `dir`, initialising it with `options` when it holds no manifest.
  /// An existing chain is replayed and every block's votes rechecked.
  explicit Registry(std::filesystem::path dir, RegistryOptions options = {});

  const Chain& chain() const noexcept { return chain_; }
  const OnChainIndex& index() const noexcept { return chain_.index(); }
  DirectoryBlobStore& store() noexcept { return store_; }
  const std::filesystem::path& dir() const noexcept { return dir_; }
  std::uint64_t seed() const noexcept { return seed_; }

  /// Commits one block holding `txs` and returns it.
  const Block& commit(const std::vector<Transaction>& txs);

  /// Throws PrefixTaken when another registration owns, contains or sits
  /// under `prefix`; InvalidArgument for other rejections.
  const Registration& register_prefix(const Identifier& prefix, const KeyPair& user, ByteView real_id);

  /// Records `content` under `name`, stores it off-chain once committed.
  /// Throws NotRegistered when `name` is outside the user's prefixes; the
  /// rejection stays in the on-chain audit.
  ResourceRecord publish(const Identifier& name, ByteView content, const KeyPair& user,
                         std::optional<Identifier> locator = std::nullopt);

  /// Resolves `name` on-chain, checks the record against its owner's key,
  /// fetches the content through a simulated client, two routers and an
  /// origin server, and verifies the hash. Throws NotFound or
  /// IntegrityFailure.
  QueryResult query(const Identifier& name);

 private:
  void append(const Block& b);

  std::filesystem::path dir_;
  std::uint64_t seed_ = 0;
  Chain chain_;
  DirectoryBlobStore store_;
};

/// Default locator of published content: the origin server's node prefix.
Identifier default_origin_locator();

}  // namespace minet
