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
#include <map>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "minet/ledger.hpp"

namespace minet {

struct Registration {
  PublisherId owner;
  Bytes public_key;
  Bytes real_id;
  std::uint64_t height = 0;
};

struct Publication {
  ResourceRecord record;
  std::uint64_t height = 0;
};

/// A committed transaction that was not applied.
struct AuditEntry {
  std::uint64_t height = 0;
  std::size_t tx_index = 0;
  Digest tx;
  std::string reason;
};

/// Routing-critical state derived by folding committed blocks.
class OnChainIndex {
 public:
  /// Why `tx` cannot be applied to the current state, or nullopt if it can.
  std::optional<std::string> check(const Transaction& tx, const Committee& committee) const;
  /// Applies `tx`, which must pass check().
  void apply(const Transaction& tx, std::uint64_t height);
  /// Applies every valid transaction in order and audits the rest; returns
  /// the number applied.
  std::size_t fold_block(const Block& block, const Committee& committee);

  const Registration* registration(const Identifier& prefix) const;
  /// Longest registered prefix covering `name`.
  std::optional<std::pair<Identifier, const Registration*>> owner_of(const Identifier& name) const;
  const Publication* publication(const Identifier& name) const;
  /// Publication whose name is the longest prefix of `name`.
  const Publication* find_covering(const Identifier& name) const;

  const std::map<Identifier, Registration>& registrations() const noexcept { return registrations_; }
  const std::map<Identifier, Publication>& publications() const noexcept { return publications_; }
  const std::vector<AuditEntry>& audit() const noexcept { return audit_; }
  std::uint64_t applied() const noexcept { return applied_; }

  /// Sorted, line-oriented text form; equal indices give equal text.
  std::string dump() const;

 private:
  std::map<Identifier, Registration> registrations_;
  std::map<Identifier, Publication> publications_;
  std::vector<AuditEntry> audit_;
  std::uint64_t applied_ = 0;
};

/// Off-chain blobs keyed by content hash plus full resource records.
class BlobStore {
 public:
  virtual ~BlobStore() = default;
  /// Throws HashMismatch unless sha256(bytes) == hash.
  virtual void put_blob(const Digest& hash, ByteView bytes) = 0;
  /// Exact stored bytes, or nullopt when missing.
  virtual std::optional<Bytes> get_blob(const Digest& hash) const = 0;
  virtual bool has_blob(const Digest& hash) const = 0;
  virtual void put_record(const ResourceRecord& record) = 0;
  virtual std::optional<ResourceRecord> record(const Identifier& name) const = 0;
};

class MemoryBlobStore : public BlobStore {
 public:
  void put_blob(const Digest& hash, ByteView bytes) override;
  std::optional<Bytes> get_blob(const Digest& hash) const override;
  bool has_blob(const Digest& hash) const override;
  void put_record(const ResourceRecord& record) override;
  std::optional<ResourceRecord> record(const Identifier& name) const override;

 private:
  mutable std::shared_mutex mu_;
  std::map<Digest, Bytes> blobs_;
  std::map<Identifier, ResourceRecord> records_;
};

/// Directory layout:
///   blobs/<first two hex digits>/<64 hex digits>   raw content
///   journal.tsv                                    one record per line:
///     name \t publisher \t content_hash \t locator \t signature (hex)
/// Later journal lines for a name supersede earlier ones.
class DirectoryBlobStore : public BlobStore {
 public:
  explicit DirectoryBlobStore(std::filesystem::path root);
  void put_blob(const Digest& hash, ByteView bytes) override;
  std::optional<Bytes> get_blob(const Digest& hash) const override;
  bool has_blob(const Digest& hash) const override;
  void put_record(const ResourceRecord& record) override;
  std::optional<ResourceRecord> record(const Identifier& name) const override;
  const std::filesystem::path& root() const noexcept { return root_; }

 private:
  std::filesystem::path blob_path(const Digest& hash) const;

  std::filesystem::path root_;
  mutable std::shared_mutex mu_;
  std::map<Identifier, ResourceRecord> records_;
};

enum class BlobStatus : std::uint8_t { Ok, Missing, Corrupt };
std::string_view to_string(BlobStatus s) noexcept;

/// Checks every on-chain publication against the off-chain store.
std::map<Identifier, BlobStatus> check_integrity(const OnChainIndex& index, const BlobStore& store);

}  // namespace minet
