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

#include "minet/data_layer.hpp"

#include <fstream>
#include <mutex>
#include <set>
#include <sstream>

#include "minet/error.hpp"

namespace minet {

// --- OnChainIndex ---------------------------------------------------------------

std::optional<std::string> OnChainIndex::check(const Transaction& tx, const Committee& committee) const {
  if (!verify_transaction_signature(tx)) return "bad submitter signature";
  switch (tx.kind) {
    case TxKind::RegisterUser: {
      if (!tx.prefix.is_hierarchical()) return "prefix must be hierarchical: " + tx.prefix.to_string();
      if (tx.submitter_key != tx.public_key) return "registration not signed by the registering key";
      if (registrations_.count(tx.prefix)) return "prefix already registered: " + tx.prefix.to_string();
      PublisherId owner = publisher_id(tx.public_key);
      for (const auto& [p, reg] : registrations_) {
        if (reg.owner == owner || p.kind() != tx.prefix.kind()) continue;
        if (covers(p, tx.prefix) || covers(tx.prefix, p)) {
          return "prefix overlaps " + p.to_string() + " owned by another user";
        }
      }
      return std::nullopt;
    }
    case TxKind::PublishResource: {
      const ResourceRecord& r = tx.record;
      if (!verify_record(r, tx.submitter_key)) return "record signature does not match submitter";
      auto owner = owner_of(r.name);
      if (!owner) return "no registered prefix covers " + r.name.to_string();
      if (owner->second->owner != r.publisher) {
        return r.name.to_string() + " is outside the submitter's registered prefixes";
      }
      if (publications_.count(r.name)) return "already published: " + r.name.to_string();
      return std::nullopt;
    }
    case TxKind::Amend: {
      const ResourceRecord& r = tx.record;
      if (!verify_record(r, tx.submitter_key)) return "record signature does not match submitter";
      if (!publications_.count(r.name)) return "nothing published under " + r.name.to_string();
      Digest digest = amend_digest(r);
      std::set<MemberId> approved;
      for (const auto& a : tx.approvals) {
        auto it = committee.find(a.member);
        if (it == committee.end()) continue;
        if (default_scheme().verify(digest.view(), a.signature, it->second)) approved.insert(a.member);
      }
      if (!is_majority(approved.size(), committee.size())) {
        return "amendment approved by " + std::to_string(approved.size()) + " of " +
               std::to_string(committee.size()) + " committee members";
      }
      return std::nullopt;
    }
  }
  return "unknown transaction kind";
}

void OnChainIndex::apply(const Transaction& tx, std::uint64_t height) {
  switch (tx.kind) {
    case TxKind::RegisterUser:
      registrations_[tx.prefix] = Registration{publisher_id(tx.public_key), tx.public_key, tx.real_id, height};
      break;
    case TxKind::PublishResource:
    case TxKind::Amend:
      publications_[tx.record.name] = Publication{tx.record, height};
      break;
  }
  ++applied_;
}

std::size_t OnChainIndex::fold_block(const Block& block, const Committee& committee) {
  std::size_t n = 0;
  for (std::size_t i = 0; i < block.txs.size(); ++i) {
    const Transaction& tx = block.txs[i];
    if (auto why = check(tx, committee)) {
      audit_.push_back(AuditEntry{block.height, i, tx_id(tx), std::move(*why)});
      continue;
    }
    apply(tx, block.height);
    ++n;
  }
  return n;
}

const Registration* OnChainIndex::registration(const Identifier& prefix) const {
  auto it = registrations_.find(prefix);
  return it == registrations_.end() ? nullptr : &it->second;
}

std::optional<std::pair<Identifier, const Registration*>> OnChainIndex::owner_of(const Identifier& name) const {
  if (!name.is_hierarchical()) return std::nullopt;
  for (std::size_t n = name.size(); n >= 1; --n) {
    Identifier p = n == name.size() ? name : name.prefix(n);
    if (auto it = registrations_.find(p); it != registrations_.end()) {
      return std::make_pair(p, &it->second);
    }
  }
  return std::nullopt;
}

const Publication* OnChainIndex::publication(const Identifier& name) const {
  auto it = publications_.find(name);
  return it == publications_.end() ? nullptr : &it->second;
}

const Publication* OnChainIndex::find_covering(const Identifier& name) const {
  if (!name.is_hierarchical()) return publication(name);
  for (std::size_t n = name.size(); n >= 1; --n) {
    if (const auto* p = publication(n == name.size() ? name : name.prefix(n))) return p;
  }
  return nullptr;
}

std::string OnChainIndex::dump() const {
  std::ostringstream out;
  for (const auto& [p, r] : registrations_) {
    out << "reg\t" << p.to_string() << '\t' << to_hex(r.owner.value) << '\t' << r.height << '\n';
  }
  for (const auto& [n, p] : publications_) {
    out << "pub\t" << n.to_string() << '\t' << to_hex(p.record.content_hash) << '\t' << p.record.locator.to_string()
        << '\t' << to_hex(p.record.publisher.value) << '\t' << p.height << '\n';
  }
  for (const auto& a : audit_) {
    out << "skip\t" << a.height << '\t' << a.tx_index << '\t' << to_hex(a.tx) << '\t' << a.reason << '\n';
  }
  return out.str();
}

// --- Blob stores ------------------------------------------------------------------

namespace {

void check_hash(const Digest& hash, ByteView bytes) {
  Digest actual = sha256(bytes);
  if (actual != hash) {
    fail(ErrorCode::HashMismatch, "content hashes to " + to_hex(actual) + ", expected " + to_hex(hash));
  }
}

std::string journal_line(const ResourceRecord& r) {
  return r.name.to_string() + '\t' + to_hex(r.publisher.value) + '\t' + to_hex(r.content_hash) + '\t' +
         r.locator.to_string() + '\t' + to_hex(r.signature) + '\n';
}

ResourceRecord parse_journal_line(const std::string& line, std::size_t lineno) {
  std::vector<std::string> f;
  std::size_t start = 0;
  for (;;) {
    std::size_t tab = line.find('\t', start);
    f.push_back(line.substr(start, tab - start));
    if (tab == std::string::npos) break;
    start = tab + 1;
  }
  if (f.size() != 5) fail(ErrorCode::BadEncoding, "journal line " + std::to_string(lineno) + ": expected 5 fields");
  try {
    ResourceRecord r;
    r.name = parse_identifier(f[0]);
    r.publisher = PublisherId{digest_from_hex(f[1])};
    r.content_hash = digest_from_hex(f[2]);
    r.locator = parse_identifier(f[3]);
    r.signature = from_hex(f[4]);
    return r;
  } catch (const Error& e) {
    fail(ErrorCode::BadEncoding, "journal line " + std::to_string(lineno) + ": " + e.what());
  }
}

}  // namespace

void MemoryBlobStore::put_blob(const Digest& hash, ByteView bytes) {
  check_hash(hash, bytes);
  std::unique_lock lock(mu_);
  blobs_[hash] = Bytes(bytes.begin(), bytes.end());
}

std::optional<Bytes> MemoryBlobStore::get_blob(const Digest& hash) const {
  std::shared_lock lock(mu_);
  auto it = blobs_.find(hash);
  if (it == blobs_.end()) return std::nullopt;
  return it->second;
}

bool MemoryBlobStore::has_blob(const Digest& hash) const {
  std::shared_lock lock(mu_);
  return blobs_.count(hash) != 0;
}

void MemoryBlobStore::put_record(const ResourceRecord& record) {
  std::unique_lock lock(mu_);
  records_[record.name] = record;
}

std::optional<ResourceRecord> MemoryBlobStore::record(const Identifier& name) const {
  std::shared_lock lock(mu_);
  auto it = records_.find(name);
  if (it == records_.end()) return std::nullopt;
  return it->second;
}

DirectoryBlobStore::DirectoryBlobStore(std::filesystem::path root) : root_(std::move(root)) {
  std::error_code ec;
  std::filesystem::create_directories(root_ / "blobs", ec);
  if (ec) fail(ErrorCode::Io, "cannot create " + (root_ / "blobs").string() + ": " + ec.message());
  std::ifstream in(root_ / "journal.tsv");
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty()) continue;
    ResourceRecord r = parse_journal_line(line, n);
    records_[r.name] = std::move(r);
  }
}

std::filesystem::path DirectoryBlobStore::blob_path(const Digest& hash) const {
  std::string hex = to_hex(hash);
  return root_ / "blobs" / hex.substr(0, 2) / hex;
}

void DirectoryBlobStore::put_blob(const Digest& hash, ByteView bytes) {
  check_hash(hash, bytes);
  std::unique_lock lock(mu_);
  auto path = blob_path(hash);
  std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) fail(ErrorCode::Io, "cannot write " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::optional<Bytes> DirectoryBlobStore::get_blob(const Digest& hash) const {
  std::shared_lock lock(mu_);
  std::ifstream in(blob_path(hash), std::ios::binary);
  if (!in) return std::nullopt;
  return Bytes(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

bool DirectoryBlobStore::has_blob(const Digest& hash) const {
  std::shared_lock lock(mu_);
  return std::filesystem::exists(blob_path(hash));
}

void DirectoryBlobStore::put_record(const ResourceRecord& record) {
  std::unique_lock lock(mu_);
  std::ofstream out(root_ / "journal.tsv", std::ios::app);
  out << journal_line(record);
  if (!out) fail(ErrorCode::Io, "cannot append to " + (root_ / "journal.tsv").string());
  records_[record.name] = record;
}

std::optional<ResourceRecord> DirectoryBlobStore::record(const Identifier& name) const {
  std::shared_lock lock(mu_);
  auto it = records_.find(name);
  if (it == records_.end()) return std::nullopt;
  return it->second;
}

std::string_view to_string(BlobStatus s) noexcept {
  switch (s) {
    case BlobStatus::Ok: return "ok";
    case BlobStatus::Missing: return "missing";
    case BlobStatus::Corrupt: return "corrupt";
  }
  return "?";
}

std::map<Identifier, BlobStatus> check_integrity(const OnChainIndex& index, const BlobStore& store) {
  std::map<Identifier, BlobStatus> out;
  for (const auto& [name, pub] : index.publications()) {
    auto bytes = store.get_blob(pub.record.content_hash);
    if (!bytes) {
      out[name] = BlobStatus::Missing;
    } else {
      out[name] = sha256(*bytes) == pub.record.content_hash ? BlobStatus::Ok : BlobStatus::Corrupt;
    }
  }
  return out;
}

}  // namespace minet
