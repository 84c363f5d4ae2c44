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
#include <string>
#include <string_view>

#include "minet/crypto.hpp"

namespace minet {

/// Writer for the binary TLV format shared by every on-wire and on-disk
/// encoding: 1-byte type, 4-byte big-endian length, value.
class TlvWriter {
 public:
  TlvWriter& put(std::uint8_t type, ByteView value);
  TlvWriter& put(std::uint8_t type, std::string_view value) { return put(type, as_bytes(value)); }
  TlvWriter& put_u64(std::uint8_t type, std::uint64_t value);
  TlvWriter& put_digest(std::uint8_t type, const Digest& d) { return put(type, d.view()); }
  TlvWriter& put_nested(std::uint8_t type, const TlvWriter& inner) { return put(type, inner.bytes()); }

  const Bytes& bytes() const noexcept { return buf_; }
  Bytes take() && { return std::move(buf_); }

  static constexpr std::size_t kHeader = 5;

 private:
  Bytes buf_;
};

struct TlvField {
  std::uint8_t type = 0;
  ByteView value;

  std::string as_string() const { return {reinterpret_cast<const char*>(value.data()), value.size()}; }
  std::uint64_t as_u64() const;
  Digest as_digest() const;
  Bytes as_bytes() const { return {value.begin(), value.end()}; }
};

class TlvReader {
 public:
  explicit TlvReader(ByteView data) : data_(data) {}

  bool done() const noexcept { return pos_ == data_.size(); }
  std::uint8_t peek_type() const;
  TlvField next();
  /// Reads the next field and throws BadEncoding unless it has `type`.
  TlvField expect(std::uint8_t type);

 private:
  ByteView data_;
  std::size_t pos_ = 0;
};

/// Encoded size of a field with a value of `value_size` bytes.
constexpr std::size_t tlv_size(std::size_t value_size) { return TlvWriter::kHeader + value_size; }

}  // namespace minet
