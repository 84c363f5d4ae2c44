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

#include "minet/tlv.hpp"

#include "minet/error.hpp"

namespace minet {

TlvWriter& TlvWriter::put(std::uint8_t type, ByteView value) {
  if (value.size() > 0xFFFFFFFFu) {
    fail(ErrorCode::InvalidArgument, "tlv value too large");
  }
  auto len = static_cast<std::uint32_t>(value.size());
  buf_.push_back(type);
  buf_.push_back(static_cast<std::uint8_t>(len >> 24));
  buf_.push_back(static_cast<std::uint8_t>(len >> 16));
  buf_.push_back(static_cast<std::uint8_t>(len >> 8));
  buf_.push_back(static_cast<std::uint8_t>(len));
  buf_.insert(buf_.end(), value.begin(), value.end());
  return *this;
}

TlvWriter& TlvWriter::put_u64(std::uint8_t type, std::uint64_t value) {
  std::uint8_t raw[8];
  for (int i = 0; i < 8; ++i) raw[i] = static_cast<std::uint8_t>(value >> (56 - 8 * i));
  return put(type, ByteView(raw, 8));
}

std::uint64_t TlvField::as_u64() const {
  if (value.size() != 8) fail(ErrorCode::BadEncoding, "u64 field must be 8 bytes");
  std::uint64_t v = 0;
  for (auto b : value) v = v << 8 | b;
  return v;
}

Digest TlvField::as_digest() const {
  if (value.size() != 32) fail(ErrorCode::BadEncoding, "digest field must be 32 bytes");
  Digest d;
  std::copy(value.begin(), value.end(), d.bytes.begin());
  return d;
}

std::uint8_t TlvReader::peek_type() const {
  if (done()) fail(ErrorCode::BadEncoding, "tlv: unexpected end of input");
  return data_[pos_];
}

TlvField TlvReader::next() {
  if (data_.size() - pos_ < TlvWriter::kHeader) {
    fail(ErrorCode::BadEncoding, "tlv: truncated header");
  }
  TlvField f;
  f.type = data_[pos_];
  std::uint32_t len = std::uint32_t{data_[pos_ + 1]} << 24 | std::uint32_t{data_[pos_ + 2]} << 16 |
                      std::uint32_t{data_[pos_ + 3]} << 8 | std::uint32_t{data_[pos_ + 4]};
  pos_ += TlvWriter::kHeader;
  if (data_.size() - pos_ < len) {
    fail(ErrorCode::BadEncoding, "tlv: truncated value");
  }
  f.value = data_.subspan(pos_, len);
  pos_ += len;
  return f;
}

TlvField TlvReader::expect(std::uint8_t type) {
  TlvField f = next();
  if (f.type != type) {
    fail(ErrorCode::BadEncoding, "tlv: expected type " + std::to_string(type) + ", got " +
                                     std::to_string(f.type));
  }
  return f;
}

}  // namespace minet
