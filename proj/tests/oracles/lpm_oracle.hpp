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

// Reference longest-prefix match: a flat list scanned end to end.

#include <optional>
#include <vector>

#include "minet/hpt_fib.hpp"

namespace minet::oracle {

class LinearFib {
 public:
  void insert(const HptFibEntry& e) {
    for (auto& x : entries_) {
      if (x.key == e.key) {
        x = e;
        return;
      }
    }
    entries_.push_back(e);
  }

  bool remove(const Identifier& key) {
    for (std::size_t i = 0; i < entries_.size(); ++i) {
      if (entries_[i].key == key) {
        entries_.erase(entries_.begin() + static_cast<long>(i));
        return true;
      }
    }
    return false;
  }

  std::optional<HptFibEntry> lpm(const Identifier& name) const {
    const HptFibEntry* best = nullptr;
    for (const auto& e : entries_) {
      if (!covers(e.key, name)) continue;
      if (!best || length(e.key) > length(best->key)) best = &e;
    }
    if (!best) return std::nullopt;
    return *best;
  }

  std::size_t size() const { return entries_.size(); }

 private:
  static std::size_t length(const Identifier& id) {
    return id.is_hierarchical() ? id.size() : static_cast<std::size_t>(id.prefix_length());
  }

  std::vector<HptFibEntry> entries_;
};

}  // namespace minet::oracle
