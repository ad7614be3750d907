/*
 * Copyright 2026 The PhishSnap Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <utility>
#include <vector>

#include "phishsnap/bank.hpp"
#include "phishsnap/error.hpp"
#include "phishsnap/phash.hpp"

namespace phishsnap {

// BK-tree over the bank's hashes under Hamming distance.
//
// Entries with identical hashes share a node; the node keeps their bank
// indices in ascending order, so nearest() reproduces the linear scan's
// lowest-index tie rule exactly.
class BkIndex {
 public:
  explicit BkIndex(const HashBank& bank) {
    if (bank.empty()) throw EmptyBankError();
    const auto entries = bank.entries();
    nodes_.reserve(entries.size());
    for (std::size_t i = 0; i < entries.size(); ++i) insert(entries[i].hash, i);
  }

  std::size_t node_count() const noexcept { return nodes_.size(); }

  Match nearest(PHash64 probe) const {
    Match best{std::numeric_limits<int>::max(), std::numeric_limits<std::size_t>::max()};
    std::vector<std::size_t> stack{0};
    while (!stack.empty()) {
      const Node& node = nodes_[stack.back()];
      stack.pop_back();
      const int d = hamming_distance(probe, node.hash);
      const std::size_t idx = node.indices.front();
      if (d < best.distance || (d == best.distance && idx < best.index)) best = {d, idx};
      // A subtree at edge distance k holds only hashes at distance
      // >= |d - k| from the probe; equality must still be explored for ties.
      for (const auto& [k, child] : node.children) {
        if (std::abs(d - k) <= best.distance) stack.push_back(child);
      }
    }
    return best;
  }

 private:
  struct Node {
    PHash64 hash;
    std::vector<std::size_t> indices;
    std::vector<std::pair<int, std::size_t>> children;
  };

  void insert(PHash64 hash, std::size_t index) {
    if (nodes_.empty()) {
      nodes_.push_back(Node{hash, {index}, {}});
      return;
    }
    std::size_t at = 0;
    for (;;) {
      const int d = hamming_distance(hash, nodes_[at].hash);
      if (d == 0) {
        nodes_[at].indices.push_back(index);
        return;
      }
      std::size_t next = kNone;
      for (const auto& [k, child] : nodes_[at].children) {
        if (k == d) next = child;
      }
      if (next == kNone) {
        nodes_.push_back(Node{hash, {index}, {}});
        nodes_[at].children.emplace_back(d, nodes_.size() - 1);
        return;
      }
      at = next;
    }
  }

  static constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
  std::vector<Node> nodes_;
};

inline BkIndex build_index(const HashBank& bank) { return BkIndex(bank); }

inline Verdict classify(const HashBank& bank, const BkIndex& index, PHash64 probe,
                        std::optional<int> threshold = std::nullopt) {
  const int t = threshold.value_or(bank.threshold());
  if (t < 0 || t > kMaxThreshold) throw InvalidInputError("threshold outside [0, 64]");
  return make_verdict(bank, index.nearest(probe), t);
}

}  // namespace phishsnap
