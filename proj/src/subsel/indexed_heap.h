// Copyright 2026 The subsel Authors.
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

#ifndef SUBSEL_INDEXED_HEAP_H_
#define SUBSEL_INDEXED_HEAP_H_

#include <cassert>
#include <span>
#include <vector>

#include "subsel/common.h"

namespace subsel {

// Binary max-heap over element ids 0..n-1 with addressable keys. Order is
// (key desc, id asc), so the top is the lowest id among maximal keys.
class IndexedMaxHeap {
 public:
  explicit IndexedMaxHeap(std::span<const double> keys)
      : key_(keys.begin(), keys.end()),
        heap_(keys.size()),
        pos_(keys.size()) {
    for (std::size_t i = 0; i < heap_.size(); ++i) {
      heap_[i] = static_cast<Index>(i);
      pos_[i] = static_cast<std::ptrdiff_t>(i);
    }
    for (std::size_t i = heap_.size() / 2; i-- > 0;) SiftDown(i);
  }

  bool empty() const { return heap_.empty(); }
  std::size_t size() const { return heap_.size(); }
  bool contains(Index id) const { return pos_[id] >= 0; }
  double key(Index id) const { return key_[id]; }

  Index top() const {
    assert(!empty());
    return heap_.front();
  }

  Index Pop() {
    const Index id = top();
    Remove(id);
    return id;
  }

  void Remove(Index id) {
    const auto p = static_cast<std::size_t>(pos_[id]);
    const std::size_t last = heap_.size() - 1;
    Swap(p, last);
    heap_.pop_back();
    pos_[id] = -1;
    if (p < heap_.size()) {
      SiftDown(p);
      SiftUp(p);
    }
  }

  // Sets the key of a contained id and restores heap order.
  void Update(Index id, double new_key) {
    const double old = key_[id];
    key_[id] = new_key;
    const auto p = static_cast<std::size_t>(pos_[id]);
    if (new_key > old) {
      SiftUp(p);
    } else {
      SiftDown(p);
    }
  }

 private:
  bool Before(Index a, Index b) const {
    return key_[a] > key_[b] || (key_[a] == key_[b] && a < b);
  }

  void Swap(std::size_t a, std::size_t b) {
    std::swap(heap_[a], heap_[b]);
    pos_[heap_[a]] = static_cast<std::ptrdiff_t>(a);
    pos_[heap_[b]] = static_cast<std::ptrdiff_t>(b);
  }

  void SiftUp(std::size_t p) {
    while (p > 0) {
      const std::size_t parent = (p - 1) / 2;
      if (!Before(heap_[p], heap_[parent])) break;
      Swap(p, parent);
      p = parent;
    }
  }

  void SiftDown(std::size_t p) {
    const std::size_t n = heap_.size();
    while (true) {
      std::size_t best = p;
      const std::size_t l = 2 * p + 1, r = l + 1;
      if (l < n && Before(heap_[l], heap_[best])) best = l;
      if (r < n && Before(heap_[r], heap_[best])) best = r;
      if (best == p) break;
      Swap(p, best);
      p = best;
    }
  }

  std::vector<double> key_;
  std::vector<Index> heap_;
  std::vector<std::ptrdiff_t> pos_;
};

}  // namespace subsel

#endif  // SUBSEL_INDEXED_HEAP_H_
