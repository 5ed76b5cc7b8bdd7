#pragma once

#include <cassert>
#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

namespace flowroute {

/*  Binary min-heap over a fixed index range [0, n) with decrease-key.
 *  Ordering is (key, index): equal keys pop the lower index first, which keeps
 *  searches deterministic.
 */
class IndexedMinHeap {
 public:
  explicit IndexedMinHeap(std::size_t n) : pos_(n, kAbsent), keys_(n, std::numeric_limits<double>::infinity()) {}

  bool empty() const noexcept { return heap_.empty(); }
  std::size_t size() const noexcept { return heap_.size(); }
  bool contains(std::size_t i) const { return pos_[i] != kAbsent; }
  double key(std::size_t i) const { return keys_[i]; }

  void insert(std::size_t i, double key) {
    assert(!contains(i));
    keys_[i] = key;
    pos_[i] = heap_.size();
    heap_.push_back(i);
    sift_up(heap_.size() - 1);
  }

  /// Lowers the key of an index already in the heap.
  void decrease_key(std::size_t i, double key) {
    assert(contains(i) && key <= keys_[i]);
    keys_[i] = key;
    sift_up(pos_[i]);
  }

  void insert_or_decrease(std::size_t i, double key) {
    if (contains(i)) {
      decrease_key(i, key);
    } else {
      insert(i, key);
    }
  }

  std::size_t top() const { return heap_.front(); }

  std::size_t extract_min() {
    const std::size_t top = heap_.front();
    swap_nodes(0, heap_.size() - 1);
    heap_.pop_back();
    pos_[top] = kAbsent;
    if (!heap_.empty()) sift_down(0);
    return top;
  }

 private:
  static constexpr std::size_t kAbsent = static_cast<std::size_t>(-1);

  bool less(std::size_t a, std::size_t b) const {
    const std::size_t ia = heap_[a];
    const std::size_t ib = heap_[b];
    if (keys_[ia] != keys_[ib]) return keys_[ia] < keys_[ib];
    return ia < ib;
  }

  void swap_nodes(std::size_t a, std::size_t b) {
    std::swap(heap_[a], heap_[b]);
    pos_[heap_[a]] = a;
    pos_[heap_[b]] = b;
  }

  void sift_up(std::size_t k) {
    while (k > 0) {
      const std::size_t parent = (k - 1) / 2;
      if (!less(k, parent)) break;
      swap_nodes(k, parent);
      k = parent;
    }
  }

  void sift_down(std::size_t k) {
    const std::size_t n = heap_.size();
    for (;;) {
      const std::size_t l = 2 * k + 1;
      if (l >= n) break;
      std::size_t best = l;
      if (l + 1 < n && less(l + 1, l)) best = l + 1;
      if (!less(best, k)) break;
      swap_nodes(k, best);
      k = best;
    }
  }

  std::vector<std::size_t> heap_;  // heap position -> index
  std::vector<std::size_t> pos_;   // index -> heap position
  std::vector<double> keys_;
};

}  // namespace flowroute
