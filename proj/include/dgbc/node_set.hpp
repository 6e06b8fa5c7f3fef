// Copyright 2026 The dgbc Authors
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

#include <bit>
#include <cstdint>
#include <initializer_list>
#include <iterator>
#include <stdexcept>
#include <vector>

namespace dgbc {

/// Dense node index, contiguous 0..n-1 within one DiGraph.
using NodeId = std::uint32_t;

/// Upper bound on node count; node sets are 64-bit masks.
inline constexpr NodeId kMaxNodes = 64;

/// Set of node indices backed by a 64-bit mask. Iteration is in ascending
/// index order.
class NodeSet {
 public:
  constexpr NodeSet() = default;
  constexpr explicit NodeSet(std::uint64_t bits) : bits_(bits) {}
  NodeSet(std::initializer_list<NodeId> ids) {
    for (NodeId id : ids) insert(id);
  }

  /// {0, ..., n-1}
  static constexpr NodeSet first_n(NodeId n) {
    return NodeSet(n >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << n) - 1));
  }
  static NodeSet from(const std::vector<NodeId>& ids) {
    NodeSet s;
    for (NodeId id : ids) s.insert(id);
    return s;
  }
  static constexpr NodeSet single(NodeId id) { return NodeSet(std::uint64_t{1} << id); }

  constexpr std::uint64_t bits() const { return bits_; }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr int size() const { return std::popcount(bits_); }
  constexpr bool contains(NodeId id) const { return id < 64 && ((bits_ >> id) & 1U) != 0; }
  constexpr bool subset_of(NodeSet other) const { return (bits_ & ~other.bits_) == 0; }
  constexpr bool intersects(NodeSet other) const { return (bits_ & other.bits_) != 0; }

  void insert(NodeId id) {
    if (id >= kMaxNodes) throw std::out_of_range("node index exceeds 64");
    bits_ |= std::uint64_t{1} << id;
  }
  void erase(NodeId id) {
    if (id < kMaxNodes) bits_ &= ~(std::uint64_t{1} << id);
  }

  /// Smallest member; undefined on the empty set.
  constexpr NodeId front() const { return static_cast<NodeId>(std::countr_zero(bits_)); }

  std::vector<NodeId> to_vector() const {
    std::vector<NodeId> out;
    out.reserve(static_cast<std::size_t>(size()));
    for (NodeId id : *this) out.push_back(id);
    return out;
  }

  friend constexpr NodeSet operator|(NodeSet a, NodeSet b) { return NodeSet(a.bits_ | b.bits_); }
  friend constexpr NodeSet operator&(NodeSet a, NodeSet b) { return NodeSet(a.bits_ & b.bits_); }
  friend constexpr NodeSet operator-(NodeSet a, NodeSet b) { return NodeSet(a.bits_ & ~b.bits_); }
  friend constexpr NodeSet operator^(NodeSet a, NodeSet b) { return NodeSet(a.bits_ ^ b.bits_); }
  NodeSet& operator|=(NodeSet o) { bits_ |= o.bits_; return *this; }
  NodeSet& operator&=(NodeSet o) { bits_ &= o.bits_; return *this; }
  NodeSet& operator-=(NodeSet o) { bits_ &= ~o.bits_; return *this; }
  friend constexpr bool operator==(NodeSet a, NodeSet b) = default;
  friend constexpr bool operator<(NodeSet a, NodeSet b) { return a.bits_ < b.bits_; }

  class iterator {
   public:
    using iterator_category = std::forward_iterator_tag;
    using value_type = NodeId;
    using difference_type = std::ptrdiff_t;
    using pointer = const NodeId*;
    using reference = NodeId;

    constexpr iterator() = default;
    constexpr explicit iterator(std::uint64_t rest) : rest_(rest) {}
    constexpr NodeId operator*() const { return static_cast<NodeId>(std::countr_zero(rest_)); }
    constexpr iterator& operator++() {
      rest_ &= rest_ - 1;
      return *this;
    }
    constexpr iterator operator++(int) {
      iterator tmp = *this;
      ++*this;
      return tmp;
    }
    friend constexpr bool operator==(iterator a, iterator b) = default;

   private:
    std::uint64_t rest_ = 0;
  };

  constexpr iterator begin() const { return iterator(bits_); }
  constexpr iterator end() const { return iterator(0); }

 private:
  std::uint64_t bits_ = 0;
};

/// Scatters the low bits of `mask` onto the members of `universe`, in
/// ascending member order. Used to enumerate subsets of a set.
inline NodeSet scatter(std::uint64_t mask, NodeSet universe) {
  NodeSet out;
  for (NodeId id : universe) {
    if (mask & 1U) out.insert(id);
    mask >>= 1;
    if (mask == 0) break;
  }
  return out;
}

}  // namespace dgbc
