#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <numeric>
#include <span>
#include <utility>
#include <vector>

#include "affine/radix.hpp"

namespace affine {

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n), rank_(n, 0) {
    std::iota(parent_.begin(), parent_.end(), Elem{0});
  }

  Elem find(Elem x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  /// Returns true if two distinct classes were merged.
  bool unite(Elem a, Elem b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (rank_[a] < rank_[b]) std::swap(a, b);
    parent_[b] = a;
    if (rank_[a] == rank_[b]) ++rank_[a];
    return true;
  }

  std::size_t size() const { return parent_.size(); }

 private:
  std::vector<Elem> parent_;
  std::vector<unsigned char> rank_;
};

/// An equivalence relation on {0..n-1}, stored as block ids numbered in
/// order of least member. Equal partitions have identical encodings.
class Partition {
 public:
  Partition() = default;

  static Partition identity(std::size_t n) {
    Partition p;
    p.block_.resize(n);
    std::iota(p.block_.begin(), p.block_.end(), Elem{0});
    p.blocks_ = n;
    return p;
  }

  static Partition total(std::size_t n) {
    Partition p;
    p.block_.assign(n, 0);
    p.blocks_ = n ? 1 : 0;
    return p;
  }

  /// Partition whose blocks are the level sets of `labels`.
  template <class Label>
  static Partition from_labels(std::span<const Label> labels) {
    std::map<Label, Elem> ids;
    Partition p;
    p.block_.resize(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) {
      auto [it, fresh] = ids.try_emplace(labels[i], static_cast<Elem>(ids.size()));
      p.block_[i] = it->second;
    }
    p.blocks_ = ids.size();
    return p;
  }

  template <class Label>
  static Partition from_labels(const std::vector<Label>& labels) {
    return from_labels(std::span<const Label>(labels));
  }

  static Partition from_union_find(UnionFind& uf) {
    std::vector<Elem> roots(uf.size());
    for (std::size_t i = 0; i < uf.size(); ++i) roots[i] = uf.find(static_cast<Elem>(i));
    return from_labels(roots);
  }

  /// Equivalence relation generated by `pairs`.
  static Partition generated_by(std::size_t n, std::span<const std::pair<Elem, Elem>> pairs) {
    UnionFind uf(n);
    for (auto [a, b] : pairs) uf.unite(a, b);
    return from_union_find(uf);
  }

  std::size_t size() const { return block_.size(); }
  std::size_t num_blocks() const { return blocks_; }
  Elem block_of(Elem x) const { return block_[x]; }
  bool related(Elem x, Elem y) const { return block_[x] == block_[y]; }
  std::span<const Elem> encoding() const { return block_; }

  bool is_identity() const { return blocks_ == block_.size(); }
  bool is_total() const { return blocks_ <= 1; }

  /// Least member of each block, by block id.
  std::vector<Elem> representatives() const {
    std::vector<Elem> reps(blocks_);
    for (std::size_t i = block_.size(); i-- > 0;) reps[block_[i]] = static_cast<Elem>(i);
    return reps;
  }

  std::vector<std::vector<Elem>> blocks() const {
    std::vector<std::vector<Elem>> out(blocks_);
    for (std::size_t i = 0; i < block_.size(); ++i) out[block_[i]].push_back(static_cast<Elem>(i));
    return out;
  }

  /// this ⊆ other as sets of pairs.
  bool refines(const Partition& other) const {
    if (other.size() != size()) return false;
    std::vector<Elem> image(blocks_, static_cast<Elem>(-1));
    for (std::size_t i = 0; i < block_.size(); ++i) {
      Elem& slot = image[block_[i]];
      if (slot == static_cast<Elem>(-1)) slot = other.block_[i];
      else if (slot != other.block_[i]) return false;
    }
    return true;
  }

  Partition meet(const Partition& other) const {
    std::vector<std::pair<Elem, Elem>> labels(size());
    for (std::size_t i = 0; i < size(); ++i) labels[i] = {block_[i], other.block_[i]};
    return from_labels(labels);
  }

  /// Blocks of this partition split further by `labels`.
  template <class Label>
  Partition refine_by(std::span<const Label> labels) const {
    std::vector<std::pair<Elem, Label>> keyed(size());
    for (std::size_t i = 0; i < size(); ++i) keyed[i] = {block_[i], labels[i]};
    return from_labels(keyed);
  }

  Partition join(const Partition& other) const {
    UnionFind uf(size());
    std::vector<Elem> first_a(blocks_, static_cast<Elem>(-1));
    std::vector<Elem> first_b(other.blocks_, static_cast<Elem>(-1));
    for (std::size_t i = 0; i < size(); ++i) {
      const Elem x = static_cast<Elem>(i);
      Elem& fa = first_a[block_[i]];
      Elem& fb = first_b[other.block_[i]];
      if (fa == static_cast<Elem>(-1)) fa = x;
      else uf.unite(fa, x);
      if (fb == static_cast<Elem>(-1)) fb = x;
      else uf.unite(fb, x);
    }
    return from_union_find(uf);
  }

  friend bool operator==(const Partition& a, const Partition& b) { return a.block_ == b.block_; }
  friend auto operator<=>(const Partition& a, const Partition& b) { return a.block_ <=> b.block_; }

 private:
  std::vector<Elem> block_;
  std::size_t blocks_ = 0;
};

}  // namespace affine
