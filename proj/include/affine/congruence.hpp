#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <span>
#include <utility>
#include <vector>

#include "affine/algebra.hpp"
#include "affine/homomorphism.hpp"
#include "affine/partition.hpp"

namespace affine {

namespace detail {

// Calls visit(base, stride) for every table code whose digit at `position`
// is zero; the code with x at that position is base + x * stride.
template <class Visit>
void for_each_slot(std::size_t size, std::size_t arity, std::size_t position, Visit&& visit) {
  const std::uint64_t stride = saturating_pow(size, arity - 1 - position);
  const std::uint64_t block = stride * size;
  const std::uint64_t len = saturating_pow(size, arity);
  if (block == 0) return;
  for (std::uint64_t hi = 0; hi < len; hi += block)
    for (std::uint64_t lo = 0; lo < stride; ++lo) visit(static_cast<std::size_t>(hi + lo), static_cast<std::size_t>(stride));
}

struct CongruenceClosure {
  const FiniteAlgebra& alg;
  UnionFind uf;
  std::vector<std::pair<Elem, Elem>> work;

  explicit CongruenceClosure(const FiniteAlgebra& a) : alg(a), uf(a.size()) {}

  void push(Elem a, Elem b) {
    if (uf.unite(a, b)) work.emplace_back(a, b);
  }

  // One-position translates of every merged pair are merged. The result is
  // the equivalence generated by the processed pairs, which is then
  // compatible with every operation.
  template <class Shortcut>
  void run(Shortcut&& shortcut) {
    const auto& sig = alg.signature();
    while (!work.empty()) {
      auto [u, v] = work.back();
      work.pop_back();
      if (shortcut(u, v)) continue;
      for (std::size_t op = 0; op < sig.size(); ++op) {
        const std::size_t arity = sig[op].arity;
        const auto table = alg.table(op);
        for (std::size_t pos = 0; pos < arity; ++pos)
          for_each_slot(alg.size(), arity, pos, [&](std::size_t base, std::size_t stride) {
            push(table[base + u * stride], table[base + v * stride]);
          });
      }
    }
  }

  void run() {
    run([](Elem, Elem) { return false; });
  }
};

}  // namespace detail

/// Least congruence containing `pairs`.
///
/// Worklist closure: each successful merge (u,v) is translated through every
/// operation at every argument position. At most size-1 merges happen, each
/// costing size^(arity-1) per operation and position.
inline Partition generate_congruence(const FiniteAlgebra& alg, std::span<const std::pair<Elem, Elem>> pairs) {
  detail::CongruenceClosure cc(alg);
  for (auto [a, b] : pairs) {
    if (a >= alg.size() || b >= alg.size())
      fail(ErrorKind::validation_error, "pair entry outside carrier of size " + std::to_string(alg.size()));
    cc.push(a, b);
  }
  cc.run();
  return Partition::from_union_find(cc.uf);
}

/// θ is operation-compatible.
inline bool is_congruence(const FiniteAlgebra& alg, const Partition& theta) {
  if (theta.size() != alg.size()) return false;
  const auto reps = theta.representatives();
  const auto& sig = alg.signature();
  for (std::size_t op = 0; op < sig.size(); ++op) {
    const std::size_t arity = sig[op].arity;
    const auto table = alg.table(op);
    for (std::size_t pos = 0; pos < arity; ++pos) {
      bool ok = true;
      detail::for_each_slot(alg.size(), arity, pos, [&](std::size_t base, std::size_t stride) {
        if (!ok) return;
        for (std::size_t x = 0; x < alg.size(); ++x) {
          const Elem r = reps[theta.block_of(static_cast<Elem>(x))];
          if (!theta.related(table[base + x * stride], table[base + r * stride])) {
            ok = false;
            return;
          }
        }
      });
      if (!ok) return false;
    }
  }
  return true;
}

struct Quotient {
  AlgebraRef algebra;
  Homomorphism projection;
};

/// alg/θ on block ids, with the natural projection.
inline Quotient quotient_algebra(const AlgebraRef& alg, const Partition& theta) {
  if (!is_congruence(*alg, theta)) fail(ErrorKind::not_a_congruence, "partition is not compatible with '" + alg->name() + "'");
  const auto reps = theta.representatives();
  const auto& sig = alg->signature();
  const std::size_t k = theta.num_blocks();
  std::vector<std::vector<Elem>> tables;
  std::vector<Elem> args;
  for (std::size_t op = 0; op < sig.size(); ++op) {
    std::vector<Elem> table;
    table.reserve(saturating_pow(k, sig[op].arity));
    args.resize(sig[op].arity);
    for (TupleCounter c(sig[op].arity, k); !c.done(); c.next()) {
      for (std::size_t i = 0; i < args.size(); ++i) args[i] = reps[c.digits()[i]];
      table.push_back(theta.block_of(alg->apply(op, args)));
    }
    tables.push_back(std::move(table));
  }
  auto q = std::make_shared<const FiniteAlgebra>(sig, k, std::move(tables), alg->name() + "/theta");
  std::vector<Elem> map(theta.encoding().begin(), theta.encoding().end());
  return Quotient{q, Homomorphism{alg, q, std::move(map)}};
}

namespace detail {

// Basic translations x ↦ op(c_0, .., x, .., c_{k-1}) enumerated by a flat
// index: per operation, per argument position, per slot of for_each_slot.
class Translations {
 public:
  explicit Translations(const FiniteAlgebra& alg) : alg_(alg) {
    const auto& sig = alg.signature();
    for (std::size_t op = 0; op < sig.size(); ++op) {
      const std::size_t arity = sig[op].arity;
      for (std::size_t pos = 0; pos < arity; ++pos) {
        const std::size_t stride = saturating_pow(alg.size(), arity - 1 - pos);
        parts_.push_back({op, stride, stride * alg.size(), total_});
        total_ += saturating_pow(alg.size(), arity - 1);
      }
    }
  }

  std::size_t count() const { return total_; }

  // fn(u', v') for every translate, in index order.
  template <class Fn>
  void for_each(Elem u, Elem v, Fn&& fn) const {
    for (const Part& p : parts_) {
      const auto table = alg_.table(p.op);
      const std::size_t len = table.size();
      for (std::size_t hi = 0; hi < len; hi += p.block)
        for (std::size_t lo = 0; lo < p.stride; ++lo) fn(table[hi + lo + u * p.stride], table[hi + lo + v * p.stride]);
    }
  }

  std::size_t num_parts() const { return parts_.size(); }
  std::size_t part_length(std::size_t i) const { return (i + 1 < parts_.size() ? parts_[i + 1].offset : total_) - parts_[i].offset; }

  // Image of the pair (u, v) under slot s of part i.
  std::pair<Elem, Elem> apply(std::size_t i, std::size_t s, Elem u, Elem v) const {
    const Part& p = parts_[i];
    const std::size_t base = (s / p.stride) * p.block + s % p.stride;
    const auto table = alg_.table(p.op);
    return {table[base + u * p.stride], table[base + v * p.stride]};
  }

 private:
  struct Part {
    std::size_t op, stride, block, offset;
  };
  const FiniteAlgebra& alg_;
  std::vector<Part> parts_;
  std::size_t total_ = 0;
};

}  // namespace detail

/// Cg(a,b) for every pair, as an index into a list of distinct partitions.
///
/// Cg(a,b) is the equivalence generated by (a,b) and Cg(t(a),t(b)) over all
/// basic translations t. Pairs in one strongly connected component of the
/// translation graph share Cg, so one Tarjan pass (which emits components
/// after their successors) computes every principal congruence.
struct PrincipalCongruences {
  std::size_t size = 0;
  std::vector<Partition> distinct;
  /// id[a * size + b] for a < b.
  std::vector<std::int32_t> id;

  const Partition& of(Elem a, Elem b) const {
    return distinct[static_cast<std::size_t>(a < b ? id[a * size + b] : id[b * size + a])];
  }
};

inline PrincipalCongruences principal_congruences(const FiniteAlgebra& alg, const Budget& budget = {}) {
  const std::size_t n = alg.size();
  budget.require(saturating_mul(n, n), "principal congruence enumeration");
  const detail::Translations tr(alg);
  PrincipalCongruences out;
  out.size = n;
  out.id.assign(n * n, -1);

  auto node = [n](Elem u, Elem v) { return u < v ? u * n + v : v * n + u; };
  std::vector<std::int32_t> index(n * n, -1), low(n * n, 0);
  std::vector<bool> on_stack(n * n, false);
  std::vector<std::size_t> stack;
  struct Frame {
    std::size_t node, part, slot;
  };
  std::vector<Frame> calls;
  std::int32_t counter = 0;
  std::map<Partition, std::int32_t> known;
  std::vector<std::vector<Elem>> rep_of;
  std::vector<std::uint32_t> stamp;
  std::uint32_t epoch = 0;

  auto finish_component = [&](std::size_t root) {
    std::vector<std::size_t> members;
    std::size_t x;
    do {
      x = stack.back();
      stack.pop_back();
      on_stack[x] = false;
      members.push_back(x);
    } while (x != root);

    ++epoch;
    UnionFind uf(n);
    for (std::size_t m : members) {
      uf.unite(static_cast<Elem>(m / n), static_cast<Elem>(m % n));
      tr.for_each(static_cast<Elem>(m / n), static_cast<Elem>(m % n), [&](Elem u, Elem v) {
        if (u == v) return;
        const std::int32_t id = out.id[node(u, v)];
        if (id < 0 || stamp[static_cast<std::size_t>(id)] == epoch) return;
        stamp[static_cast<std::size_t>(id)] = epoch;
        const auto& reps = rep_of[static_cast<std::size_t>(id)];
        for (Elem e = 0; e < n; ++e)
          if (reps[e] != e) uf.unite(e, reps[e]);
      });
    }
    Partition theta = Partition::from_union_find(uf);
    auto [it, fresh] = known.try_emplace(theta, static_cast<std::int32_t>(out.distinct.size()));
    if (fresh) {
      std::vector<Elem> reps(n);
      const auto least = theta.representatives();
      for (Elem e = 0; e < n; ++e) reps[e] = least[theta.block_of(e)];
      rep_of.push_back(std::move(reps));
      out.distinct.push_back(std::move(theta));
      stamp.push_back(0);
    }
    for (std::size_t m : members) out.id[m] = it->second;
  };

  for (Elem a = 0; a < n; ++a)
    for (Elem b = a + 1; b < n; ++b) {
      const std::size_t start = node(a, b);
      if (index[start] >= 0) continue;
      index[start] = low[start] = counter++;
      stack.push_back(start);
      on_stack[start] = true;
      calls.push_back({start, 0, 0});
      while (!calls.empty()) {
        Frame& f = calls.back();
        if (f.part < tr.num_parts()) {
          const auto [u, v] = tr.apply(f.part, f.slot, static_cast<Elem>(f.node / n), static_cast<Elem>(f.node % n));
          if (++f.slot == tr.part_length(f.part)) {
            ++f.part;
            f.slot = 0;
          }
          if (u == v) continue;
          const std::size_t y = node(u, v);
          if (index[y] < 0) {
            index[y] = low[y] = counter++;
            stack.push_back(y);
            on_stack[y] = true;
            calls.push_back({y, 0, 0});
          } else if (on_stack[y]) {
            low[f.node] = std::min(low[f.node], index[y]);
          }
          continue;
        }
        const std::size_t x = f.node;
        calls.pop_back();
        if (low[x] == index[x]) finish_component(x);
        if (!calls.empty()) low[calls.back().node] = std::min(low[calls.back().node], low[x]);
      }
    }
  return out;
}

/// All congruences, ordered by decreasing block count, then encoding: the
/// identity comes first and the total partition last.
///
/// The lattice is the closure of {Δ} ∪ {principal congruences} under join.
inline std::vector<Partition> congruence_lattice(const FiniteAlgebra& alg, const Budget& budget = {}) {
  const std::size_t n = alg.size();
  const auto principals = principal_congruences(alg, budget).distinct;

  std::set<Partition> lattice;
  std::vector<Partition> frontier{Partition::identity(n)};
  lattice.insert(frontier.front());
  for (const auto& p : principals)
    if (lattice.insert(p).second) frontier.push_back(p);
  while (!frontier.empty()) {
    Partition theta = std::move(frontier.back());
    frontier.pop_back();
    for (const auto& p : principals) {
      Partition j = theta.join(p);
      if (lattice.insert(j).second) {
        budget.require(lattice.size(), "congruence lattice size");
        frontier.push_back(std::move(j));
      }
    }
  }

  std::vector<Partition> out(lattice.begin(), lattice.end());
  std::stable_sort(out.begin(), out.end(), [](const Partition& x, const Partition& y) {
    return x.num_blocks() > y.num_blocks();
  });
  return out;
}

}  // namespace affine
