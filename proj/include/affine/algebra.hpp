#pragma once

#include <algorithm>
#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "affine/budget.hpp"
#include "affine/error.hpp"
#include "affine/radix.hpp"
#include "affine/signature.hpp"
#include "affine/term.hpp"

namespace affine {

/// A finite algebra on the carrier {0, ..., size-1}: one operation table per
/// signature symbol, indexed by the tuple code of the arguments.
///
/// A zero-element carrier is accepted when the signature has no constants;
/// free algebras on zero generators over such signatures are empty.
class FiniteAlgebra {
 public:
  FiniteAlgebra(Signature signature, std::size_t size, std::vector<std::vector<Elem>> tables,
                std::string name = {})
      : signature_(std::move(signature)), size_(size), tables_(std::move(tables)), name_(std::move(name)) {
    if (tables_.size() != signature_.size())
      fail(ErrorKind::validation_error, "expected " + std::to_string(signature_.size()) +
                                            " operation tables, got " + std::to_string(tables_.size()));
    for (std::size_t op = 0; op < signature_.size(); ++op) {
      const auto& sym = signature_[op];
      const std::uint64_t expected = saturating_pow(size_, sym.arity);
      if (tables_[op].size() != expected)
        fail(ErrorKind::validation_error, "table of '" + sym.name + "' has " +
                                              std::to_string(tables_[op].size()) + " entries, expected " +
                                              std::to_string(expected));
      for (Elem v : tables_[op])
        if (v >= size_)
          fail(ErrorKind::validation_error, "table of '" + sym.name + "' has entry " + std::to_string(v) +
                                                " outside carrier of size " + std::to_string(size_));
    }
  }

  const Signature& signature() const { return signature_; }
  std::size_t size() const { return size_; }
  const std::string& name() const { return name_; }
  std::span<const Elem> table(std::size_t op) const { return tables_[op]; }

  Elem apply(std::size_t op, std::span<const Elem> args) const {
    return tables_[op][encode_tuple(args, size_)];
  }

 private:
  Signature signature_;
  std::size_t size_;
  std::vector<std::vector<Elem>> tables_;
  std::string name_;
};

using AlgebraRef = std::shared_ptr<const FiniteAlgebra>;

inline void require_same_signature(const FiniteAlgebra& a, const FiniteAlgebra& b) {
  if (a.signature() != b.signature())
    fail(ErrorKind::signature_mismatch, "algebras '" + a.name() + "' and '" + b.name() +
                                            "' have different signatures");
}

/// Semi-naive breadth-first closure under the operations of `sig`.
///
/// Each pass applies every operation, in signature order, to every argument
/// tuple (in code order) over the items known at the start of the pass;
/// tuples whose arguments are all older than the previous pass are skipped.
/// `step(op, argument_positions)` computes the result and appends it if new.
/// Items found in pass k have depth k, so first discovery is minimal depth.
template <class SizeFn, class StepFn>
void close_under_operations(const Signature& sig, SizeFn&& size, StepFn&& step, const Budget& budget,
                            const std::string& what) {
  std::size_t fresh_begin = 0;
  bool first = true;
  for (;;) {
    const std::size_t end = size();
    for (std::size_t op = 0; op < sig.size(); ++op) {
      const std::size_t arity = sig[op].arity;
      if (arity == 0) {
        if (first) step(op, std::span<const Elem>{});
        continue;
      }
      budget.require(saturating_pow(end, arity), what);
      for (TupleCounter c(arity, end); !c.done(); c.next()) {
        const auto args = c.digits();
        if (!first && *std::max_element(args.begin(), args.end()) < fresh_begin) continue;
        step(op, args);
      }
    }
    first = false;
    if (size() == end) return;
    fresh_begin = end;
  }
}

/// Tarskian value of `t` under the assignment x_i := env[i].
inline Elem evaluate_term(const FiniteAlgebra& alg, const Term& t, std::span<const Elem> env) {
  if (t.is_variable()) {
    if (t.variable >= env.size())
      fail(ErrorKind::variable_out_of_range, "x" + std::to_string(t.variable) + " in an assignment of length " +
                                                 std::to_string(env.size()));
    return env[t.variable];
  }
  const auto op = alg.signature().find(t.symbol);
  if (!op) fail(ErrorKind::unknown_symbol, "'" + t.symbol + "'");
  if (alg.signature()[*op].arity != t.args.size())
    fail(ErrorKind::arity_mismatch, "'" + t.symbol + "' applied to " + std::to_string(t.args.size()) +
                                        " arguments");
  std::vector<Elem> vals;
  vals.reserve(t.args.size());
  for (const auto& a : t.args) vals.push_back(evaluate_term(alg, a, env));
  return alg.apply(*op, vals);
}

/// Smallest subset containing `seeds` and closed under all operations, in
/// discovery order: seeds ascending, then breadth-first.
inline std::vector<Elem> generate_subuniverse(const FiniteAlgebra& alg, std::span<const Elem> seeds,
                                              const Budget& budget = {}) {
  std::vector<Elem> items(seeds.begin(), seeds.end());
  std::sort(items.begin(), items.end());
  items.erase(std::unique(items.begin(), items.end()), items.end());
  std::vector<bool> seen(alg.size(), false);
  for (Elem x : items) {
    if (x >= alg.size()) fail(ErrorKind::validation_error, "seed " + std::to_string(x) + " outside carrier");
    seen[x] = true;
  }
  std::vector<Elem> args;
  close_under_operations(
      alg.signature(), [&] { return items.size(); },
      [&](std::size_t op, std::span<const Elem> pos) {
        args.resize(pos.size());
        for (std::size_t i = 0; i < pos.size(); ++i) args[i] = items[pos[i]];
        const Elem v = alg.apply(op, args);
        if (!seen[v]) {
          seen[v] = true;
          items.push_back(v);
        }
      },
      budget, "subuniverse generation");
  return items;
}

/// Direct product; elements are coordinate tuples in mixed-radix code order.
/// The empty product is the one-element algebra over `signature`.
inline FiniteAlgebra product_algebra(const Signature& signature, std::span<const AlgebraRef> factors,
                                     const Budget& budget = {}, std::string name = {}) {
  std::vector<std::size_t> radices;
  std::uint64_t size = 1;
  for (const auto& f : factors) {
    if (f->signature() != signature)
      fail(ErrorKind::signature_mismatch, "product factor '" + f->name() + "' has another signature");
    radices.push_back(f->size());
    size = saturating_mul(size, f->size());
  }
  budget.require(size, "product carrier");

  if (name.empty()) {
    for (std::size_t i = 0; i < factors.size(); ++i) name += (i ? "x" : "") + factors[i]->name();
    if (factors.empty()) name = "1";
  }

  std::vector<std::vector<Elem>> tables;
  std::vector<std::vector<Elem>> coords;
  std::vector<Elem> column;
  for (std::size_t op = 0; op < signature.size(); ++op) {
    const std::size_t arity = signature[op].arity;
    const std::uint64_t len = saturating_pow(size, arity);
    budget.require(len, "product table of '" + signature[op].name + "'");
    std::vector<Elem> table(len);
    coords.resize(arity);
    column.resize(arity);
    std::size_t code = 0;
    for (TupleCounter c(arity, size); !c.done(); c.next(), ++code) {
      for (std::size_t i = 0; i < arity; ++i) coords[i] = decode_mixed(c.digits()[i], radices);
      std::vector<Elem> out(factors.size());
      for (std::size_t k = 0; k < factors.size(); ++k) {
        for (std::size_t i = 0; i < arity; ++i) column[i] = coords[i][k];
        out[k] = factors[k]->apply(op, column);
      }
      table[code] = static_cast<Elem>(encode_mixed(out, radices));
    }
    tables.push_back(std::move(table));
  }
  return FiniteAlgebra(signature, size, std::move(tables), std::move(name));
}

/// alg^n with coordinatewise operations.
inline FiniteAlgebra power_algebra(const AlgebraRef& alg, std::size_t n, const Budget& budget = {}) {
  std::vector<AlgebraRef> factors(n, alg);
  return product_algebra(alg->signature(), factors, budget, alg->name() + "^" + std::to_string(n));
}

}  // namespace affine
