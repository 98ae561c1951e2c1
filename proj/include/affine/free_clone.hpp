#pragma once

#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "affine/algebra.hpp"
#include "affine/homomorphism.hpp"
#include "affine/term.hpp"

namespace affine {

class FreeAlgebra;
inline std::shared_ptr<const FreeAlgebra> free_algebra(const AlgebraRef& g, std::size_t n, const Budget& budget = {});

/// An n-ary term function of the generator algebra G: its value table over
/// G^n (code order) and the first-discovered term defining it.
struct TermFunction {
  std::vector<Elem> values;
  Term witness;
};

/// F(n) for the variety HSP(G), realized as the clone of n-ary term
/// functions of G. Elements appear in breadth-first discovery order
/// starting from the projections.
class FreeAlgebra {
 public:
  const AlgebraRef& generator_algebra() const { return generator_; }
  std::size_t arity() const { return arity_; }
  std::size_t size() const { return elements_.size(); }
  /// |G|^n, the length of every value table.
  std::size_t table_length() const { return table_length_; }

  const TermFunction& element(Elem i) const { return elements_[i]; }
  std::span<const TermFunction> elements() const { return elements_; }

  /// Positions of the projections x0..x{n-1}. May repeat when |G| = 1.
  std::span<const Elem> generators() const { return generators_; }

  /// F(n) as a finite algebra with pointwise operations.
  const AlgebraRef& algebra() const { return algebra_; }

  std::optional<Elem> find(const std::vector<Elem>& values) const {
    auto it = index_.find(values);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  std::string term_string(Elem i) const { return to_string(elements_[i].witness); }

  /// p ∘ (t_0, ..., t_{n-1}) for p in this F(n) and a tuple of elements of
  /// `inner` = F(k): the image of p under the homomorphism F(n) → F(k)
  /// sending generator i to t_i.
  Elem compose(Elem p, const FreeAlgebra& inner, std::span<const Elem> tuple) const {
    const std::size_t g = generator_->size();
    std::vector<Elem> values(inner.table_length());
    for (std::size_t x = 0; x < values.size(); ++x) {
      std::size_t code = 0;
      for (std::size_t i = 0; i < arity_; ++i) code = code * g + inner.element(tuple[i]).values[x];
      values[x] = elements_[p].values[code];
    }
    auto found = inner.find(values);
    if (!found) fail(ErrorKind::assertion_failure, "term composition left the clone");
    return *found;
  }

  friend std::shared_ptr<const FreeAlgebra> free_algebra(const AlgebraRef&, std::size_t, const Budget&);

 private:
  FreeAlgebra() = default;

  AlgebraRef generator_;
  std::size_t arity_ = 0;
  std::size_t table_length_ = 0;
  std::vector<TermFunction> elements_;
  std::vector<Elem> generators_;
  std::map<std::vector<Elem>, Elem> index_;
  AlgebraRef algebra_;
};

using FreeRef = std::shared_ptr<const FreeAlgebra>;

/// Closure of the n projections (and the constants) of G under pointwise
/// operations. Each element keeps a minimal-depth witness term.
inline FreeRef free_algebra(const AlgebraRef& g, std::size_t n, const Budget& budget) {
  std::shared_ptr<FreeAlgebra> f(new FreeAlgebra());
  f->generator_ = g;
  f->arity_ = n;
  const std::uint64_t len = saturating_pow(g->size(), n);
  budget.require(len, "value table of F(" + std::to_string(n) + ")");
  f->table_length_ = static_cast<std::size_t>(len);

  auto add = [&](std::vector<Elem> values, Term witness) -> Elem {
    auto [it, fresh] = f->index_.try_emplace(values, static_cast<Elem>(f->elements_.size()));
    if (fresh) {
      budget.require(f->elements_.size() + 1, "free algebra size");
      f->elements_.push_back(TermFunction{std::move(values), std::move(witness)});
    }
    return it->second;
  };

  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Elem> values(f->table_length_);
    for (std::size_t x = 0; x < values.size(); ++x) values[x] = decode_tuple(x, g->size(), n)[i];
    f->generators_.push_back(add(std::move(values), Term::var(i)));
  }

  const auto& sig = g->signature();
  std::vector<Elem> column;
  close_under_operations(
      sig, [&] { return f->elements_.size(); },
      [&](std::size_t op, std::span<const Elem> pos) {
        std::vector<Elem> values(f->table_length_);
        column.resize(pos.size());
        for (std::size_t x = 0; x < values.size(); ++x) {
          for (std::size_t i = 0; i < pos.size(); ++i) column[i] = f->elements_[pos[i]].values[x];
          values[x] = g->apply(op, column);
        }
        if (f->index_.count(values)) return;
        std::vector<Term> args;
        for (Elem p : pos) args.push_back(f->elements_[p].witness);
        add(std::move(values), Term::apply(sig[op].name, std::move(args)));
      },
      budget, "free algebra closure");

  const std::size_t size = f->elements_.size();
  std::vector<std::vector<Elem>> tables;
  for (std::size_t op = 0; op < sig.size(); ++op) {
    const std::size_t arity = sig[op].arity;
    budget.require(saturating_pow(size, arity), "operation table of F(" + std::to_string(n) + ")");
    std::vector<Elem> table;
    column.resize(arity);
    for (TupleCounter c(arity, size); !c.done(); c.next()) {
      std::vector<Elem> values(f->table_length_);
      for (std::size_t x = 0; x < values.size(); ++x) {
        for (std::size_t i = 0; i < arity; ++i) column[i] = f->elements_[c.digits()[i]].values[x];
        values[x] = g->apply(op, column);
      }
      table.push_back(f->index_.at(values));
    }
    tables.push_back(std::move(table));
  }
  f->algebra_ = std::make_shared<const FiniteAlgebra>(sig, size, std::move(tables),
                                                      "F_" + g->name() + "(" + std::to_string(n) + ")");
  return f;
}

/// Subalgebra of F(n) × B generated by the pairs (x_i, point_i). Returns
/// the map F(n) → B it is the graph of, or nothing if the pair set is not
/// functional (B violates an identity of G visible at arity n).
inline std::optional<std::vector<Elem>> graph_evaluation(const FreeAlgebra& f, const FiniteAlgebra& b,
                                                         std::span<const Elem> point,
                                                         const Budget& budget = {}) {
  require_same_signature(*f.generator_algebra(), b);
  if (point.size() != f.arity())
    fail(ErrorKind::shape_mismatch, "point of length " + std::to_string(point.size()) + " for F(" +
                                        std::to_string(f.arity()) + ")");
  const std::size_t bs = b.size();
  const auto& fa = *f.algebra();
  std::vector<std::pair<Elem, Elem>> items;
  std::vector<bool> seen(f.size() * bs, false);
  std::vector<Elem> value(f.size(), static_cast<Elem>(-1));
  bool functional = true;

  auto add = [&](Elem p, Elem x) {
    if (seen[p * bs + x]) return;
    seen[p * bs + x] = true;
    items.emplace_back(p, x);
    if (value[p] == static_cast<Elem>(-1)) value[p] = x;
    else functional = false;
  };
  for (std::size_t i = 0; i < point.size(); ++i) {
    if (point[i] >= bs) fail(ErrorKind::validation_error, "point coordinate outside carrier");
    add(f.generators()[i], point[i]);
  }

  std::vector<Elem> ps, xs;
  close_under_operations(
      fa.signature(), [&] { return items.size(); },
      [&](std::size_t op, std::span<const Elem> pos) {
        if (!functional) return;
        ps.resize(pos.size());
        xs.resize(pos.size());
        for (std::size_t i = 0; i < pos.size(); ++i) {
          ps[i] = items[pos[i]].first;
          xs[i] = items[pos[i]].second;
        }
        add(fa.apply(op, ps), b.apply(op, xs));
      },
      budget, "graph subalgebra closure");

  if (!functional) return std::nullopt;
  for (Elem v : value)
    if (v == static_cast<Elem>(-1)) fail(ErrorKind::assertion_failure, "graph does not cover F(n)");
  return value;
}

/// Evaluates every witness term in B at `point`. Agrees with
/// graph_evaluation whenever B lies in HSP(G); used for cross-checks and
/// when ground membership is assumed rather than certified.
inline std::vector<Elem> witness_evaluation(const FreeAlgebra& f, const FiniteAlgebra& b, std::span<const Elem> point) {
  std::vector<Elem> out;
  out.reserve(f.size());
  for (const auto& e : f.elements()) out.push_back(evaluate_term(b, e.witness, point));
  return out;
}

/// A satisfies every identity of G in n variables: the graph construction
/// is functional at every point of A^n.
inline bool verify_ground(const FiniteAlgebra& a, const AlgebraRef& g, std::size_t n, const Budget& budget = {}) {
  require_same_signature(a, *g);
  const auto f = free_algebra(g, n, budget);
  const std::uint64_t points = saturating_pow(a.size(), n);
  budget.require(points, "ground points");
  for (std::size_t code = 0; code < points; ++code)
    if (!graph_evaluation(*f, a, decode_tuple(code, a.size(), n), budget)) return false;
  return true;
}

/// â : F(n) → A, p ↦ ev(p, a).
inline Homomorphism point_evaluation_hom(const FreeRef& f, const AlgebraRef& a, std::span<const Elem> point,
                                         const Budget& budget = {}) {
  auto map = graph_evaluation(*f, *a, point, budget);
  if (!map) fail(ErrorKind::not_in_variety, "'" + a->name() + "' fails an identity of '" +
                                                f->generator_algebra()->name() + "' at this point");
  return Homomorphism{f->algebra(), a, std::move(*map)};
}

/// One homomorphism F(m) → B per assignment of generator images, in code
/// order of the assignment.
inline std::vector<Homomorphism> enumerate_homs_free(const FreeRef& f, const AlgebraRef& b, const Budget& budget = {}) {
  const std::uint64_t count = saturating_pow(b->size(), f->arity());
  budget.require(count, "generator assignments");
  std::vector<Homomorphism> out;
  for (std::size_t code = 0; code < count; ++code)
    out.push_back(point_evaluation_hom(f, b, decode_tuple(code, b->size(), f->arity()), budget));
  return out;
}

enum class GroundMode { certify, assume };

/// F_G(n) together with a ground algebra A and the evaluation map â for
/// every point a ∈ A^n.
///
/// In certify mode each â comes from the graph construction; points where
/// it is not functional are recorded and raise NotInVariety on use. In
/// assume mode witnesses are evaluated directly.
class GroundInstance {
 public:
  static std::shared_ptr<const GroundInstance> build(FreeRef f, AlgebraRef a, GroundMode mode = GroundMode::certify,
                                                     const Budget& budget = {}) {
    require_same_signature(*f->generator_algebra(), *a);
    std::shared_ptr<GroundInstance> gi(new GroundInstance());
    gi->free_ = std::move(f);
    gi->ground_ = std::move(a);
    gi->mode_ = mode;
    const std::uint64_t points = saturating_pow(gi->ground_->size(), gi->free_->arity());
    budget.require(points, "ground points");
    budget.require(saturating_mul(points, gi->free_->size()), "evaluation table");
    gi->evals_.resize(points);
    for (std::size_t code = 0; code < points; ++code) {
      const auto pt = gi->point(code);
      if (mode == GroundMode::certify) gi->evals_[code] = graph_evaluation(*gi->free_, *gi->ground_, pt, budget);
      else gi->evals_[code] = witness_evaluation(*gi->free_, *gi->ground_, pt);
      if (!gi->evals_[code]) gi->certified_ = false;
    }
    return gi;
  }

  const FreeAlgebra& free() const { return *free_; }
  const FreeRef& free_ref() const { return free_; }
  const AlgebraRef& ground() const { return ground_; }
  std::size_t arity() const { return free_->arity(); }
  std::size_t num_points() const { return evals_.size(); }
  GroundMode mode() const { return mode_; }

  /// Every point of A^n has a functional evaluation.
  bool certified() const { return certified_ && mode_ == GroundMode::certify; }
  bool defined_at(std::size_t code) const { return evals_[code].has_value(); }

  std::span<const Elem> eval(std::size_t code) const {
    if (!evals_[code])
      fail(ErrorKind::not_in_variety, "evaluation at point " + point_string(code) + " is not well defined");
    return *evals_[code];
  }

  std::vector<Elem> point(std::size_t code) const { return decode_tuple(code, ground_->size(), arity()); }
  std::size_t encode(std::span<const Elem> pt) const { return encode_tuple(pt, ground_->size()); }

  std::string point_string(std::size_t code) const {
    const auto pt = point(code);
    std::string s = "(";
    for (std::size_t i = 0; i < pt.size(); ++i) s += (i ? "," : "") + std::to_string(pt[i]);
    return s + ")";
  }

 private:
  GroundInstance() = default;

  FreeRef free_;
  AlgebraRef ground_;
  GroundMode mode_ = GroundMode::certify;
  bool certified_ = true;
  std::vector<std::optional<std::vector<Elem>>> evals_;
};

using GroundRef = std::shared_ptr<const GroundInstance>;

}  // namespace affine
