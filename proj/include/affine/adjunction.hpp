#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <random>
#include <set>
#include <vector>

#include "affine/galois.hpp"

namespace affine {

// Orientation. Both categories store an arrow as an m-tuple of elements of
// F(n):
//   D^q: S' ⊆ A^n → S ⊆ A^m, the definable map a ↦ (f_1(a), .., f_m(a));
//   R^q: (F(n), R') → (F(m), R), the homomorphism F(m) → F(n) sending x_j
//        to f_j, which must carry R into the equivalence generated by R'.
// With this bookkeeping C^q and V^q are covariant on stored data and the
// adjunction reads hom_R(C^q S, y) ≅ hom_D(S, V^q y). Composition of
// f : n → m with g : m → k is the tuple (g_j ∘ f)_j in both categories.

/// Shared generator, ground and per-arity ground instances.
class AdjunctionContext {
 public:
  AdjunctionContext(AlgebraRef g, AlgebraRef a, GroundMode mode = GroundMode::certify, Budget budget = {})
      : generator_(std::move(g)), ground_(std::move(a)), mode_(mode), budget_(budget) {
    require_same_signature(*generator_, *ground_);
  }

  const AlgebraRef& generator() const { return generator_; }
  const AlgebraRef& ground() const { return ground_; }
  const Budget& budget() const { return budget_; }

  const GroundInstance& at(std::size_t n) const {
    auto it = cache_.find(n);
    if (it == cache_.end())
      it = cache_.emplace(n, GroundInstance::build(free_algebra(generator_, n, budget_), ground_, mode_, budget_)).first;
    return *it->second;
  }

  const FreeRef& free(std::size_t n) const { return at(n).free_ref(); }

 private:
  AlgebraRef generator_;
  AlgebraRef ground_;
  GroundMode mode_;
  Budget budget_;
  mutable std::map<std::size_t, GroundRef> cache_;
};

/// An R^q object (F(n), R) with R̄, the equivalence generated by R.
struct RObject {
  FreeRef free;
  Relation relation;
  Partition closure;

  static RObject make(FreeRef f, Relation r) {
    if (r.universe != f->size()) fail(ErrorKind::shape_mismatch, "relation is not on F(" + std::to_string(f->arity()) + ")");
    Partition closure = r.closure();
    return RObject{std::move(f), std::move(r), std::move(closure)};
  }

  static RObject make(FreeRef f, const Partition& theta) { return make(std::move(f), Relation::of(theta)); }

  std::size_t arity() const { return free->arity(); }

  friend bool operator==(const RObject& x, const RObject& y) {
    return x.free == y.free && x.relation.pairs == y.relation.pairs;
  }
};

/// (F(1), Δ).
inline RObject distinguished_object(const AdjunctionContext& ctx) {
  return RObject::make(ctx.free(1), Relation::identity(ctx.free(1)->size()));
}

struct DArrowClass {
  AffineSubset source;
  AffineSubset target;
  /// Image code in A^m of each source point, in source point order.
  std::vector<std::size_t> graph;
  std::vector<Elem> witness;

  friend bool operator==(const DArrowClass& x, const DArrowClass& y) {
    return x.source == y.source && x.target == y.target && x.graph == y.graph;
  }
};

struct RArrowClass {
  RObject source;
  RObject target;
  /// For each class of the target's R̄ (block order), the class of the
  /// source's R̄ it is sent to.
  std::vector<Elem> factorized;
  std::vector<Elem> witness;

  friend bool operator==(const RArrowClass& x, const RArrowClass& y) {
    return x.source == y.source && x.target == y.target && x.factorized == y.factorized;
  }
};

namespace detail {

inline std::vector<std::size_t> restriction_graph(const GroundInstance& gi, const AffineSubset& source,
                                                  std::span<const Elem> tuple) {
  std::vector<std::size_t> graph;
  std::vector<Elem> image(tuple.size());
  for (std::size_t a : source.points()) {
    const auto ev = gi.eval(a);
    for (std::size_t j = 0; j < tuple.size(); ++j) image[j] = ev[tuple[j]];
    graph.push_back(encode_tuple(image, gi.ground()->size()));
  }
  return graph;
}

inline bool graph_lands_in(const std::vector<std::size_t>& graph, const AffineSubset& target) {
  return std::all_of(graph.begin(), graph.end(), [&](std::size_t b) { return target.contains(b); });
}

// The homomorphism F(m) → F(n) with generator images `tuple`, on all of F(m).
inline std::vector<Elem> induced_hom(const FreeAlgebra& fm, const FreeAlgebra& fn, std::span<const Elem> tuple) {
  return witness_evaluation(fm, *fn.algebra(), tuple);
}

inline bool preserves(const RObject& x, const RObject& y, const std::vector<Elem>& h) {
  return std::all_of(y.relation.pairs.begin(), y.relation.pairs.end(),
                     [&](auto p) { return x.closure.related(h[p.first], h[p.second]); });
}

inline std::vector<Elem> factorize(const RObject& x, const RObject& y, const std::vector<Elem>& h) {
  const auto reps = y.closure.representatives();
  std::vector<Elem> out(reps.size());
  for (std::size_t c = 0; c < reps.size(); ++c) out[c] = x.closure.block_of(h[reps[c]]);
  return out;
}

inline void require_tuple(std::size_t arity, std::size_t free_size, std::span<const Elem> tuple) {
  if (tuple.size() != arity)
    fail(ErrorKind::shape_mismatch, "arrow needs " + std::to_string(arity) + " components, got " + std::to_string(tuple.size()));
  for (Elem e : tuple)
    if (e >= free_size) fail(ErrorKind::validation_error, "arrow component outside the free algebra");
}

template <class Visit>
void for_each_tuple(std::size_t length, std::size_t radix, const Budget& budget, const std::string& what, Visit&& visit) {
  budget.require(saturating_pow(radix, length), what);
  std::vector<Elem> tuple(length);
  for (TupleCounter c(length, radix); !c.done(); c.next()) {
    for (std::size_t i = 0; i < length; ++i) tuple[i] = static_cast<Elem>(c.digits()[i]);
    visit(std::span<const Elem>(tuple));
  }
}

}  // namespace detail

/// The D^q class of `tuple` as an arrow source → target; throws
/// ValidationError if the induced map leaves the target.
inline DArrowClass d_arrow(const AdjunctionContext& ctx, const AffineSubset& source, const AffineSubset& target,
                           std::span<const Elem> tuple) {
  const auto& gi = ctx.at(source.arity());
  detail::require_tuple(target.arity(), gi.free().size(), tuple);
  auto graph = detail::restriction_graph(gi, source, tuple);
  if (!detail::graph_lands_in(graph, target)) fail(ErrorKind::validation_error, "definable map leaves the target set");
  return DArrowClass{source, target, std::move(graph), {tuple.begin(), tuple.end()}};
}

/// The R^q class of `tuple` as an arrow x → y; throws ValidationError if
/// the homomorphism does not carry y's relation into x's R̄.
inline RArrowClass r_arrow(const AdjunctionContext&, const RObject& x, const RObject& y, std::span<const Elem> tuple) {
  detail::require_tuple(y.arity(), x.free->size(), tuple);
  const auto h = detail::induced_hom(*y.free, *x.free, tuple);
  if (!detail::preserves(x, y, h)) fail(ErrorKind::validation_error, "homomorphism does not preserve the relation");
  return RArrowClass{x, y, detail::factorize(x, y, h), {tuple.begin(), tuple.end()}};
}

/// hom_D(S', S): one class per restriction graph, sorted by graph.
inline std::vector<DArrowClass> hom_set_dq(const AdjunctionContext& ctx, const AffineSubset& source,
                                           const AffineSubset& target) {
  const auto& gi = ctx.at(source.arity());
  std::map<std::vector<std::size_t>, std::vector<Elem>> classes;
  detail::for_each_tuple(target.arity(), gi.free().size(), ctx.budget(), "D-arrow enumeration", [&](auto tuple) {
    auto graph = detail::restriction_graph(gi, source, tuple);
    if (detail::graph_lands_in(graph, target)) classes.try_emplace(std::move(graph), tuple.begin(), tuple.end());
  });
  std::vector<DArrowClass> out;
  for (auto& [graph, witness] : classes) out.push_back(DArrowClass{source, target, graph, witness});
  return out;
}

/// hom_R(x, y): one class per factorized map, sorted by that map.
inline std::vector<RArrowClass> hom_set_rq(const AdjunctionContext& ctx, const RObject& x, const RObject& y) {
  std::map<std::vector<Elem>, std::vector<Elem>> classes;
  detail::for_each_tuple(y.arity(), x.free->size(), ctx.budget(), "R-arrow enumeration", [&](auto tuple) {
    const auto h = detail::induced_hom(*y.free, *x.free, tuple);
    if (detail::preserves(x, y, h)) classes.try_emplace(detail::factorize(x, y, h), tuple.begin(), tuple.end());
  });
  std::vector<RArrowClass> out;
  for (auto& [map, witness] : classes) out.push_back(RArrowClass{x, y, map, witness});
  return out;
}

inline DArrowClass d_identity(const AdjunctionContext& ctx, const AffineSubset& s) {
  const auto gens = ctx.free(s.arity())->generators();
  return d_arrow(ctx, s, s, gens);
}

inline RArrowClass r_identity(const AdjunctionContext& ctx, const RObject& x) {
  return r_arrow(ctx, x, x, x.free->generators());
}

namespace detail {

// (g_j ∘ f)_j for f ∈ F(n)^m and g ∈ F(m)^k.
inline std::vector<Elem> compose_tuples(const FreeAlgebra& fm, std::span<const Elem> g, const FreeAlgebra& fn,
                                        std::span<const Elem> f) {
  std::vector<Elem> out;
  for (Elem gj : g) out.push_back(fm.compose(gj, fn, f));
  return out;
}

}  // namespace detail

/// second ∘ first, composing restriction graphs.
inline DArrowClass compose(const AdjunctionContext& ctx, const DArrowClass& second, const DArrowClass& first) {
  if (!(first.target == second.source)) fail(ErrorKind::shape_mismatch, "D-arrows do not compose");
  const auto mid = first.target.points();
  std::vector<std::size_t> graph;
  for (std::size_t b : first.graph) {
    const auto at = std::lower_bound(mid.begin(), mid.end(), b) - mid.begin();
    graph.push_back(second.graph[static_cast<std::size_t>(at)]);
  }
  auto witness = detail::compose_tuples(*ctx.free(second.source.arity()), second.witness, *ctx.free(first.source.arity()),
                                        first.witness);
  return DArrowClass{first.source, second.target, std::move(graph), std::move(witness)};
}

/// second ∘ first, composing factorized maps.
inline RArrowClass compose(const AdjunctionContext&, const RArrowClass& second, const RArrowClass& first) {
  if (!(first.target == second.source)) fail(ErrorKind::shape_mismatch, "R-arrows do not compose");
  std::vector<Elem> map;
  for (Elem c : second.factorized) map.push_back(first.factorized[c]);
  auto witness = detail::compose_tuples(*second.source.free, second.witness, *first.source.free, first.witness);
  return RArrowClass{first.source, second.target, std::move(map), std::move(witness)};
}

/// C^q on objects: S ↦ (F(n), C(S)).
inline RObject cq_functor(const AdjunctionContext& ctx, const AffineSubset& s) {
  const auto& gi = ctx.at(s.arity());
  return RObject::make(gi.free_ref(), c_operator(gi, s));
}

/// C^q on arrows: the class of the same witness, C^q S' → C^q S.
inline RArrowClass cq_functor(const AdjunctionContext& ctx, const DArrowClass& d) {
  return r_arrow(ctx, cq_functor(ctx, d.source), cq_functor(ctx, d.target), d.witness);
}

/// V^q on objects: (F(m), R) ↦ V(R) ⊆ A^m.
inline AffineSubset vq_functor(const AdjunctionContext& ctx, const RObject& y) {
  return v_operator(ctx.at(y.arity()), y.relation);
}

/// V^q on arrows: the induced definable map V(R') → V(R).
inline DArrowClass vq_functor(const AdjunctionContext& ctx, const RArrowClass& r) {
  return d_arrow(ctx, vq_functor(ctx, r.source), vq_functor(ctx, r.target), r.witness);
}

struct AdjunctionVerdict {
  std::size_t lhs = 0;
  std::size_t rhs = 0;
  bool bijection_ok = false;
  bool natural_ok = false;
  std::size_t squares_checked = 0;
  bool unit_ok = false;
  bool counit_ok = false;
};

namespace detail {

inline std::vector<std::pair<std::size_t, std::size_t>> sample_pairs(std::size_t a, std::size_t b, std::mt19937& rng) {
  constexpr std::size_t cap = 64;
  std::vector<std::pair<std::size_t, std::size_t>> out;
  if (a * b <= cap) {
    for (std::size_t i = 0; i < a; ++i)
      for (std::size_t j = 0; j < b; ++j) out.emplace_back(i, j);
    return out;
  }
  std::uniform_int_distribution<std::size_t> pa(0, a - 1), pb(0, b - 1);
  for (std::size_t k = 0; k < cap; ++k) out.emplace_back(pa(rng), pb(rng));
  return out;
}

}  // namespace detail

/// Checks hom_R(C^q S, y) ≅ hom_D(S, V^q y) through the explicit
/// correspondence (an R-arrow and a D-arrow with the same witness tuple),
/// naturality on sampled squares, and the unit and counit inclusions.
/// A failing correspondence raises BijectionFailure.
inline AdjunctionVerdict verify_adjunction(const AdjunctionContext& ctx, const AffineSubset& s, const RObject& y,
                                           std::uint32_t seed = 1) {
  AdjunctionVerdict v;
  const RObject cs = cq_functor(ctx, s);
  const AffineSubset vy = vq_functor(ctx, y);
  const auto lhs = hom_set_rq(ctx, cs, y);
  const auto rhs = hom_set_dq(ctx, s, vy);
  v.lhs = lhs.size();
  v.rhs = rhs.size();

  const auto& gi = ctx.at(s.arity());
  std::map<std::vector<Elem>, std::vector<std::size_t>> forward;
  std::map<std::vector<std::size_t>, std::vector<Elem>> backward;
  detail::for_each_tuple(y.arity(), gi.free().size(), ctx.budget(), "adjunction correspondence", [&](auto tuple) {
    const auto h = detail::induced_hom(*y.free, *cs.free, tuple);
    const bool r_ok = detail::preserves(cs, y, h);
    auto graph = detail::restriction_graph(gi, s, tuple);
    const bool d_ok = detail::graph_lands_in(graph, vy);
    if (r_ok != d_ok) fail(ErrorKind::bijection_failure, "a tuple is an arrow on one side only");
    if (!r_ok) return;
    auto key = detail::factorize(cs, y, h);
    auto [f, fresh_f] = forward.try_emplace(key, graph);
    auto [b, fresh_b] = backward.try_emplace(graph, key);
    if (f->second != graph || b->second != key) fail(ErrorKind::bijection_failure, "correspondence is not one-to-one");
  });
  if (forward.size() != lhs.size() || backward.size() != rhs.size())
    fail(ErrorKind::bijection_failure, "correspondence misses arrows");
  for (const auto& r : lhs)
    if (!forward.count(r.factorized)) fail(ErrorKind::bijection_failure, "R-arrow outside the correspondence");
  for (const auto& d : rhs)
    if (!backward.count(d.graph)) fail(ErrorKind::bijection_failure, "D-arrow outside the correspondence");
  v.bijection_ok = true;

  auto phi = [&](const RArrowClass& r) { return d_arrow(ctx, s, vq_functor(ctx, r.target), r.witness); };
  std::mt19937 rng(seed);
  v.natural_ok = true;

  // Squares in the D^q variable: d : S0 → S, r : C^q S → y.
  std::vector<AffineSubset> sources{s};
  for (std::size_t a : s.points()) {
    const std::vector<std::size_t> one{a};
    sources.push_back(AffineSubset::of(gi, one));
  }
  for (const auto& s0 : sources) {
    const auto ds = hom_set_dq(ctx, s0, s);
    for (auto [i, j] : detail::sample_pairs(ds.size(), lhs.size(), rng)) {
      const auto& d = ds[i];
      const auto& r = lhs[j];
      const auto transported = compose(ctx, r, cq_functor(ctx, d));
      const auto path1 = d_arrow(ctx, s0, vy, transported.witness);
      const auto path2 = compose(ctx, phi(r), d);
      v.natural_ok = v.natural_ok && path1 == path2;
      ++v.squares_checked;
    }
  }

  // Squares in the R^q variable: g : y → y2, r : C^q S → y.
  const auto fm = y.free;
  std::vector<RObject> targets{y, RObject::make(fm, Partition::total(fm->size()))};
  if (ctx.free(1)->size() > 0) targets.push_back(distinguished_object(ctx));
  for (const auto& y2 : targets) {
    const auto gs = hom_set_rq(ctx, y, y2);
    for (auto [i, j] : detail::sample_pairs(gs.size(), lhs.size(), rng)) {
      const auto& g = gs[i];
      const auto& r = lhs[j];
      const auto path1 = d_arrow(ctx, s, vq_functor(ctx, y2), compose(ctx, g, r).witness);
      const auto path2 = compose(ctx, vq_functor(ctx, g), phi(r));
      v.natural_ok = v.natural_ok && path1 == path2;
      ++v.squares_checked;
    }
  }

  // Counit S ⊆ V C S and unit R ⊆ C V R as identity-witness arrows.
  const auto& gy = ctx.at(y.arity());
  try {
    const auto counit = d_arrow(ctx, s, v_operator(gi, cs.closure), gi.free().generators());
    v.counit_ok = counit.graph == s.points();
  } catch (const Error&) {
    v.counit_ok = false;
  }
  try {
    const auto cvy = RObject::make(y.free, c_operator(gy, vy));
    r_arrow(ctx, cvy, y, gy.free().generators());
    v.unit_ok = true;
  } catch (const Error&) {
    v.unit_ok = false;
  }
  return v;
}

struct RepresentabilityVerdict {
  std::size_t hom_count = 0;
  std::size_t quotient_size = 0;
  bool stable = false;
  bool match = false;
};

/// R̄ is closed under post-composition with unary clone elements.
inline bool is_delta_stable(const AdjunctionContext& ctx, const RObject& x) {
  const auto& f1 = *ctx.free(1);
  for (Elem u = 0; u < f1.size(); ++u)
    for (auto [p, q] : x.relation.pairs) {
      const std::vector<Elem> at_p{p}, at_q{q};
      if (!x.closure.related(f1.compose(u, *x.free, at_p), f1.compose(u, *x.free, at_q))) return false;
    }
  return true;
}

/// |hom_R(x, (F(1), Δ))| against |F(n)/R̄|, with the explicit bijection
/// [p] ↦ class of the arrow sending x0 to p. Stability is checked unless
/// `assume_stable` is set; an unstable relation raises NotStable.
inline RepresentabilityVerdict representability_check(const AdjunctionContext& ctx, const RObject& x,
                                                      bool assume_stable = false) {
  RepresentabilityVerdict v;
  v.stable = assume_stable || is_delta_stable(ctx, x);
  if (!v.stable) fail(ErrorKind::not_stable, "relation is not closed under unary term operations");
  const auto delta = distinguished_object(ctx);
  const auto homs = hom_set_rq(ctx, x, delta);
  v.hom_count = homs.size();
  v.quotient_size = x.closure.num_blocks();
  std::set<Elem> hit;
  for (const auto& h : homs) hit.insert(x.closure.block_of(h.witness[0]));
  std::map<Elem, std::vector<Elem>> by_class;
  for (Elem p = 0; p < x.free->size(); ++p) {
    const std::vector<Elem> t{p};
    by_class.try_emplace(x.closure.block_of(p), r_arrow(ctx, x, delta, t).factorized);
  }
  std::set<std::vector<Elem>> images;
  for (auto& [c, m] : by_class) images.insert(m);
  v.match = v.hom_count == v.quotient_size && hit.size() == v.quotient_size && images.size() == v.quotient_size;
  return v;
}

struct FullEmbeddingVerdict {
  std::size_t hom_count = 0;
  std::size_t class_count = 0;
  bool bijection = false;
};

/// Homomorphisms F(m)/θ → F(n)/θ' between presented algebras against
/// hom_R((F(n), θ'), (F(m), θ)).
inline FullEmbeddingVerdict full_embedding_check(const AdjunctionContext& ctx, const PresentedAlgebra& source,
                                                 const PresentedAlgebra& target) {
  const RObject x = RObject::make(target.free, target.theta);
  const RObject y = RObject::make(source.free, source.theta);
  const auto qx = target.quotient();
  const auto qy = source.quotient();
  const auto xreps = target.theta.representatives();

  std::set<std::vector<Elem>> homs;
  detail::for_each_tuple(y.arity(), target.theta.num_blocks(), ctx.budget(), "presented hom enumeration", [&](auto classes) {
    std::vector<Elem> lift;
    for (Elem c : classes) lift.push_back(xreps[c]);
    const auto h = detail::induced_hom(*y.free, *x.free, lift);
    std::vector<Elem> map(source.theta.num_blocks());
    std::vector<bool> set(map.size(), false);
    for (Elem p = 0; p < h.size(); ++p) {
      const Elem from = source.theta.block_of(p);
      const Elem to = target.theta.block_of(h[p]);
      if (set[from] && map[from] != to) return;
      map[from] = to;
      set[from] = true;
    }
    if (is_homomorphism(Homomorphism{qy.algebra, qx.algebra, map})) homs.insert(map);
  });

  const auto classes = hom_set_rq(ctx, x, y);
  std::set<std::vector<Elem>> maps;
  for (const auto& r : classes) maps.insert(r.factorized);
  FullEmbeddingVerdict v;
  v.hom_count = homs.size();
  v.class_count = classes.size();
  v.bijection = homs == maps;
  return v;
}

/// Distinct D-arrows S' → S ⊆ A^m differ after some coordinate projection.
inline bool coseparator_check(const AdjunctionContext& ctx, const AffineSubset& source, const AffineSubset& target) {
  const auto arrows = hom_set_dq(ctx, source, target);
  const std::size_t k = ctx.ground()->size();
  auto coordinate = [&](const DArrowClass& d, std::size_t j) {
    std::vector<std::size_t> out;
    for (std::size_t b : d.graph) out.push_back(decode_tuple(b, k, target.arity())[j]);
    return out;
  };
  for (std::size_t i = 0; i < arrows.size(); ++i)
    for (std::size_t l = i + 1; l < arrows.size(); ++l) {
      bool separated = false;
      for (std::size_t j = 0; j < target.arity() && !separated; ++j)
        separated = coordinate(arrows[i], j) != coordinate(arrows[l], j);
      if (!separated) return false;
    }
  return true;
}

}  // namespace affine
