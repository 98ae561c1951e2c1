#pragma once

#include <algorithm>
#include <boost/dynamic_bitset.hpp>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "affine/congruence.hpp"
#include "affine/free_clone.hpp"

namespace affine {

/// A set of points of A^n, as a bitset over point codes.
class AffineSubset {
 public:
  AffineSubset() = default;
  AffineSubset(std::size_t arity, std::size_t ground_size)
      : arity_(arity), ground_size_(ground_size), bits_(saturating_pow(ground_size, arity)) {}

  static AffineSubset empty(const GroundInstance& gi) { return {gi.arity(), gi.ground()->size()}; }

  static AffineSubset full(const GroundInstance& gi) {
    AffineSubset s = empty(gi);
    s.bits_.set();
    return s;
  }

  static AffineSubset of(const GroundInstance& gi, std::span<const std::size_t> codes) {
    AffineSubset s = empty(gi);
    for (auto c : codes) s.insert(c);
    return s;
  }

  std::size_t arity() const { return arity_; }
  std::size_t ground_size() const { return ground_size_; }
  /// |A|^n
  std::size_t ambient_size() const { return bits_.size(); }
  std::size_t count() const { return bits_.count(); }
  bool empty() const { return bits_.none(); }
  bool contains(std::size_t code) const { return bits_.test(code); }

  void insert(std::size_t code) {
    if (code >= bits_.size())
      fail(ErrorKind::validation_error, "point code " + std::to_string(code) + " outside A^" + std::to_string(arity_));
    bits_.set(code);
  }

  std::vector<std::size_t> points() const {
    std::vector<std::size_t> out;
    for (auto i = bits_.find_first(); i != boost::dynamic_bitset<>::npos; i = bits_.find_next(i)) out.push_back(i);
    return out;
  }

  bool is_subset_of(const AffineSubset& o) const { return bits_.is_subset_of(o.bits_); }

  AffineSubset operator|(const AffineSubset& o) const {
    AffineSubset s = *this;
    s.bits_ |= o.bits_;
    return s;
  }

  AffineSubset operator&(const AffineSubset& o) const {
    AffineSubset s = *this;
    s.bits_ &= o.bits_;
    return s;
  }

  friend bool operator==(const AffineSubset& a, const AffineSubset& b) {
    return a.arity_ == b.arity_ && a.ground_size_ == b.ground_size_ && a.bits_ == b.bits_;
  }

  /// Smaller sets first, then lexicographic on the sorted point codes.
  friend bool operator<(const AffineSubset& a, const AffineSubset& b) {
    if (a.arity_ != b.arity_) return a.arity_ < b.arity_;
    if (a.count() != b.count()) return a.count() < b.count();
    return a.points() < b.points();
  }

 private:
  std::size_t arity_ = 0;
  std::size_t ground_size_ = 0;
  boost::dynamic_bitset<> bits_;
};

/// A raw set of pairs of elements of F(n). Not required to be a congruence.
struct Relation {
  std::size_t universe = 0;
  std::vector<std::pair<Elem, Elem>> pairs;

  Relation() = default;
  Relation(std::size_t n, std::vector<std::pair<Elem, Elem>> ps) : universe(n), pairs(std::move(ps)) {
    for (auto [a, b] : pairs)
      if (a >= n || b >= n) fail(ErrorKind::validation_error, "relation pair outside F(n) of size " + std::to_string(n));
    std::sort(pairs.begin(), pairs.end());
    pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
  }

  static Relation identity(std::size_t n) {
    std::vector<std::pair<Elem, Elem>> ps;
    for (Elem i = 0; i < n; ++i) ps.emplace_back(i, i);
    return Relation(n, std::move(ps));
  }

  /// Every pair (x, y), x ≠ y, related by θ.
  static Relation of(const Partition& theta) {
    std::vector<std::pair<Elem, Elem>> ps;
    for (const auto& block : theta.blocks())
      for (Elem x : block)
        for (Elem y : block)
          if (x != y) ps.emplace_back(x, y);
    return Relation(theta.size(), std::move(ps));
  }

  bool subset_of(const Relation& o) const { return std::includes(o.pairs.begin(), o.pairs.end(), pairs.begin(), pairs.end()); }

  bool within(const Partition& theta) const {
    return std::all_of(pairs.begin(), pairs.end(), [&](auto p) { return theta.related(p.first, p.second); });
  }

  /// The equivalence relation generated by the pairs.
  Partition closure() const { return Partition::generated_by(universe, pairs); }
};

/// A presentation (F(n), θ) with θ a congruence of F(n).
struct PresentedAlgebra {
  FreeRef free;
  Partition theta;

  static PresentedAlgebra make(FreeRef f, Partition theta) {
    if (!is_congruence(*f->algebra(), theta))
      fail(ErrorKind::not_a_congruence, "θ is not a congruence of " + f->algebra()->name());
    return PresentedAlgebra{std::move(f), std::move(theta)};
  }

  Quotient quotient() const { return quotient_algebra(free->algebra(), theta); }
};

namespace detail {

inline void require_arity(const GroundInstance& gi, const AffineSubset& s) {
  if (s.arity() != gi.arity() || s.ground_size() != gi.ground()->size())
    fail(ErrorKind::shape_mismatch, "subset of A^" + std::to_string(s.arity()) + " used with F(" +
                                        std::to_string(gi.arity()) + ")");
}

}  // namespace detail

/// C(S): pairs of term functions agreeing at every point of S, computed by
/// grouping elements on their full evaluation vector over S. C(∅) is total.
inline Partition c_operator(const GroundInstance& gi, const AffineSubset& s) {
  detail::require_arity(gi, s);
  std::vector<std::vector<Elem>> labels(gi.free().size());
  for (std::size_t a : s.points()) {
    const auto ev = gi.eval(a);
    for (std::size_t p = 0; p < labels.size(); ++p) labels[p].push_back(ev[p]);
  }
  return Partition::from_labels(labels);
}

/// C({a}) = ker(â).
inline Partition point_kernel(const GroundInstance& gi, std::size_t a) { return Partition::from_labels(gi.eval(a)); }

/// V(R): points where every pair of R evaluates equally. V(∅) = A^n.
inline AffineSubset v_operator(const GroundInstance& gi, const Relation& r) {
  if (r.universe != gi.free().size()) fail(ErrorKind::shape_mismatch, "relation is not on this F(n)");
  AffineSubset out = AffineSubset::empty(gi);
  for (std::size_t a = 0; a < gi.num_points(); ++a) {
    const auto ev = gi.eval(a);
    if (std::all_of(r.pairs.begin(), r.pairs.end(), [&](auto p) { return ev[p.first] == ev[p.second]; }))
      out.insert(a);
  }
  return out;
}

/// V(θ) for a partition, without materializing its pairs.
inline AffineSubset v_operator(const GroundInstance& gi, const Partition& theta) {
  if (theta.size() != gi.free().size()) fail(ErrorKind::shape_mismatch, "partition is not on this F(n)");
  const auto reps = theta.representatives();
  AffineSubset out = AffineSubset::empty(gi);
  for (std::size_t a = 0; a < gi.num_points(); ++a) {
    const auto ev = gi.eval(a);
    bool ok = true;
    for (std::size_t p = 0; p < theta.size() && ok; ++p)
      ok = ev[p] == ev[reps[theta.block_of(static_cast<Elem>(p))]];
    if (ok) out.insert(a);
  }
  return out;
}

/// V(C(S)).
inline AffineSubset zariski_closure(const GroundInstance& gi, const AffineSubset& s) {
  return v_operator(gi, c_operator(gi, s));
}

/// ∩_{a ∈ points} C({a}), by successive refinement of the total partition.
inline Partition kernel_meet(const GroundInstance& gi, std::span<const std::size_t> points) {
  Partition out = Partition::total(gi.free().size());
  for (std::size_t a : points) out = out.refine_by(gi.eval(a));
  return out;
}

/// The radical ∩_{a ∈ V(R)} C({a}); total when V(R) is empty.
inline Partition radical(const GroundInstance& gi, const Relation& r) {
  const auto support = v_operator(gi, r).points();
  return kernel_meet(gi, support);
}

inline Partition radical(const GroundInstance& gi, const Partition& theta) {
  const auto support = v_operator(gi, theta).points();
  return kernel_meet(gi, support);
}

/// γ_a : F(n)/C({a}) → A with γ_a ∘ q_a = â.
struct GelfandEvaluation {
  std::size_t point = 0;
  Quotient quotient;
  Homomorphism gamma;
};

inline GelfandEvaluation gelfand_evaluation(const GroundInstance& gi, std::size_t a) {
  const auto ev = gi.eval(a);
  auto q = quotient_algebra(gi.free().algebra(), point_kernel(gi, a));
  const auto theta = kernel(q.projection);
  std::vector<Elem> map(q.algebra->size());
  const auto reps = theta.representatives();
  for (std::size_t c = 0; c < map.size(); ++c) map[c] = ev[reps[c]];
  Homomorphism gamma{q.algebra, gi.ground(), std::move(map)};
  return GelfandEvaluation{a, std::move(q), std::move(gamma)};
}

/// Given an injective homomorphism e : F(n)/θ → A, returns the point
/// a = (e(q_θ(x_i)))_i and checks θ = C({a}) and e = γ_a.
inline std::size_t sgk_inverse(const GroundInstance& gi, const PresentedAlgebra& p, const Homomorphism& e) {
  if (e.map.size() != p.theta.num_blocks())
    fail(ErrorKind::shape_mismatch, "e is not defined on F(n)/θ");
  if (!is_homomorphism(e)) fail(ErrorKind::validation_error, "e is not a homomorphism");
  if (!is_injective(e.map, e.target->size())) fail(ErrorKind::not_injective, "e is not injective");
  std::vector<Elem> coords;
  for (Elem x : gi.free().generators()) coords.push_back(e.map[p.theta.block_of(x)]);
  const std::size_t a = gi.encode(coords);
  if (point_kernel(gi, a) != p.theta) fail(ErrorKind::assertion_failure, "θ differs from C({a})");
  if (gelfand_evaluation(gi, a).gamma.map != e.map) fail(ErrorKind::assertion_failure, "e differs from γ_a");
  return a;
}

/// σ_θ : F(n)/θ → ∏_{a ∈ V(θ)} F(n)/C({a}) and ι_θ : ∏ → A^{V(θ)}.
///
/// Factors follow the point order of V(θ). The maps are always computed as
/// coordinate tuples; the product algebras and the two homomorphisms are
/// materialized only when they fit the budget.
struct BirkhoffTransform {
  std::vector<std::size_t> support;
  std::vector<GelfandEvaluation> factors;
  /// Per class of θ (block id order), its coordinates in the product.
  std::vector<std::vector<Elem>> sigma_coords;

  bool sigma_injective = false;
  bool sigma_onto_each_factor = false;
  bool iota_injective = false;

  AlgebraRef presented;
  std::optional<Homomorphism> sigma;
  std::optional<Homomorphism> iota;

  bool subdirect() const { return sigma_injective && sigma_onto_each_factor; }

  std::vector<AlgebraRef> factor_algebras() const {
    std::vector<AlgebraRef> out;
    for (const auto& f : factors) out.push_back(f.quotient.algebra);
    return out;
  }
};

inline BirkhoffTransform birkhoff_transform(const GroundInstance& gi, const PresentedAlgebra& p, const Budget& budget = {},
                                            bool materialize = true) {
  BirkhoffTransform bt;
  bt.support = v_operator(gi, p.theta).points();
  for (std::size_t a : bt.support) bt.factors.push_back(gelfand_evaluation(gi, a));

  const auto reps = p.theta.representatives();
  bt.sigma_coords.resize(reps.size());
  for (std::size_t c = 0; c < reps.size(); ++c)
    for (const auto& f : bt.factors) bt.sigma_coords[c].push_back(f.quotient.projection(reps[c]));
  // θ ⊆ C({a}) for a ∈ V(θ), so every member of a class lands on the same tuple.
  for (std::size_t x = 0; x < p.theta.size(); ++x)
    for (std::size_t k = 0; k < bt.factors.size(); ++k)
      if (bt.factors[k].quotient.projection(static_cast<Elem>(x)) != bt.sigma_coords[p.theta.block_of(static_cast<Elem>(x))][k])
        fail(ErrorKind::assertion_failure, "σ_θ is not well defined");

  bt.sigma_injective = std::set<std::vector<Elem>>(bt.sigma_coords.begin(), bt.sigma_coords.end()).size() == bt.sigma_coords.size();
  bt.sigma_onto_each_factor = true;
  for (std::size_t k = 0; k < bt.factors.size(); ++k) {
    std::vector<Elem> column;
    for (const auto& row : bt.sigma_coords) column.push_back(row[k]);
    bt.sigma_onto_each_factor = bt.sigma_onto_each_factor && is_surjective(column, bt.factors[k].quotient.algebra->size());
  }
  bt.iota_injective = std::all_of(bt.factors.begin(), bt.factors.end(), [](const GelfandEvaluation& f) {
    return is_injective(f.gamma.map, f.gamma.target->size());
  });

  bt.presented = p.quotient().algebra;
  const auto& sig = gi.free().algebra()->signature();
  const auto algebras = bt.factor_algebras();
  std::uint64_t product_size = 1;
  for (const auto& a : algebras) product_size = saturating_mul(product_size, a->size());
  const std::uint64_t power_size = saturating_pow(gi.ground()->size(), bt.support.size());
  const std::uint64_t widest = saturating_pow(std::max(product_size, power_size), sig.max_arity());
  if (materialize && widest <= budget.limit) {
    auto product = std::make_shared<const FiniteAlgebra>(product_algebra(sig, algebras, budget));
    std::vector<std::size_t> radices;
    for (const auto& a : algebras) radices.push_back(a->size());
    Homomorphism sigma{bt.presented, product, {}};
    for (const auto& row : bt.sigma_coords) sigma.map.push_back(static_cast<Elem>(encode_mixed(row, radices)));
    auto power = std::make_shared<const FiniteAlgebra>(power_algebra(gi.ground(), bt.support.size(), budget));
    Homomorphism iota{product, power, {}};
    for (std::size_t x = 0; x < product->size(); ++x) {
      const auto coords = decode_mixed(x, radices);
      std::vector<Elem> image(coords.size());
      for (std::size_t k = 0; k < coords.size(); ++k) image[k] = bt.factors[k].gamma(coords[k]);
      iota.map.push_back(static_cast<Elem>(encode_tuple(image, gi.ground()->size())));
    }
    bt.sigma = std::move(sigma);
    bt.iota = std::move(iota);
  }
  return bt;
}

/// The three equivalent fixed-point conditions for a congruence θ:
/// (i) C(V(θ)) = θ, (ii) θ is radical, (iii) σ_θ is a subdirect embedding.
struct NullstellensatzVerdict {
  bool fixed = false;
  bool radical_equal = false;
  bool subdirect = false;

  std::vector<std::size_t> support;
  Partition closure;
  Partition radical;
  bool sigma_injective = false;
  bool sigma_onto_each_factor = false;
};

/// Computes the three conditions independently; disagreement raises
/// EquivalenceViolation.
inline NullstellensatzVerdict nullstellensatz_check(const GroundInstance& gi, const PresentedAlgebra& p) {
  NullstellensatzVerdict v;
  const auto support_set = v_operator(gi, p.theta);
  v.support = support_set.points();
  v.closure = c_operator(gi, support_set);
  v.fixed = v.closure == p.theta;

  v.radical = kernel_meet(gi, v.support);
  v.radical_equal = v.radical == p.theta;

  const auto bt = birkhoff_transform(gi, p, {}, false);
  v.sigma_injective = bt.sigma_injective;
  v.sigma_onto_each_factor = bt.sigma_onto_each_factor;
  v.subdirect = bt.subdirect();

  if (v.fixed != v.radical_equal || v.fixed != v.subdirect)
    fail(ErrorKind::equivalence_violation,
         std::string("C(V(θ)) = θ is ") + (v.fixed ? "true" : "false") + ", radical is " +
             (v.radical_equal ? "true" : "false") + ", subdirect is " + (v.subdirect ? "true" : "false"));
  return v;
}

/// Closed sets of the V∘C closure system on A^n.
struct ZariskiReport {
  std::vector<AffineSubset> closed_sets;
  bool has_empty = false;
  bool has_full = false;
  bool union_closed = false;
  bool intersection_closed = false;
  bool is_topology = false;
  bool matches_discrete = false;
  std::string method;
};

/// Every VC(S) for S ⊆ A^n.
inline std::vector<AffineSubset> closed_sets_by_power_set(const GroundInstance& gi, const Budget& budget = {}) {
  const std::size_t n = gi.num_points();
  if (n >= 63) fail(ErrorKind::budget_exceeded, "power set of " + std::to_string(n) + " points");
  budget.require(std::uint64_t{1} << n, "power set scan");
  std::set<AffineSubset> found;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    AffineSubset s = AffineSubset::empty(gi);
    for (std::size_t i = 0; i < n; ++i)
      if (mask >> i & 1u) s.insert(i);
    found.insert(zariski_closure(gi, s));
  }
  return {found.begin(), found.end()};
}

/// Every V(θ) for θ a congruence of F(n). V(R) = V(Cg(R)), so these are all
/// the closed sets.
inline std::vector<AffineSubset> closed_sets_by_congruences(const GroundInstance& gi, const Budget& budget = {}) {
  std::set<AffineSubset> found;
  for (const auto& theta : congruence_lattice(*gi.free().algebra(), budget)) found.insert(v_operator(gi, theta));
  return {found.begin(), found.end()};
}

inline ZariskiReport zariski_report(const GroundInstance& gi, const Budget& budget = {}) {
  ZariskiReport r;
  if (gi.num_points() <= 16) {
    r.method = "power_set";
    r.closed_sets = closed_sets_by_power_set(gi, budget);
  } else {
    r.method = "congruence_lattice";
    r.closed_sets = closed_sets_by_congruences(gi, budget);
  }
  const std::set<AffineSubset> closed(r.closed_sets.begin(), r.closed_sets.end());
  r.has_empty = closed.count(AffineSubset::empty(gi)) > 0;
  r.has_full = closed.count(AffineSubset::full(gi)) > 0;
  r.union_closed = true;
  r.intersection_closed = true;
  for (const auto& x : r.closed_sets)
    for (const auto& y : r.closed_sets) {
      r.union_closed = r.union_closed && closed.count(x | y);
      r.intersection_closed = r.intersection_closed && closed.count(x & y);
    }
  r.is_topology = r.has_empty && r.has_full && r.union_closed && r.intersection_closed;
  const std::uint64_t all_subsets = gi.num_points() < 63 ? std::uint64_t{1} << gi.num_points() : 0;
  r.matches_discrete = r.closed_sets.size() == all_subsets;
  return r;
}

inline ZariskiReport zariski_report(const AlgebraRef& a, const AlgebraRef& g, std::size_t n, const Budget& budget = {}) {
  const auto gi = GroundInstance::build(free_algebra(g, n, budget), a, GroundMode::certify, budget);
  return zariski_report(*gi, budget);
}

}  // namespace affine
