#pragma once

#include <optional>
#include <vector>

#include "affine/builtins.hpp"
#include "affine/galois.hpp"

namespace affine {

/// Finite Stone duality over bool2 at arity n.
struct StoneReport {
  std::size_t arity = 0;
  /// Congruences of F(n) in lattice order, with V(θ) at the same index.
  std::vector<Partition> congruences;
  std::vector<AffineSubset> images;
  /// Closed sets of the V∘C closure system, in canonical order.
  std::vector<AffineSubset> closed_sets;

  bool all_fixed = false;
  bool all_subsets_closed = false;
  /// θ ↦ V(θ) is injective and onto the closed sets.
  bool bijection = false;
  /// C(V(θ)) = θ and V(C(S)) = S.
  bool inverse_ok = false;
  /// θ ⊆ θ' ⇔ V(θ') ⊆ V(θ), over all pairs.
  bool order_reversing = false;
  std::size_t pairs_checked = 0;
};

inline StoneReport stone_demo(std::size_t n, const Budget& budget = {}) {
  StoneReport r;
  r.arity = n;
  const auto gi = GroundInstance::build(free_algebra(builtins::bool2(), n, budget), builtins::bool2(), GroundMode::certify, budget);
  r.congruences = congruence_lattice(*gi->free().algebra(), budget);

  r.all_fixed = true;
  for (const auto& theta : r.congruences) {
    r.all_fixed = r.all_fixed && nullstellensatz_check(*gi, PresentedAlgebra::make(gi->free_ref(), theta)).fixed;
    r.images.push_back(v_operator(*gi, theta));
  }

  r.closed_sets = zariski_report(*gi, budget).closed_sets;
  r.all_subsets_closed = r.closed_sets.size() == (std::uint64_t{1} << gi->num_points());

  const std::set<AffineSubset> image_set(r.images.begin(), r.images.end());
  r.bijection = image_set.size() == r.congruences.size() &&
                image_set == std::set<AffineSubset>(r.closed_sets.begin(), r.closed_sets.end());

  r.inverse_ok = true;
  for (std::size_t i = 0; i < r.congruences.size(); ++i)
    r.inverse_ok = r.inverse_ok && c_operator(*gi, r.images[i]) == r.congruences[i];
  for (const auto& s : r.closed_sets) r.inverse_ok = r.inverse_ok && zariski_closure(*gi, s) == s;

  r.order_reversing = true;
  for (std::size_t i = 0; i < r.congruences.size(); ++i)
    for (std::size_t j = 0; j < r.congruences.size(); ++j) {
      const bool below = r.congruences[i].refines(r.congruences[j]);
      const bool reversed = r.images[j].is_subset_of(r.images[i]);
      r.order_reversing = r.order_reversing && below == reversed;
      ++r.pairs_checked;
    }
  return r;
}

struct ClassifyRow {
  Partition theta;
  bool fixed = false;
  std::vector<std::size_t> support;
  /// Present when θ is not fixed.
  std::optional<Partition> radical;
};

struct ClassifyReport {
  std::vector<ClassifyRow> rows;
  std::size_t fixed_count = 0;
  bool all_fixed() const { return fixed_count == rows.size(); }
};

/// Nullstellensatz verdict for every congruence of F_G(n) relative to A.
inline ClassifyReport classify_fixed(const AlgebraRef& g, const AlgebraRef& a, std::size_t n, const Budget& budget = {}) {
  const auto gi = GroundInstance::build(free_algebra(g, n, budget), a, GroundMode::certify, budget);
  ClassifyReport report;
  for (const auto& theta : congruence_lattice(*gi->free().algebra(), budget)) {
    const auto v = nullstellensatz_check(*gi, PresentedAlgebra::make(gi->free_ref(), theta));
    ClassifyRow row{theta, v.fixed, v.support, std::nullopt};
    if (!v.fixed) row.radical = v.radical;
    report.fixed_count += v.fixed;
    report.rows.push_back(std::move(row));
  }
  return report;
}

}  // namespace affine
