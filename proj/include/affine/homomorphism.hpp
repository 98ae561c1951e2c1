#pragma once

#include <span>
#include <vector>

#include "affine/algebra.hpp"
#include "affine/partition.hpp"

namespace affine {

/// A total carrier map between two algebras of the same signature.
struct Homomorphism {
  AlgebraRef source;
  AlgebraRef target;
  std::vector<Elem> map;

  Elem operator()(Elem x) const { return map[x]; }
};

/// True iff `h` commutes with every operation at every argument tuple.
inline bool is_homomorphism(const Homomorphism& h) {
  require_same_signature(*h.source, *h.target);
  if (h.map.size() != h.source->size())
    fail(ErrorKind::shape_mismatch, "map has " + std::to_string(h.map.size()) + " entries for a source of size " +
                                        std::to_string(h.source->size()));
  for (Elem v : h.map)
    if (v >= h.target->size()) return false;
  const auto& sig = h.source->signature();
  std::vector<Elem> image;
  for (std::size_t op = 0; op < sig.size(); ++op) {
    image.resize(sig[op].arity);
    for (TupleCounter c(sig[op].arity, h.source->size()); !c.done(); c.next()) {
      for (std::size_t i = 0; i < image.size(); ++i) image[i] = h.map[c.digits()[i]];
      if (h.map[h.source->apply(op, c.digits())] != h.target->apply(op, image)) return false;
    }
  }
  return true;
}

inline bool is_injective(std::span<const Elem> map, std::size_t codomain) {
  std::vector<bool> hit(codomain, false);
  for (Elem v : map) {
    if (hit[v]) return false;
    hit[v] = true;
  }
  return true;
}

inline bool is_surjective(std::span<const Elem> map, std::size_t codomain) {
  std::vector<bool> hit(codomain, false);
  std::size_t count = 0;
  for (Elem v : map)
    if (!hit[v]) {
      hit[v] = true;
      ++count;
    }
  return count == codomain;
}

inline Partition kernel(const Homomorphism& h) { return Partition::from_labels(h.map); }

/// g ∘ f
inline Homomorphism compose(const Homomorphism& g, const Homomorphism& f) {
  Homomorphism out{f.source, g.target, std::vector<Elem>(f.map.size())};
  for (std::size_t i = 0; i < f.map.size(); ++i) out.map[i] = g.map[f.map[i]];
  return out;
}

struct SubdirectVerdict {
  bool injective = false;
  bool onto_each_factor = false;

  bool subdirect() const { return injective && onto_each_factor; }
};

/// `h` maps into the direct product of `factors` (mixed-radix encoding).
inline SubdirectVerdict is_subdirect_embedding(const Homomorphism& h, std::span<const AlgebraRef> factors) {
  std::vector<std::size_t> radices;
  std::uint64_t product = 1;
  for (const auto& f : factors) {
    radices.push_back(f->size());
    product = saturating_mul(product, f->size());
  }
  if (product != h.target->size())
    fail(ErrorKind::shape_mismatch, "target has " + std::to_string(h.target->size()) +
                                        " elements, product of factors has " + std::to_string(product));
  SubdirectVerdict v;
  v.injective = is_injective(h.map, h.target->size());
  std::vector<std::vector<bool>> hit(factors.size());
  for (std::size_t k = 0; k < factors.size(); ++k) hit[k].assign(factors[k]->size(), false);
  for (Elem y : h.map) {
    const auto coords = decode_mixed(y, radices);
    for (std::size_t k = 0; k < factors.size(); ++k) hit[k][coords[k]] = true;
  }
  v.onto_each_factor = true;
  for (const auto& row : hit)
    for (bool b : row) v.onto_each_factor = v.onto_each_factor && b;
  return v;
}

}  // namespace affine
