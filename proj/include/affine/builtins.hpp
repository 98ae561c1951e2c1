#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "affine/algebra.hpp"

namespace affine::builtins {

namespace detail {

inline std::vector<Elem> binary_table(std::size_t n, const std::function<Elem(Elem, Elem)>& f) {
  std::vector<Elem> t;
  for (Elem a = 0; a < n; ++a)
    for (Elem b = 0; b < n; ++b) t.push_back(f(a, b));
  return t;
}

inline std::vector<Elem> unary_table(std::size_t n, const std::function<Elem(Elem)>& f) {
  std::vector<Elem> t;
  for (Elem a = 0; a < n; ++a) t.push_back(f(a));
  return t;
}

inline Signature boolean_signature() {
  return Signature({{"and", 2}, {"or", 2}, {"not", 1}, {"zero", 0}, {"one", 0}});
}

inline Signature group_signature() { return Signature({{"add", 2}, {"neg", 1}, {"zero", 0}}); }

inline AlgebraRef cyclic_group(std::size_t n, std::string name) {
  return std::make_shared<const FiniteAlgebra>(
      group_signature(), n,
      std::vector<std::vector<Elem>>{
          binary_table(n, [n](Elem a, Elem b) { return static_cast<Elem>((a + b) % n); }),
          unary_table(n, [n](Elem a) { return static_cast<Elem>((n - a) % n); }),
          {0}},
      std::move(name));
}

}  // namespace detail

/// Two-element Boolean algebra: and, or, not, zero, one.
inline AlgebraRef bool2() {
  using detail::binary_table;
  return std::make_shared<const FiniteAlgebra>(
      detail::boolean_signature(), 2,
      std::vector<std::vector<Elem>>{binary_table(2, [](Elem a, Elem b) { return a & b; }),
                                     binary_table(2, [](Elem a, Elem b) { return a | b; }),
                                     detail::unary_table(2, [](Elem a) { return 1 - a; }),
                                     {0},
                                     {1}},
      "bool2");
}

/// Two-element bounded distributive lattice: and, or, zero, one.
inline AlgebraRef distlat2() {
  using detail::binary_table;
  return std::make_shared<const FiniteAlgebra>(
      Signature({{"and", 2}, {"or", 2}, {"zero", 0}, {"one", 0}}), 2,
      std::vector<std::vector<Elem>>{binary_table(2, [](Elem a, Elem b) { return a & b; }),
                                     binary_table(2, [](Elem a, Elem b) { return a | b; }),
                                     {0},
                                     {1}},
      "distlat2");
}

/// Two-element meet semilattice (no constants).
inline AlgebraRef semilat2() {
  return std::make_shared<const FiniteAlgebra>(
      Signature({{"meet", 2}}), 2,
      std::vector<std::vector<Elem>>{detail::binary_table(2, [](Elem a, Elem b) { return a & b; })}, "semilat2");
}

/// Z/2 as a group: add, neg, zero.
inline AlgebraRef z2() { return detail::cyclic_group(2, "z2"); }

/// Z/4 as a group: add, neg, zero.
inline AlgebraRef z4() { return detail::cyclic_group(4, "z4"); }

/// The subgroup {0,2} of Z/4, relabelled 0 ↦ 0, 2 ↦ 1.
inline AlgebraRef z2_in_z4() { return detail::cyclic_group(2, "z2-in-z4"); }

inline const std::map<std::string, std::function<AlgebraRef()>>& catalog() {
  static const std::map<std::string, std::function<AlgebraRef()>> table{
      {"bool2", bool2}, {"distlat2", distlat2}, {"semilat2", semilat2},
      {"z2", z2},       {"z4", z4},             {"z2-in-z4", z2_in_z4},
  };
  return table;
}

inline std::vector<std::string> names() {
  std::vector<std::string> out;
  for (const auto& [name, make] : catalog()) out.push_back(name);
  return out;
}

/// Looks up a built-in by name; nullptr if unknown.
inline AlgebraRef find(const std::string& name) {
  auto it = catalog().find(name);
  return it == catalog().end() ? nullptr : it->second();
}

}  // namespace affine::builtins
