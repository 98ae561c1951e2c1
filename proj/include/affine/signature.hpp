#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "affine/error.hpp"

namespace affine {

struct Symbol {
  std::string name;
  std::size_t arity = 0;

  friend bool operator==(const Symbol&, const Symbol&) = default;
};

/// Ordered operation symbols. The order is canonical: it drives every
/// breadth-first discovery order in the library.
class Signature {
 public:
  Signature() = default;

  explicit Signature(std::vector<Symbol> symbols) : symbols_(std::move(symbols)) {
    std::unordered_set<std::string> seen;
    for (const auto& s : symbols_) {
      if (s.name.empty()) fail(ErrorKind::validation_error, "empty symbol name");
      if (!seen.insert(s.name).second)
        fail(ErrorKind::validation_error, "duplicate symbol '" + s.name + "'");
    }
  }

  std::size_t size() const { return symbols_.size(); }
  const Symbol& operator[](std::size_t i) const { return symbols_[i]; }
  auto begin() const { return symbols_.begin(); }
  auto end() const { return symbols_.end(); }

  std::optional<std::size_t> find(const std::string& name) const {
    for (std::size_t i = 0; i < symbols_.size(); ++i)
      if (symbols_[i].name == name) return i;
    return std::nullopt;
  }

  std::size_t max_arity() const {
    std::size_t m = 0;
    for (const auto& s : symbols_) m = std::max(m, s.arity);
    return m;
  }

  bool has_constants() const {
    for (const auto& s : symbols_)
      if (s.arity == 0) return true;
    return false;
  }

  friend bool operator==(const Signature&, const Signature&) = default;

 private:
  std::vector<Symbol> symbols_;
};

}  // namespace affine
