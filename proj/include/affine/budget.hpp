#pragma once

#include <cstdint>
#include <limits>
#include <string>

#include "affine/error.hpp"

namespace affine {

/// Guard for exponential loops. Exceeding the limit is an error, never a
/// silent truncation.
struct Budget {
  static constexpr std::uint64_t default_limit = 1'000'000;

  std::uint64_t limit = default_limit;

  void require(std::uint64_t count, const std::string& what) const {
    if (count > limit) {
      fail(ErrorKind::budget_exceeded, what + " needs " +
                                           (count == std::numeric_limits<std::uint64_t>::max()
                                                ? std::string("more than 2^64")
                                                : std::to_string(count)) +
                                           " steps, budget is " + std::to_string(limit));
    }
  }
};

/// base^exp, saturating at UINT64_MAX.
inline std::uint64_t saturating_pow(std::uint64_t base, std::uint64_t exp) {
  constexpr auto top = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t out = 1;
  for (std::uint64_t i = 0; i < exp; ++i) {
    if (base != 0 && out > top / base) return top;
    out *= base;
  }
  return out;
}

inline std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
  constexpr auto top = std::numeric_limits<std::uint64_t>::max();
  if (a != 0 && b > top / a) return top;
  return a * b;
}

}  // namespace affine
