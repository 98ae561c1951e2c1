#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace affine {

using Elem = std::uint32_t;

// Tuples are encoded most-significant-coordinate first, so numeric order of
// codes is lexicographic order of tuples. Operation tables, points of A^n and
// elements of direct products all share this encoding.

inline std::size_t encode_tuple(std::span<const Elem> digits, std::size_t radix) {
  std::size_t code = 0;
  for (Elem d : digits) code = code * radix + d;
  return code;
}

inline std::vector<Elem> decode_tuple(std::size_t code, std::size_t radix, std::size_t length) {
  std::vector<Elem> digits(length);
  for (std::size_t i = length; i-- > 0;) {
    digits[i] = static_cast<Elem>(code % radix);
    code /= radix;
  }
  return digits;
}

inline std::size_t encode_mixed(std::span<const Elem> digits, std::span<const std::size_t> radices) {
  std::size_t code = 0;
  for (std::size_t i = 0; i < digits.size(); ++i) code = code * radices[i] + digits[i];
  return code;
}

inline std::vector<Elem> decode_mixed(std::size_t code, std::span<const std::size_t> radices) {
  std::vector<Elem> digits(radices.size());
  for (std::size_t i = radices.size(); i-- > 0;) {
    digits[i] = static_cast<Elem>(code % radices[i]);
    code /= radices[i];
  }
  return digits;
}

/// Odometer over {0..radix-1}^length in code order.
class TupleCounter {
 public:
  TupleCounter(std::size_t length, std::size_t radix)
      : digits_(length, 0), radix_(radix), done_(radix == 0 && length > 0) {}

  bool done() const { return done_; }
  std::span<const Elem> digits() const { return digits_; }

  void next() {
    for (std::size_t i = digits_.size(); i-- > 0;) {
      if (++digits_[i] < radix_) return;
      digits_[i] = 0;
    }
    done_ = true;
  }

 private:
  std::vector<Elem> digits_;
  std::size_t radix_;
  bool done_;
};

}  // namespace affine
