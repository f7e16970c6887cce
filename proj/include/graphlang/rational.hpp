#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace graphlang {

/// Exact rational number used for edge weights and path sums.
///
/// Always normalized: denominator > 0 and gcd(|num|, den) == 1, so the
/// defaulted equality is value equality. Arithmetic is done in 128-bit
/// intermediates and throws InvalidArgument if the reduced result no longer
/// fits in 64 bits.
class Rational {
 public:
  constexpr Rational() = default;
  Rational(std::int64_t value) : num_(value) {}  // NOLINT(implicit)
  Rational(std::int64_t num, std::int64_t den);

  std::int64_t numerator() const { return num_; }
  std::int64_t denominator() const { return den_; }
  bool is_integer() const { return den_ == 1; }
  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

  Rational operator+(const Rational& other) const;
  Rational operator-(const Rational& other) const;
  Rational operator-() const { return Rational(-num_, den_); }
  Rational& operator+=(const Rational& other) { return *this = *this + other; }

  friend bool operator==(const Rational&, const Rational&) = default;
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

  /// Integers render without a fractional part; everything else as a decimal
  /// rounded (half away from zero) to at most 6 fractional digits with
  /// trailing zeros removed.
  std::string to_string() const;

  /// Accepts `[-+]digits[.digits]` and `num/den`. Returns nullopt on anything
  /// else, including values that overflow.
  static std::optional<Rational> parse(std::string_view text);

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

}  // namespace graphlang
