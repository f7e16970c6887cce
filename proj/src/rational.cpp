#include "graphlang/rational.hpp"

#include <limits>

#include "graphlang/error.hpp"

namespace graphlang {
namespace {

using i128 = __int128;

i128 gcd128(i128 a, i128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    i128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

Rational reduce(i128 num, i128 den) {
  if (den == 0) throw InvalidArgument("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  i128 g = gcd128(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  constexpr i128 lo = std::numeric_limits<std::int64_t>::min();
  constexpr i128 hi = std::numeric_limits<std::int64_t>::max();
  if (num < lo || num > hi || den > hi) throw InvalidArgument("rational overflow");
  return Rational(static_cast<std::int64_t>(num), static_cast<std::int64_t>(den));
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw InvalidArgument("rational with zero denominator");
  i128 n = num, d = den;
  if (d < 0) {
    n = -n;
    d = -d;
  }
  i128 g = gcd128(n, d);
  if (g > 1) {
    n /= g;
    d /= g;
  }
  num_ = static_cast<std::int64_t>(n);
  den_ = static_cast<std::int64_t>(d);
}

Rational Rational::operator+(const Rational& other) const {
  return reduce(static_cast<i128>(num_) * other.den_ + static_cast<i128>(other.num_) * den_,
                static_cast<i128>(den_) * other.den_);
}

Rational Rational::operator-(const Rational& other) const { return *this + (-other); }

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  i128 lhs = static_cast<i128>(a.num_) * b.den_;
  i128 rhs = static_cast<i128>(b.num_) * a.den_;
  if (lhs < rhs) return std::strong_ordering::less;
  if (lhs > rhs) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

std::string Rational::to_string() const {
  if (den_ == 1) return std::to_string(num_);
  constexpr i128 scale = 1'000'000;
  i128 n = num_;
  bool negative = n < 0;
  if (negative) n = -n;
  i128 scaled = (n * scale * 2 + den_) / (2 * static_cast<i128>(den_));  // round half up on |x|
  auto whole = static_cast<std::int64_t>(scaled / scale);
  auto frac = static_cast<std::int64_t>(scaled % scale);
  std::string out;
  if (negative && scaled != 0) out += '-';
  out += std::to_string(whole);
  if (frac != 0) {
    std::string digits = std::to_string(frac);
    digits.insert(0, 6 - digits.size(), '0');
    while (!digits.empty() && digits.back() == '0') digits.pop_back();
    out += '.';
    out += digits;
  }
  return out;
}

std::optional<Rational> Rational::parse(std::string_view text) {
  if (text.empty()) return std::nullopt;
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    auto num = parse(text.substr(0, slash));
    auto den = parse(text.substr(slash + 1));
    if (!num || !den || !num->is_integer() || !den->is_integer() || den->num_ <= 0) {
      return std::nullopt;
    }
    return Rational(num->num_, den->num_);
  }
  std::size_t i = 0;
  bool negative = false;
  if (text[0] == '-' || text[0] == '+') {
    negative = text[0] == '-';
    ++i;
  }
  i128 num = 0;
  i128 den = 1;
  bool any_digit = false;
  bool seen_dot = false;
  constexpr i128 limit = static_cast<i128>(1) << 100;
  for (; i < text.size(); ++i) {
    char c = text[i];
    if (c == '.') {
      if (seen_dot) return std::nullopt;
      seen_dot = true;
      continue;
    }
    if (c < '0' || c > '9') return std::nullopt;
    any_digit = true;
    num = num * 10 + (c - '0');
    if (seen_dot) den *= 10;
    if (num > limit || den > limit) return std::nullopt;
  }
  if (!any_digit) return std::nullopt;
  try {
    return reduce(negative ? -num : num, den);
  } catch (const InvalidArgument&) {
    return std::nullopt;
  }
}

}  // namespace graphlang
