#pragma once

#include <Eigen/Core>

#include <compare>
#include <limits>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>

namespace hypint {

/// Exact rational number on 64-bit integers. Always stored in lowest terms
/// with a positive denominator, so equality is structural. Intermediate
/// products go through 128-bit integers; a result that does not fit in 64
/// bits throws std::overflow_error instead of wrapping.
class Rational
{
public:
  constexpr Rational() = default;
  constexpr Rational(std::int64_t n) : num_(n) {}  // NOLINT(google-explicit-constructor)
  Rational(std::int64_t n, std::int64_t d) { assign(n, d); }

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  bool is_zero() const { return num_ == 0; }
  bool is_integer() const { return den_ == 1; }

  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }
  long double to_long_double() const
  {
    return static_cast<long double>(num_) / static_cast<long double>(den_);
  }

  /// Largest integer not above this value.
  std::int64_t floor() const
  {
    std::int64_t q = num_ / den_;
    if (num_ % den_ != 0 && num_ < 0) --q;
    return q;
  }

  Rational operator-() const { return from_wide(-static_cast<__int128>(num_), den_); }

  friend Rational operator+(const Rational &a, const Rational &b)
  {
    const std::int64_t g = std::gcd(a.den_, b.den_);
    const __int128 n = static_cast<__int128>(a.num_) * (b.den_ / g) + static_cast<__int128>(b.num_) * (a.den_ / g);
    const __int128 d = static_cast<__int128>(a.den_) * (b.den_ / g);
    return from_wide(n, d);
  }
  friend Rational operator-(const Rational &a, const Rational &b) { return a + (-b); }
  friend Rational operator*(const Rational &a, const Rational &b)
  {
    return from_wide(static_cast<__int128>(a.num_) * b.num_, static_cast<__int128>(a.den_) * b.den_);
  }
  friend Rational operator/(const Rational &a, const Rational &b)
  {
    if (b.num_ == 0) throw std::domain_error("rational division by zero");
    return from_wide(static_cast<__int128>(a.num_) * b.den_, static_cast<__int128>(a.den_) * b.num_);
  }

  Rational &operator+=(const Rational &o) { return *this = *this + o; }
  Rational &operator-=(const Rational &o) { return *this = *this - o; }
  Rational &operator*=(const Rational &o) { return *this = *this * o; }
  Rational &operator/=(const Rational &o) { return *this = *this / o; }

  friend bool operator==(const Rational &, const Rational &) = default;
  friend std::strong_ordering operator<=>(const Rational &a, const Rational &b)
  {
    const __int128 l = static_cast<__int128>(a.num_) * b.den_;
    const __int128 r = static_cast<__int128>(b.num_) * a.den_;
    return l <=> r;
  }

  /// "p" for integers, "p/q" otherwise.
  std::string str() const
  {
    return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
  }

  /// Inverse of str(); accepts "p" or "p/q" with optional sign.
  static Rational parse(const std::string &text);

  friend std::ostream &operator<<(std::ostream &os, const Rational &r) { return os << r.str(); }

private:
  static Rational from_wide(__int128 n, __int128 d)
  {
    if (d == 0) throw std::domain_error("rational with zero denominator");
    if (d < 0) {
      n = -n;
      d = -d;
    }
    __int128 a = n < 0 ? -n : n, b = d;
    while (b != 0) {
      const __int128 t = a % b;
      a = b;
      b = t;
    }
    if (a > 1) {
      n /= a;
      d /= a;
    }
    constexpr __int128 lim = std::numeric_limits<std::int64_t>::max();
    if (n > lim || n < -lim || d > lim) throw std::overflow_error("rational overflow");
    Rational r;
    r.num_ = static_cast<std::int64_t>(n);
    r.den_ = static_cast<std::int64_t>(d);
    return r;
  }

  void assign(std::int64_t n, std::int64_t d) { *this = from_wide(n, d); }

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

inline Rational abs(const Rational &r) { return r.num() < 0 ? -r : r; }

inline Rational Rational::parse(const std::string &text)
{
  const auto slash = text.find('/');
  try {
    if (slash == std::string::npos) return Rational(std::stoll(text));
    return Rational(std::stoll(text.substr(0, slash)), std::stoll(text.substr(slash + 1)));
  } catch (const std::logic_error &) {
    throw std::invalid_argument("malformed rational \"" + text + "\"");
  }
}

} // namespace hypint

namespace Eigen {
template <>
struct NumTraits<hypint::Rational> : GenericNumTraits<hypint::Rational>
{
  typedef hypint::Rational Real;
  typedef hypint::Rational NonInteger;
  typedef hypint::Rational Nested;
  enum
  {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 1,
    AddCost = 4,
    MulCost = 4
  };
};
} // namespace Eigen

namespace hypint {

using RationalVector = Eigen::Matrix<Rational, Eigen::Dynamic, 1>;
using RationalMatrix = Eigen::Matrix<Rational, Eigen::Dynamic, Eigen::Dynamic>;

} // namespace hypint
