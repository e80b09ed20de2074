#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>
#include <string_view>
#include <type_traits>

#include "coboson/errors.hpp"

namespace coboson {

// The numeric tower: every quantity in the library is computed either over
// exact rationals (arbitrary-precision integers) or over binary doubles with
// compensated summation. The mode is fixed when a table is built and never
// changes afterwards.
using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

template <class S>
inline constexpr bool is_rational_mode = std::is_same_v<S, Rational>;

template <class S>
inline double to_double(const S& x) {
  if constexpr (is_rational_mode<S>) {
    return x.template convert_to<double>();
  } else {
    return static_cast<double>(x);
  }
}

/// Neumaier variant of Kahan summation: the running compensation also
/// captures the error when the addend is larger than the partial sum.
class NeumaierSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// Fixed 17-significant-digit, locale-independent float formatting.
inline std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v,
                                 std::chars_format::general, 17);
  if (ec != std::errc{}) throw Error("float formatting failed");
  return std::string(buf, ptr);
}

/// Rationals are printed as "p/q" in lowest terms, sign on the numerator.
inline std::string format_rational(const Rational& v) {
  return numerator(v).str() + "/" + denominator(v).str();
}

template <class S>
std::string format_scalar(const S& v) {
  if constexpr (is_rational_mode<S>) {
    return format_rational(v);
  } else {
    return format_double(v);
  }
}

/// Parses "p/q" or a bare integer "p" into an exact rational.
inline Rational parse_rational(std::string_view text) {
  const auto slash = text.find('/');
  try {
    if (slash == std::string_view::npos) {
      return Rational(BigInt(std::string(text)));
    }
    const BigInt num{std::string(text.substr(0, slash))};
    const BigInt den{std::string(text.substr(slash + 1))};
    if (den == 0) throw Error("zero denominator in \"" + std::string(text) + "\"");
    return Rational(num, den);
  } catch (const std::runtime_error& e) {
    throw Error("cannot parse rational \"" + std::string(text) + "\": " + e.what());
  }
}

}  // namespace coboson
