#pragma once

// Scalar layer: exact rationals and doubles behind one set of helpers, plus a
// minimal complex type that works over either field.

#include <boost/multiprecision/gmp.hpp>

#include <cmath>
#include <concepts>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <type_traits>

namespace qiso {

using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;

enum class ArithmeticMode { Rational, Float };

/// Default comparison tolerance for float mode.
inline constexpr double kDefaultTol = 1e-9;

template <class R>
inline constexpr bool is_exact_v = std::is_same_v<R, Rational>;

template <class R>
concept Field = std::same_as<R, Rational> || std::same_as<R, double>;

/// Comparison policy. In rational mode `eps` is ignored and every comparison is exact.
struct Tolerance {
  double eps = kDefaultTol;
};

template <Field R>
double to_double(const R& x) {
  if constexpr (is_exact_v<R>) {
    return x.template convert_to<double>();
  } else {
    return x;
  }
}

template <Field R>
R from_double(double x) {
  if constexpr (is_exact_v<R>) {
    return Rational(x);  // exact binary expansion
  } else {
    return x;
  }
}

template <Field R>
R from_ratio(long long num, long long den) {
  if constexpr (is_exact_v<R>) {
    return Rational(num) / Rational(den);
  } else {
    return static_cast<double>(num) / static_cast<double>(den);
  }
}

template <Field R>
R abs_value(const R& x) {
  return x < R(0) ? R(-x) : x;
}

template <Field R>
bool is_zero(const R& x, const Tolerance& tol = {}) {
  if constexpr (is_exact_v<R>) {
    return x == 0;
  } else {
    return std::abs(x) <= tol.eps;
  }
}

template <Field R>
bool approx_eq(const R& a, const R& b, const Tolerance& tol = {}) {
  return is_zero<R>(a - b, tol);
}

/// a <= b, allowing slack eps in float mode.
template <Field R>
bool approx_le(const R& a, const R& b, const Tolerance& tol = {}) {
  if constexpr (is_exact_v<R>) {
    return a <= b;
  } else {
    return a <= b + tol.eps;
  }
}

/// a < b by more than eps in float mode.
template <Field R>
bool definitely_lt(const R& a, const R& b, const Tolerance& tol = {}) {
  return !approx_le<R>(b, a, tol);
}

template <Field R>
R pow_int(const R& base, unsigned exponent) {
  R result(1);
  R b = base;
  while (exponent > 0) {
    if (exponent & 1u) result *= b;
    b *= b;
    exponent >>= 1u;
  }
  return result;
}

/// True if p is an integer >= 1 (within 1e-12).
inline bool is_positive_integer(double p) {
  return p >= 1.0 && std::abs(p - std::round(p)) < 1e-12;
}

/// x^p for real p >= 1. Exact in rational mode only for integral p.
template <Field R>
R pow_real(const R& x, double p) {
  if (is_positive_integer(p)) return pow_int<R>(x, static_cast<unsigned>(std::llround(p)));
  if constexpr (is_exact_v<R>) {
    throw std::invalid_argument("non-integer exponent requires float mode");
  } else {
    return std::pow(x, p);
  }
}

/// Parses "3", "-2/7", "0.25" (decimal strings are converted exactly in rational mode).
template <Field R>
R parse_scalar(const std::string& text) {
  if constexpr (is_exact_v<R>) {
    auto dot = text.find('.');
    auto exp = text.find_first_of("eE");
    if (dot == std::string::npos && exp == std::string::npos) return Rational(text);
    // decimal literal: scale to an integer ratio
    std::string mantissa = exp == std::string::npos ? text : text.substr(0, exp);
    long long e10 = exp == std::string::npos ? 0 : std::stoll(text.substr(exp + 1));
    std::string digits;
    long long frac = 0;
    bool seen_dot = false;
    for (char c : mantissa) {
      if (c == '.') {
        seen_dot = true;
        continue;
      }
      digits.push_back(c);
      if (seen_dot && std::isdigit(static_cast<unsigned char>(c))) ++frac;
    }
    Rational value(digits.empty() || digits == "-" || digits == "+" ? std::string("0") : digits);
    long long shift = e10 - frac;
    Rational ten(10);
    if (shift > 0) value *= pow_int<Rational>(ten, static_cast<unsigned>(shift));
    if (shift < 0) value /= pow_int<Rational>(ten, static_cast<unsigned>(-shift));
    return value;
  } else {
    auto slash = text.find('/');
    if (slash == std::string::npos) return std::stod(text);
    return std::stod(text.substr(0, slash)) / std::stod(text.substr(slash + 1));
  }
}

template <Field R>
std::string format_scalar(const R& x) {
  if constexpr (is_exact_v<R>) {
    return x.str();
  } else {
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
  }
}

/// Complex numbers over R. std::complex is unspecified for non-floating types,
/// so both modes use this.
template <Field R>
struct Cx {
  R re{0};
  R im{0};

  Cx() = default;
  Cx(R real) : re(std::move(real)) {}  // NOLINT(google-explicit-constructor)
  Cx(R real, R imag) : re(std::move(real)), im(std::move(imag)) {}
  Cx(int real) : re(real) {}  // NOLINT(google-explicit-constructor)

  Cx& operator+=(const Cx& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  Cx& operator-=(const Cx& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  Cx& operator*=(const Cx& o) {
    R r = re * o.re - im * o.im;
    R i = re * o.im + im * o.re;
    re = std::move(r);
    im = std::move(i);
    return *this;
  }
  Cx& operator/=(const Cx& o) {
    R den = o.re * o.re + o.im * o.im;
    R r = (re * o.re + im * o.im) / den;
    R i = (im * o.re - re * o.im) / den;
    re = std::move(r);
    im = std::move(i);
    return *this;
  }
  friend Cx operator+(Cx a, const Cx& b) { return a += b; }
  friend Cx operator-(Cx a, const Cx& b) { return a -= b; }
  friend Cx operator*(Cx a, const Cx& b) { return a *= b; }
  friend Cx operator/(Cx a, const Cx& b) { return a /= b; }
  friend Cx operator-(const Cx& a) { return Cx(-a.re, -a.im); }
  friend bool operator==(const Cx& a, const Cx& b) { return a.re == b.re && a.im == b.im; }

  bool exactly_zero() const { return re == 0 && im == 0; }
};

template <Field R>
Cx<R> conj(const Cx<R>& z) {
  return Cx<R>(z.re, -z.im);
}

template <Field R>
R norm2(const Cx<R>& z) {
  return z.re * z.re + z.im * z.im;
}

template <Field R>
double abs_double(const Cx<R>& z) {
  return std::hypot(to_double(z.re), to_double(z.im));
}

template <Field R>
bool is_zero(const Cx<R>& z, const Tolerance& tol = {}) {
  if constexpr (is_exact_v<R>) {
    return z.exactly_zero();
  } else {
    return abs_double(z) <= tol.eps;
  }
}

template <Field R>
Cx<R> parse_complex(const std::string& re, const std::string& im) {
  return Cx<R>(parse_scalar<R>(re), parse_scalar<R>(im));
}

}  // namespace qiso
