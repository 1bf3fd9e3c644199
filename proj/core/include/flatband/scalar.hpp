#pragma once

#include <gmpxx.h>

#include <complex>
#include <iosfwd>
#include <string>
#include <string_view>

namespace flatband {

using Rational = mpq_class;
using Complex = std::complex<double>;
using LongComplex = std::complex<long double>;

/// Exact complex scalar with arbitrary-precision rational parts. This is the
/// field all symbolic decisions are made over.
class GaussRational {
 public:
  GaussRational() = default;
  GaussRational(int value) : re_(value) {}  // NOLINT: integers embed naturally
  GaussRational(long value) : re_(value) {}  // NOLINT
  explicit GaussRational(Rational re, Rational im = 0);

  /// Exact conversion; every finite double is a dyadic rational.
  static GaussRational from_double(double re, double im = 0.0);
  /// Parses "a", "a/b" or "-a/b" for each part. Throws Error(ParseError).
  static GaussRational parse(std::string_view re, std::string_view im = "0");

  const Rational& real() const noexcept { return re_; }
  const Rational& imag() const noexcept { return im_; }

  bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }
  bool is_real() const { return sgn(im_) == 0; }
  GaussRational conj() const { return GaussRational(re_, -im_); }
  /// |x|^2, exact.
  Rational norm() const { return re_ * re_ + im_ * im_; }
  GaussRational inverse() const;

  GaussRational operator-() const { return GaussRational(-re_, -im_); }
  GaussRational& operator+=(const GaussRational& o);
  GaussRational& operator-=(const GaussRational& o);
  GaussRational& operator*=(const GaussRational& o);
  GaussRational& operator/=(const GaussRational& o);

  friend GaussRational operator+(GaussRational a, const GaussRational& b) { return a += b; }
  friend GaussRational operator-(GaussRational a, const GaussRational& b) { return a -= b; }
  friend GaussRational operator*(GaussRational a, const GaussRational& b) { return a *= b; }
  friend GaussRational operator/(GaussRational a, const GaussRational& b) { return a /= b; }
  friend bool operator==(const GaussRational& a, const GaussRational& b) {
    return a.re_ == b.re_ && a.im_ == b.im_;
  }
  friend bool operator!=(const GaussRational& a, const GaussRational& b) { return !(a == b); }
  /// Lexicographic on (re, im); only used for canonical containers.
  friend bool operator<(const GaussRational& a, const GaussRational& b) {
    return a.re_ != b.re_ ? a.re_ < b.re_ : a.im_ < b.im_;
  }

  Complex to_complex() const { return {re_.get_d(), im_.get_d()}; }
  LongComplex to_long_complex() const;
  double abs() const { return std::abs(to_complex()); }

  /// "a/b" for real values, "a/b+c/d*i" otherwise.
  std::string to_string() const;

 private:
  Rational re_{0};
  Rational im_{0};
};

std::ostream& operator<<(std::ostream& os, const GaussRational& x);

/// Uniform access to the two scalar backends from the algebra templates.
template <class S>
struct ScalarTraits;

template <>
struct ScalarTraits<GaussRational> {
  static constexpr bool exact = true;
  static bool is_zero(const GaussRational& x) { return x.is_zero(); }
  static GaussRational zero() { return GaussRational(); }
  static GaussRational one() { return GaussRational(1); }
  static double magnitude(const GaussRational& x) { return x.abs(); }
  static Complex to_complex(const GaussRational& x) { return x.to_complex(); }
};

template <>
struct ScalarTraits<Complex> {
  static constexpr bool exact = false;
  static bool is_zero(const Complex& x) { return x == Complex(0.0, 0.0); }
  static Complex zero() { return {0.0, 0.0}; }
  static Complex one() { return {1.0, 0.0}; }
  static double magnitude(const Complex& x) { return std::abs(x); }
  static Complex to_complex(const Complex& x) { return x; }
};

Rational rational_from_double(double value);
/// Exact square root of a nonnegative rational if it is a perfect square.
bool rational_sqrt(const Rational& value, Rational& root);
/// Exact square root in Q(i) when one exists.
bool gauss_sqrt(const GaussRational& value, GaussRational& root);

}  // namespace flatband
