#include "flatband/scalar.hpp"

#include <cctype>
#include <cmath>
#include <ostream>
#include <string>

#include "flatband/error.hpp"

namespace flatband {

namespace {

/// Exact value of a decimal literal such as -1.25e-3.
Rational parse_decimal(const std::string& s, std::string_view text) {
  auto fail = [&] { return Error(ErrorKind::ParseError, "malformed decimal literal '" + std::string(text) + "'"); };
  std::size_t pos = 0;
  bool negative = false;
  if (pos < s.size() && (s[pos] == '-' || s[pos] == '+')) negative = s[pos++] == '-';
  std::string digits;
  long scale = 0;
  bool any = false;
  while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
    digits += s[pos++];
    any = true;
  }
  if (pos < s.size() && s[pos] == '.') {
    ++pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
      digits += s[pos++];
      --scale;
      any = true;
    }
  }
  if (!any) throw fail();
  if (pos < s.size() && (s[pos] == 'e' || s[pos] == 'E')) {
    ++pos;
    const std::string exp = s.substr(pos);
    if (exp.empty() || exp.find_first_not_of("+-0123456789") != std::string::npos) throw fail();
    try {
      scale += std::stol(exp);
    } catch (const std::exception&) {
      throw fail();
    }
    pos = s.size();
  }
  if (pos != s.size() || scale > 4096 || scale < -4096) throw fail();
  mpz_class mantissa(digits, 10);
  mpz_class power;
  mpz_ui_pow_ui(power.get_mpz_t(), 10, static_cast<unsigned long>(scale < 0 ? -scale : scale));
  Rational q = scale < 0 ? Rational(mantissa, power) : Rational(mantissa * power);
  q.canonicalize();
  return negative ? Rational(-q) : q;
}

Rational parse_rational(std::string_view text) {
  std::string s(text);
  while (!s.empty() && s.front() == ' ') s.erase(s.begin());
  while (!s.empty() && s.back() == ' ') s.pop_back();
  if (s.empty()) throw Error(ErrorKind::ParseError, "empty rational literal");
  if (s.front() == '+') s.erase(s.begin());
  if (s.find_first_of(".eE") != std::string::npos) return parse_decimal(s, text);
  Rational q;
  if (q.set_str(s, 10) != 0) {
    throw Error(ErrorKind::ParseError, "malformed rational literal '" + std::string(text) + "'");
  }
  if (q.get_den() == 0) throw Error(ErrorKind::ParseError, "zero denominator in '" + s + "'");
  q.canonicalize();
  return q;
}

long double to_long_double(const Rational& q) {
  mpf_class f(q, 192);
  const double hi = f.get_d();
  mpf_class rest = f - hi;
  const double lo = rest.get_d();
  return static_cast<long double>(hi) + static_cast<long double>(lo);
}

}  // namespace

GaussRational::GaussRational(Rational re, Rational im) : re_(std::move(re)), im_(std::move(im)) {
  re_.canonicalize();
  im_.canonicalize();
}

GaussRational GaussRational::from_double(double re, double im) {
  return GaussRational(rational_from_double(re), rational_from_double(im));
}

GaussRational GaussRational::parse(std::string_view re, std::string_view im) {
  return GaussRational(parse_rational(re), parse_rational(im));
}

GaussRational GaussRational::inverse() const {
  if (is_zero()) throw Error(ErrorKind::InvalidArgument, "division by exact zero");
  const Rational n = norm();
  return GaussRational(re_ / n, -im_ / n);
}

GaussRational& GaussRational::operator+=(const GaussRational& o) {
  re_ += o.re_;
  im_ += o.im_;
  return *this;
}

GaussRational& GaussRational::operator-=(const GaussRational& o) {
  re_ -= o.re_;
  im_ -= o.im_;
  return *this;
}

GaussRational& GaussRational::operator*=(const GaussRational& o) {
  if (sgn(im_) == 0 && sgn(o.im_) == 0) {
    re_ *= o.re_;
    return *this;
  }
  Rational re = re_ * o.re_ - im_ * o.im_;
  Rational im = re_ * o.im_ + im_ * o.re_;
  re_ = std::move(re);
  im_ = std::move(im);
  return *this;
}

GaussRational& GaussRational::operator/=(const GaussRational& o) {
  if (o.is_zero()) throw Error(ErrorKind::InvalidArgument, "division by exact zero");
  if (sgn(o.im_) == 0) {
    re_ /= o.re_;
    im_ /= o.re_;
    return *this;
  }
  return *this *= o.inverse();
}

LongComplex GaussRational::to_long_complex() const {
  return {to_long_double(re_), to_long_double(im_)};
}

std::string GaussRational::to_string() const {
  if (is_real()) return re_.get_str();
  std::string out;
  if (sgn(re_) != 0) out = re_.get_str();
  if (sgn(im_) > 0 && !out.empty()) out += "+";
  out += im_.get_str();
  out += "*i";
  return out;
}

std::ostream& operator<<(std::ostream& os, const GaussRational& x) { return os << x.to_string(); }

Rational rational_from_double(double value) {
  if (!std::isfinite(value)) throw Error(ErrorKind::ParseError, "non-finite scalar");
  Rational q(value);
  q.canonicalize();
  return q;
}

bool rational_sqrt(const Rational& value, Rational& root) {
  if (sgn(value) < 0) return false;
  const mpz_class& num = value.get_num();
  const mpz_class& den = value.get_den();
  if (mpz_perfect_square_p(num.get_mpz_t()) == 0 || mpz_perfect_square_p(den.get_mpz_t()) == 0) {
    return false;
  }
  mpz_class rn;
  mpz_class rd;
  mpz_sqrt(rn.get_mpz_t(), num.get_mpz_t());
  mpz_sqrt(rd.get_mpz_t(), den.get_mpz_t());
  root = Rational(rn, rd);
  root.canonicalize();
  return true;
}

bool gauss_sqrt(const GaussRational& value, GaussRational& root) {
  const Rational& a = value.real();
  const Rational& b = value.imag();
  if (sgn(b) == 0) {
    Rational r;
    if (sgn(a) >= 0) {
      if (!rational_sqrt(a, r)) return false;
      root = GaussRational(r, 0);
    } else {
      if (!rational_sqrt(-a, r)) return false;
      root = GaussRational(0, r);
    }
    return true;
  }
  Rational modulus;
  if (!rational_sqrt(value.norm(), modulus)) return false;
  Rational x;
  Rational y;
  if (!rational_sqrt((modulus + a) / 2, x) || !rational_sqrt((modulus - a) / 2, y)) return false;
  if (sgn(b) < 0) y = -y;
  root = GaussRational(x, y);
  return true;
}

}  // namespace flatband
