#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "flatband/error.hpp"
#include "flatband/lattice.hpp"
#include "flatband/matrix.hpp"
#include "flatband/scalar.hpp"

namespace flatband {

/// Multivariate Laurent polynomial in z_1..z_d over the scalar backend S.
/// Terms are kept canonical: no stored zero coefficients.
///
/// A default-constructed polynomial is the zero polynomial of rank 0; it
/// adopts the rank of the other operand in binary operations so that
/// containers of polynomials can be value-initialised.
template <class S>
class LaurentPoly {
 public:
  using Scalar = S;
  using Traits = ScalarTraits<S>;
  using TermMap = std::map<LatticeVector, S>;

  LaurentPoly() = default;
  explicit LaurentPoly(std::size_t rank) : rank_(rank) {}

  static LaurentPoly constant(std::size_t rank, const S& c) {
    LaurentPoly p(rank);
    p.add_term(LatticeVector(rank), c);
    return p;
  }
  static LaurentPoly monomial(const LatticeVector& exponent, const S& c) {
    LaurentPoly p(exponent.rank());
    p.add_term(exponent, c);
    return p;
  }

  std::size_t rank() const noexcept { return rank_; }
  const TermMap& terms() const noexcept { return terms_; }
  std::size_t term_count() const noexcept { return terms_.size(); }
  bool is_zero() const noexcept { return terms_.empty(); }

  S coefficient(const LatticeVector& exponent) const {
    auto it = terms_.find(exponent);
    return it == terms_.end() ? Traits::zero() : it->second;
  }

  void add_term(const LatticeVector& exponent, const S& c) {
    if (exponent.rank() != rank_) {
      if (rank_ == 0 && terms_.empty()) {
        rank_ = exponent.rank();
      } else {
        throw Error(ErrorKind::RankMismatch, "exponent " + exponent.to_string() + " in a rank-" +
                                                 std::to_string(rank_) + " polynomial");
      }
    }
    if (Traits::is_zero(c)) return;
    auto [it, inserted] = terms_.try_emplace(exponent, c);
    if (!inserted) {
      it->second += c;
      if (Traits::is_zero(it->second)) terms_.erase(it);
    }
  }

  LaurentPoly operator-() const {
    LaurentPoly out(*this);
    for (auto& [e, c] : out.terms_) c = -c;
    return out;
  }

  LaurentPoly& operator+=(const LaurentPoly& o) {
    adopt_rank(o);
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
  }
  LaurentPoly& operator-=(const LaurentPoly& o) {
    adopt_rank(o);
    for (const auto& [e, c] : o.terms_) add_term(e, -c);
    return *this;
  }
  friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) { return a += b; }
  friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly& b) { return a -= b; }

  friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
    LaurentPoly out(common_rank(a, b));
    for (const auto& [ea, ca] : a.terms_) {
      for (const auto& [eb, cb] : b.terms_) out.add_term(ea + eb, ca * cb);
    }
    return out;
  }
  LaurentPoly& operator*=(const LaurentPoly& o) { return *this = *this * o; }

  LaurentPoly scaled(const S& factor) const {
    LaurentPoly out(rank_);
    if (Traits::is_zero(factor)) return out;
    for (const auto& [e, c] : terms_) out.terms_.emplace(e, c * factor);
    return out;
  }

  /// Multiplies by z^shift.
  LaurentPoly shifted(const LatticeVector& shift) const {
    LaurentPoly out(rank_);
    for (const auto& [e, c] : terms_) out.terms_.emplace(e + shift, c);
    return out;
  }

  friend bool operator==(const LaurentPoly& a, const LaurentPoly& b) {
    if (a.is_zero() && b.is_zero()) return true;
    return a.rank_ == b.rank_ && a.terms_ == b.terms_;
  }

  /// Evaluation at a point of (S \ {0})^d, computed in S.
  S evaluate(std::span<const S> z) const {
    check_point(z.size());
    for (const auto& zk : z) {
      if (Traits::is_zero(zk)) throw Error(ErrorKind::ZeroComponent, "evaluation point has a zero component");
    }
    S sum = Traits::zero();
    for (const auto& [e, c] : terms_) {
      S term = c;
      for (std::size_t k = 0; k < rank_; ++k) term *= int_power(z[k], e[k]);
      sum += term;
    }
    return sum;
  }

  /// Floating evaluation at a point of (C \ {0})^d, in precision T.
  template <class T = double>
  std::complex<T> evaluate_numeric(std::span<const std::complex<T>> z) const {
    check_point(z.size());
    for (const auto& zk : z) {
      if (zk == std::complex<T>(0)) throw Error(ErrorKind::ZeroComponent, "evaluation point has a zero component");
    }
    std::complex<T> sum(0);
    for (const auto& [e, c] : terms_) {
      std::complex<T> term = to_precision<T>(c);
      for (std::size_t k = 0; k < rank_; ++k) term *= int_power(z[k], e[k]);
      sum += term;
    }
    return sum;
  }

  LaurentPoly<Complex> to_numeric() const {
    LaurentPoly<Complex> out(rank_);
    for (const auto& [e, c] : terms_) out.add_term(e, Traits::to_complex(c));
    return out;
  }

  /// Exponent of the lexicographically largest term; requires nonzero.
  const LatticeVector& leading_exponent() const { return terms_.rbegin()->first; }
  const S& leading_coefficient() const { return terms_.rbegin()->second; }

  /// Coordinate-wise minimum / maximum exponent over the support.
  std::pair<LatticeVector, LatticeVector> exponent_box() const {
    LatticeVector lo(rank_);
    LatticeVector hi(rank_);
    bool first = true;
    for (const auto& [e, c] : terms_) {
      for (std::size_t k = 0; k < rank_; ++k) {
        lo[k] = first ? e[k] : std::min(lo[k], e[k]);
        hi[k] = first ? e[k] : std::max(hi[k], e[k]);
      }
      first = false;
    }
    return {lo, hi};
  }

  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::string out;
    for (const auto& [e, c] : terms_) {
      if (!out.empty()) out += " + ";
      out += "(" + scalar_text(c) + ")";
      if (!e.is_zero()) out += "*z^" + e.to_string();
    }
    return out;
  }

 private:
  template <class>
  friend class LaurentPoly;

  static std::size_t common_rank(const LaurentPoly& a, const LaurentPoly& b) {
    if (a.rank_ == b.rank_) return a.rank_;
    if (a.rank_ == 0 && a.is_zero()) return b.rank_;
    if (b.rank_ == 0 && b.is_zero()) return a.rank_;
    throw Error(ErrorKind::RankMismatch,
                "polynomial ranks " + std::to_string(a.rank_) + " and " + std::to_string(b.rank_));
  }

  void adopt_rank(const LaurentPoly& o) { rank_ = common_rank(*this, o); }

  void check_point(std::size_t n) const {
    if (n != rank_) {
      throw Error(ErrorKind::RankMismatch, "point of dimension " + std::to_string(n) + " for rank-" +
                                               std::to_string(rank_) + " polynomial");
    }
  }

  template <class V>
  static V int_power(const V& base, std::int64_t exponent) {
    V result = V(1);
    V b = exponent < 0 ? V(1) / base : base;
    std::uint64_t n = exponent < 0 ? static_cast<std::uint64_t>(-exponent) : static_cast<std::uint64_t>(exponent);
    while (n) {
      if (n & 1U) result *= b;
      n >>= 1U;
      if (n) b *= b;
    }
    return result;
  }

  template <class T>
  static std::complex<T> to_precision(const S& c) {
    if constexpr (std::is_same_v<S, GaussRational>) {
      if constexpr (std::is_same_v<T, long double>) {
        return c.to_long_complex();
      } else {
        return std::complex<T>(c.to_complex());
      }
    } else {
      return std::complex<T>(static_cast<T>(c.real()), static_cast<T>(c.imag()));
    }
  }

  static std::string scalar_text(const S& c) {
    if constexpr (std::is_same_v<S, GaussRational>) {
      return c.to_string();
    } else {
      return std::to_string(c.real()) + (c.imag() < 0 ? "" : "+") + std::to_string(c.imag()) + "i";
    }
  }

  std::size_t rank_ = 0;
  TermMap terms_;
};

/// Exact quotient num / den in the Laurent ring, or nullopt when den does not
/// divide num. Requires an exact backend.
template <class S>
std::optional<LaurentPoly<S>> exact_divide(const LaurentPoly<S>& num, const LaurentPoly<S>& den) {
  static_assert(ScalarTraits<S>::exact, "exact division needs an exact scalar backend");
  if (den.is_zero()) throw Error(ErrorKind::InvalidArgument, "division by the zero polynomial");
  const std::size_t rank = num.is_zero() ? den.rank() : num.rank();
  LaurentPoly<S> quotient(rank);
  if (num.is_zero()) return quotient;
  // Per-variable extreme degrees add under multiplication, which bounds the
  // quotient support and makes the loop finite for non-divisible inputs.
  auto [num_lo, num_hi] = num.exponent_box();
  auto [den_lo, den_hi] = den.exponent_box();
  const LatticeVector q_lo = num_lo - den_lo;
  const LatticeVector q_hi = num_hi - den_hi;
  const LatticeVector& lead_e = den.leading_exponent();
  const S& lead_c = den.leading_coefficient();
  LaurentPoly<S> rem = num;
  while (!rem.is_zero()) {
    LatticeVector e = rem.leading_exponent() - lead_e;
    for (std::size_t k = 0; k < rank; ++k) {
      if (e[k] < q_lo[k] || e[k] > q_hi[k]) return std::nullopt;
    }
    LaurentPoly<S> term = LaurentPoly<S>::monomial(e, rem.leading_coefficient() / lead_c);
    rem -= term * den;
    quotient += term;
  }
  return quotient;
}

template <class S>
using LaurentMatrix = Matrix<LaurentPoly<S>>;

namespace detail {

template <class S>
std::size_t matrix_rank_hint(const LaurentMatrix<S>& m) {
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (m(i, j).rank() != 0) return m(i, j).rank();
    }
  }
  return 0;
}

template <class S>
LaurentPoly<S> cofactor_rec(const LaurentMatrix<S>& m, std::size_t row, std::vector<bool>& used,
                            std::size_t rank) {
  const std::size_t n = m.rows();
  if (row == n) return LaurentPoly<S>::constant(rank, ScalarTraits<S>::one());
  LaurentPoly<S> sum(rank);
  int sign = 1;
  for (std::size_t col = 0; col < n; ++col) {
    if (used[col]) continue;
    if (!m(row, col).is_zero()) {
      used[col] = true;
      LaurentPoly<S> minor = cofactor_rec(m, row + 1, used, rank);
      used[col] = false;
      if (!minor.is_zero()) {
        LaurentPoly<S> t = m(row, col) * minor;
        if (sign > 0) {
          sum += t;
        } else {
          sum -= t;
        }
      }
    }
    sign = -sign;
  }
  return sum;
}

inline void require_square(std::size_t rows, std::size_t cols) {
  if (rows != cols) {
    throw Error(ErrorKind::NonSquare, std::to_string(rows) + "x" + std::to_string(cols) + " matrix");
  }
  if (rows == 0) throw Error(ErrorKind::NonSquare, "empty matrix");
}

}  // namespace detail

/// Laplace expansion along rows.
template <class S>
LaurentPoly<S> det_cofactor(const LaurentMatrix<S>& m) {
  detail::require_square(m.rows(), m.cols());
  std::vector<bool> used(m.cols(), false);
  return detail::cofactor_rec(m, 0, used, detail::matrix_rank_hint(m));
}

/// Fraction-free (Bareiss) elimination over the Laurent ring.
template <class S>
LaurentPoly<S> det_bareiss(LaurentMatrix<S> m) {
  detail::require_square(m.rows(), m.cols());
  const std::size_t n = m.rows();
  const std::size_t rank = detail::matrix_rank_hint(m);
  LaurentPoly<S> previous = LaurentPoly<S>::constant(rank, ScalarTraits<S>::one());
  bool negate = false;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m(k, k).is_zero()) {
      std::size_t swap_row = k + 1;
      while (swap_row < n && m(swap_row, k).is_zero()) ++swap_row;
      if (swap_row == n) return LaurentPoly<S>(rank);
      for (std::size_t j = 0; j < n; ++j) std::swap(m(k, j), m(swap_row, j));
      negate = !negate;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        LaurentPoly<S> t = m(k, k) * m(i, j) - m(i, k) * m(k, j);
        auto q = exact_divide(t, previous);
        if (!q) throw Error(ErrorKind::InvalidArgument, "Bareiss step is not exact");
        m(i, j) = std::move(*q);
      }
      m(i, k) = LaurentPoly<S>(rank);
    }
    previous = m(k, k);
  }
  LaurentPoly<S> det = m(n - 1, n - 1);
  return negate ? -det : det;
}

/// Cofactor expansion up to this size; fraction-free elimination above.
inline constexpr std::size_t kCofactorLimit = 6;

template <class S>
LaurentPoly<S> det_laurent(const LaurentMatrix<S>& m) {
  if constexpr (ScalarTraits<S>::exact) {
    if (m.rows() > kCofactorLimit) return det_bareiss(m);
  }
  return det_cofactor(m);
}

/// Univariate polynomial c_0 + c_1 E + ... + c_m E^m.
template <class S>
class EnergyPoly {
 public:
  using Traits = ScalarTraits<S>;

  EnergyPoly() = default;
  explicit EnergyPoly(std::vector<S> coefficients) : c_(std::move(coefficients)) { trim(); }

  static EnergyPoly constant(const S& c) { return EnergyPoly(std::vector<S>{c}); }
  static EnergyPoly monomial(std::size_t degree, const S& c) {
    std::vector<S> v(degree + 1, Traits::zero());
    v[degree] = c;
    return EnergyPoly(std::move(v));
  }
  /// E - root.
  static EnergyPoly linear_factor(const S& root) { return EnergyPoly(std::vector<S>{-root, Traits::one()}); }

  bool is_zero() const noexcept { return c_.empty(); }
  /// -1 for the zero polynomial.
  int degree() const noexcept { return static_cast<int>(c_.size()) - 1; }
  const std::vector<S>& coefficients() const noexcept { return c_; }
  S coefficient(std::size_t k) const { return k < c_.size() ? c_[k] : Traits::zero(); }
  const S& leading() const { return c_.back(); }

  S evaluate(const S& e) const {
    S acc = Traits::zero();
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * e + *it;
    return acc;
  }

  template <class T>
  std::complex<T> evaluate_numeric(const std::complex<T>& e) const {
    std::complex<T> acc(0);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * e + std::complex<T>(Traits::to_complex(*it));
    return acc;
  }

  EnergyPoly operator-() const {
    EnergyPoly out(*this);
    for (auto& c : out.c_) c = -c;
    return out;
  }
  EnergyPoly& operator+=(const EnergyPoly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), Traits::zero());
    for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] += o.c_[k];
    trim();
    return *this;
  }
  EnergyPoly& operator-=(const EnergyPoly& o) { return *this += -o; }
  friend EnergyPoly operator+(EnergyPoly a, const EnergyPoly& b) { return a += b; }
  friend EnergyPoly operator-(EnergyPoly a, const EnergyPoly& b) { return a -= b; }
  friend EnergyPoly operator*(const EnergyPoly& a, const EnergyPoly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<S> out(a.c_.size() + b.c_.size() - 1, Traits::zero());
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      for (std::size_t j = 0; j < b.c_.size(); ++j) out[i + j] += a.c_[i] * b.c_[j];
    }
    return EnergyPoly(std::move(out));
  }
  friend bool operator==(const EnergyPoly& a, const EnergyPoly& b) { return a.c_ == b.c_; }

  EnergyPoly scaled(const S& factor) const {
    EnergyPoly out(*this);
    for (auto& c : out.c_) c *= factor;
    out.trim();
    return out;
  }

  EnergyPoly monic() const {
    if (is_zero()) return {};
    return scaled(S(1) / leading());
  }

  EnergyPoly derivative() const {
    if (c_.size() <= 1) return {};
    std::vector<S> out(c_.size() - 1);
    for (std::size_t k = 1; k < c_.size(); ++k) out[k - 1] = c_[k] * S(static_cast<int>(k));
    return EnergyPoly(std::move(out));
  }

  /// Euclidean division over the field S: returns (quotient, remainder).
  std::pair<EnergyPoly, EnergyPoly> divmod(const EnergyPoly& divisor) const {
    if (divisor.is_zero()) throw Error(ErrorKind::ZeroPolynomial, "division by the zero polynomial");
    EnergyPoly rem(*this);
    if (rem.degree() < divisor.degree()) return {EnergyPoly(), rem};
    std::vector<S> q(static_cast<std::size_t>(rem.degree() - divisor.degree() + 1), Traits::zero());
    const S inv_lead = S(1) / divisor.leading();
    while (!rem.is_zero() && rem.degree() >= divisor.degree()) {
      const std::size_t shift = static_cast<std::size_t>(rem.degree() - divisor.degree());
      const S factor = rem.leading() * inv_lead;
      q[shift] = factor;
      for (std::size_t k = 0; k < divisor.c_.size(); ++k) rem.c_[k + shift] -= factor * divisor.c_[k];
      if constexpr (Traits::exact) {
        rem.trim();
      } else {
        rem.c_.pop_back();
        rem.trim();
      }
    }
    return {EnergyPoly(std::move(q)), rem};
  }

  std::string to_string() const {
    if (c_.empty()) return "0";
    std::string out;
    for (std::size_t k = c_.size(); k-- > 0;) {
      if (Traits::is_zero(c_[k])) continue;
      if (!out.empty()) out += " + ";
      if constexpr (std::is_same_v<S, GaussRational>) {
        out += "(" + c_[k].to_string() + ")";
      } else {
        out += "(" + std::to_string(c_[k].real()) + "," + std::to_string(c_[k].imag()) + ")";
      }
      if (k > 0) out += "*E^" + std::to_string(k);
    }
    return out;
  }

 private:
  void trim() {
    while (!c_.empty() && Traits::is_zero(c_.back())) c_.pop_back();
  }

  std::vector<S> c_;
};

/// Coefficients q_alpha(E) of z^alpha in det(h(z) - E).
template <class S>
using CharSplit = std::map<LatticeVector, EnergyPoly<S>>;

/// Embeds a rank-d polynomial into rank d+1 with the last variable standing
/// for the energy E (exponent 0).
template <class S>
LaurentPoly<S> lift_energy(const LaurentPoly<S>& p, std::size_t rank) {
  LaurentPoly<S> out(rank + 1);
  for (const auto& [e, c] : p.terms()) {
    auto comps = e.components();
    comps.push_back(0);
    out.add_term(LatticeVector(std::move(comps)), c);
  }
  return out;
}

/// Inverse of lift_energy on a product: groups the rank-(d+1) terms by their
/// z-part into energy polynomials.
template <class S>
CharSplit<S> split_energy(const LaurentPoly<S>& p, std::size_t rank) {
  std::map<LatticeVector, std::vector<S>> acc;
  for (const auto& [e, c] : p.terms()) {
    if (e.rank() != rank + 1 || e[rank] < 0) {
      throw Error(ErrorKind::InvalidArgument, "not a polynomial in the energy variable");
    }
    std::vector<std::int64_t> z(e.components().begin(), e.components().end() - 1);
    auto& coeffs = acc[LatticeVector(std::move(z))];
    const auto k = static_cast<std::size_t>(e[rank]);
    if (coeffs.size() <= k) coeffs.resize(k + 1, ScalarTraits<S>::zero());
    coeffs[k] += c;
  }
  CharSplit<S> out;
  for (auto& [z, coeffs] : acc) {
    EnergyPoly<S> q(std::move(coeffs));
    if (!q.is_zero()) out.emplace(z, std::move(q));
  }
  return out;
}

/// det(m - E I) split by z-monomials; m is a matrix over rank-d polynomials.
template <class S>
CharSplit<S> characteristic_split(const LaurentMatrix<S>& m, std::size_t rank) {
  detail::require_square(m.rows(), m.cols());
  const std::size_t n = m.rows();
  LaurentMatrix<S> shifted(n, n, LaurentPoly<S>(rank + 1));
  std::vector<std::int64_t> energy(rank + 1, 0);
  energy[rank] = 1;
  const LatticeVector energy_exp(energy);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) shifted(i, j) = lift_energy(m(i, j), rank);
    shifted(i, i).add_term(energy_exp, -ScalarTraits<S>::one());
  }
  return split_energy(det_laurent(shifted), rank);
}

using ExactPoly = LaurentPoly<GaussRational>;
using ExactEnergyPoly = EnergyPoly<GaussRational>;

/// Monic gcd over Q(i). gcd({p, 0}) = monic(p); the gcd of only zero
/// polynomials is zero. Throws EmptyInput.
ExactEnergyPoly gcd_energy(std::span<const ExactEnergyPoly> polys);

struct EnergyRoots {
  /// Distinct roots found exactly in Q(i), each verified by substitution.
  std::vector<GaussRational> exact;
  /// All roots with multiplicity, from companion-matrix eigenvalues polished
  /// by Newton steps.
  std::vector<Complex> numeric;
};

/// Throws ZeroPolynomial for p = 0.
EnergyRoots roots_energy(const ExactEnergyPoly& p);

/// Eigenvalues of the companion matrix, Newton-polished against p.
std::vector<Complex> numeric_roots(const EnergyPoly<Complex>& p);

}  // namespace flatband
