#include "flatband/laurent.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <limits>

namespace flatband {

namespace {

bool all_real(const ExactEnergyPoly& p) {
  return std::all_of(p.coefficients().begin(), p.coefficients().end(),
                     [](const GaussRational& c) { return c.is_real(); });
}

/// Integer coefficients proportional to a polynomial with rational coefficients.
std::vector<mpz_class> integer_coefficients(const ExactEnergyPoly& p) {
  mpz_class lcm = 1;
  for (const auto& c : p.coefficients()) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), c.real().get_den_mpz_t());
  std::vector<mpz_class> out;
  mpz_class content = 0;
  for (const auto& c : p.coefficients()) {
    Rational scaled = c.real() * lcm;
    out.push_back(scaled.get_num());
    mpz_gcd(content.get_mpz_t(), content.get_mpz_t(), out.back().get_mpz_t());
  }
  if (content != 0) {
    for (auto& x : out) x /= content;
  }
  return out;
}

/// Positive divisors of |n| by trial division, or nullopt if |n| is too
/// large to factor this way.
std::optional<std::vector<mpz_class>> divisors(const mpz_class& n) {
  mpz_class m = abs(n);
  if (m == 0) return std::nullopt;
  std::vector<std::pair<mpz_class, unsigned>> factors;
  for (unsigned long p = 2; m > 1; ++p) {
    if (p > 2000000UL) {
      // Whatever remains is either prime or too large to split cheaply.
      if (mpz_probab_prime_p(m.get_mpz_t(), 25) == 0) return std::nullopt;
      factors.emplace_back(m, 1);
      break;
    }
    if (mpz_cmp_ui(m.get_mpz_t(), p * p) < 0) {
      factors.emplace_back(m, 1);
      break;
    }
    unsigned e = 0;
    while (mpz_divisible_ui_p(m.get_mpz_t(), p) != 0) {
      m /= p;
      ++e;
    }
    if (e) factors.emplace_back(mpz_class(p), e);
  }
  std::vector<mpz_class> out{1};
  for (const auto& [prime, e] : factors) {
    const std::size_t existing = out.size();
    mpz_class power = 1;
    for (unsigned k = 1; k <= e; ++k) {
      power *= prime;
      for (std::size_t i = 0; i < existing; ++i) out.push_back(out[i] * power);
    }
    if (out.size() > 200000) return std::nullopt;
  }
  return out;
}

ExactEnergyPoly deflate(const ExactEnergyPoly& p, const GaussRational& root) {
  return p.divmod(ExactEnergyPoly::linear_factor(root)).first;
}

std::optional<GaussRational> rational_root_search(const ExactEnergyPoly& p) {
  auto ints = integer_coefficients(p);
  auto num_divs = divisors(ints.front());
  auto den_divs = divisors(ints.back());
  if (!num_divs || !den_divs) return std::nullopt;
  if (num_divs->size() * den_divs->size() > 4000000) return std::nullopt;
  for (const auto& a : *num_divs) {
    for (const auto& b : *den_divs) {
      for (int sign : {1, -1}) {
        GaussRational candidate(Rational(a * sign, b), 0);
        if (p.evaluate(candidate).is_zero()) return candidate;
      }
    }
  }
  return std::nullopt;
}

/// Continued-fraction convergents of x with denominators up to max_den.
std::vector<Rational> convergents(double x, long max_den) {
  std::vector<Rational> out;
  if (!std::isfinite(x)) return out;
  mpz_class h_prev = 1, h = static_cast<long>(std::floor(x));
  mpz_class k_prev = 0, k = 1;
  out.emplace_back(h, k);
  double frac = x - std::floor(x);
  for (int iter = 0; iter < 40 && frac > 1e-15; ++iter) {
    const double inv = 1.0 / frac;
    const double a_d = std::floor(inv);
    if (a_d > 1e12) break;
    const mpz_class a = static_cast<long>(a_d);
    mpz_class h_next = a * h + h_prev;
    mpz_class k_next = a * k + k_prev;
    if (k_next > max_den) break;
    h_prev = h;
    h = h_next;
    k_prev = k;
    k = k_next;
    Rational q(h, k);
    q.canonicalize();
    out.push_back(q);
    frac = inv - a_d;
  }
  return out;
}

std::optional<GaussRational> reconstruct_root(const ExactEnergyPoly& p, Complex approx) {
  constexpr long kMaxDen = 10000000;
  const double tol = 1e-6 * (1.0 + std::abs(approx));
  auto re_candidates = convergents(approx.real(), kMaxDen);
  auto im_candidates = convergents(approx.imag(), kMaxDen);
  std::erase_if(re_candidates, [&](const Rational& q) { return std::abs(q.get_d() - approx.real()) > tol; });
  std::erase_if(im_candidates, [&](const Rational& q) { return std::abs(q.get_d() - approx.imag()) > tol; });
  for (const auto& re : re_candidates) {
    for (const auto& im : im_candidates) {
      GaussRational candidate(re, im);
      if (p.evaluate(candidate).is_zero()) return candidate;
    }
  }
  return std::nullopt;
}

}  // namespace

ExactEnergyPoly gcd_energy(std::span<const ExactEnergyPoly> polys) {
  if (polys.empty()) throw Error(ErrorKind::EmptyInput, "gcd of an empty set");
  ExactEnergyPoly g;
  for (const auto& p : polys) {
    ExactEnergyPoly a = g;
    ExactEnergyPoly b = p.monic();
    while (!b.is_zero()) {
      ExactEnergyPoly r = a.divmod(b).second;
      a = std::move(b);
      b = r.monic();
    }
    g = a.monic();
    if (g.degree() == 0) break;
  }
  return g;
}

std::vector<Complex> numeric_roots(const EnergyPoly<Complex>& p) {
  if (p.is_zero()) throw Error(ErrorKind::ZeroPolynomial, "roots of the zero polynomial");
  const int n = p.degree();
  if (n == 0) return {};
  const auto monic = p.monic();
  Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < n; ++i) companion(i, n - 1) = -monic.coefficient(static_cast<std::size_t>(i));
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, false);
  if (solver.info() != Eigen::Success) throw Error(ErrorKind::EigenSolverFailure, "companion matrix");
  const auto deriv = monic.derivative();
  std::vector<Complex> roots;
  for (int i = 0; i < n; ++i) {
    LongComplex r(solver.eigenvalues()[i]);
    for (int step = 0; step < 4; ++step) {
      const LongComplex f = monic.evaluate_numeric(r);
      const LongComplex df = deriv.evaluate_numeric(r);
      if (std::abs(df) == 0.0L) break;
      const LongComplex next = r - f / df;
      // Keep the eigenvalue when Newton wanders off near a multiple root.
      if (std::abs(monic.evaluate_numeric(next)) > std::abs(f)) break;
      r = next;
    }
    roots.emplace_back(static_cast<double>(r.real()), static_cast<double>(r.imag()));
  }
  std::sort(roots.begin(), roots.end(), [](const Complex& a, const Complex& b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  return roots;
}

EnergyRoots roots_energy(const ExactEnergyPoly& p) {
  if (p.is_zero()) throw Error(ErrorKind::ZeroPolynomial, "roots of the zero polynomial");
  EnergyRoots out;

  EnergyPoly<Complex> numeric_p;
  {
    std::vector<Complex> c;
    for (const auto& x : p.coefficients()) c.push_back(x.to_complex());
    numeric_p = EnergyPoly<Complex>(std::move(c));
  }
  out.numeric = numeric_roots(numeric_p);

  ExactEnergyPoly rest = p.monic();
  std::vector<GaussRational> found;
  while (rest.degree() >= 1 && rest.coefficient(0).is_zero()) {
    found.emplace_back(0);
    rest = deflate(rest, GaussRational(0));
  }
  while (rest.degree() >= 1) {
    if (rest.degree() == 1) {
      found.push_back(-rest.coefficient(0));
      break;
    }
    if (rest.degree() == 2) {
      // E^2 + bE + c = 0 with discriminant b^2 - 4c.
      const GaussRational b = rest.coefficient(1);
      const GaussRational c = rest.coefficient(0);
      GaussRational s;
      if (gauss_sqrt(b * b - GaussRational(4) * c, s)) {
        found.push_back((-b + s) / GaussRational(2));
        found.push_back((-b - s) / GaussRational(2));
      }
      break;
    }
    std::optional<GaussRational> root;
    if (all_real(rest)) root = rational_root_search(rest);
    if (!root) {
      std::vector<Complex> c;
      for (const auto& x : rest.coefficients()) c.push_back(x.to_complex());
      for (const auto& approx : numeric_roots(EnergyPoly<Complex>(std::move(c)))) {
        root = reconstruct_root(rest, approx);
        if (root) break;
      }
    }
    if (!root) break;
    found.push_back(*root);
    rest = deflate(rest, *root);
  }

  for (auto& r : found) {
    if (std::find(out.exact.begin(), out.exact.end(), r) == out.exact.end()) out.exact.push_back(r);
  }
  std::sort(out.exact.begin(), out.exact.end());
  return out;
}

}  // namespace flatband
