#include "flatband/floquet.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace flatband {

namespace {

bool hopping_hermitian(const LaurentMatrix<GaussRational>& hopping) {
  const std::size_t n = hopping.rows();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const auto& a = hopping(i, j);
      const auto& b = hopping(j, i);
      if (a.term_count() != b.term_count()) return false;
      for (const auto& [e, c] : a.terms()) {
        if (b.coefficient(-e) != c.conj()) return false;
      }
    }
  }
  return true;
}

std::size_t ipow(std::size_t base, std::size_t exp) {
  std::size_t r = 1;
  for (std::size_t k = 0; k < exp; ++k) r *= base;
  return r;
}

/// Max deviation after matching two eigenvalue multisets of equal size.
double matched_deviation(std::vector<Complex> a, std::vector<Complex> b, bool real) {
  auto lex = [](const Complex& x, const Complex& y) {
    return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag();
  };
  std::sort(a.begin(), a.end(), lex);
  std::sort(b.begin(), b.end(), lex);
  double worst = 0.0;
  if (real) {
    for (std::size_t k = 0; k < a.size(); ++k) worst = std::max(worst, std::abs(a[k] - b[k]));
    return worst;
  }
  std::vector<bool> used(b.size(), false);
  for (const auto& x : a) {
    std::size_t best = b.size();
    double best_d = 0.0;
    for (std::size_t k = 0; k < b.size(); ++k) {
      if (used[k]) continue;
      const double d = std::abs(x - b[k]);
      if (best == b.size() || d < best_d) {
        best = k;
        best_d = d;
      }
    }
    used[best] = true;
    worst = std::max(worst, best_d);
  }
  return worst;
}

}  // namespace

FiberMatrix::FiberMatrix(std::size_t rank, LaurentMatrix<GaussRational> hopping, Potential potential,
                         GaussRational epsilon, double weight_bound)
    : rank_(rank),
      hopping_(std::move(hopping)),
      potential_(std::move(potential)),
      epsilon_(std::move(epsilon)),
      weight_bound_(weight_bound) {
  self_adjoint_ = potential_.is_real() && epsilon_.is_real() && hopping_hermitian(hopping_);
}

ExactPoly FiberMatrix::entry(std::size_t i, std::size_t j) const {
  ExactPoly out = hopping_(i, j).scaled(epsilon_);
  if (i == j) out += ExactPoly::constant(rank_, potential_[i]);
  return out;
}

LaurentMatrix<GaussRational> FiberMatrix::entries() const {
  const std::size_t n = size();
  LaurentMatrix<GaussRational> m(n, n, ExactPoly(rank_));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) m(i, j) = entry(i, j);
  }
  return m;
}

FiberMatrix build_fiber(const ValidatedGraph& graph, const Potential& potential, const GaussRational& epsilon) {
  if (potential.size() != graph.size()) {
    throw Error(ErrorKind::SizeMismatch, "potential has " + std::to_string(potential.size()) +
                                             " values, graph has " + std::to_string(graph.size()));
  }
  const std::size_t n = graph.size();
  LaurentMatrix<GaussRational> hopping(n, n, ExactPoly(graph.rank()));
  for (const auto& e : graph.edges()) hopping(e.from, e.to).add_term(e.shift, e.weight);
  return FiberMatrix(graph.rank(), std::move(hopping), potential, epsilon, quotient_matrices(graph).weight_bound);
}

std::vector<Complex> torus_point(std::span<const double> theta) {
  std::vector<Complex> z;
  z.reserve(theta.size());
  for (double t : theta) z.push_back(std::polar(1.0, 2.0 * std::numbers::pi * t));
  return z;
}

ComplexMatrix eval_fiber_at(const FiberMatrix& fiber, std::span<const Complex> z) {
  const auto n = static_cast<Eigen::Index>(fiber.size());
  ComplexMatrix m(n, n);
  const Complex eps = fiber.epsilon().to_complex();
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const auto& h = fiber.hopping(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
      m(i, j) = h.is_zero() ? Complex(0.0) : eps * h.evaluate_numeric<double>(z);
    }
    m(i, i) += fiber.potential()[static_cast<std::size_t>(i)].to_complex();
  }
  return m;
}

ComplexMatrix eval_fiber(const FiberMatrix& fiber, std::span<const double> theta) {
  const auto z = torus_point(theta);
  return eval_fiber_at(fiber, z);
}

LongComplexMatrix eval_scaled_fiber(const FiberMatrix& fiber, std::span<const LongComplex> z, LongComplex eps) {
  const auto n = static_cast<Eigen::Index>(fiber.size());
  LongComplexMatrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const auto& h = fiber.hopping(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
      m(i, j) = h.is_zero() ? LongComplex(0) : eps * h.evaluate_numeric<long double>(z);
    }
    m(i, i) += fiber.potential()[static_cast<std::size_t>(i)].to_long_complex();
  }
  return m;
}

std::vector<std::vector<double>> uniform_grid(std::size_t rank, std::size_t side) {
  if (side == 0) throw Error(ErrorKind::InvalidArgument, "grid side must be positive");
  const std::size_t count = ipow(side, rank);
  std::vector<std::vector<double>> grid;
  grid.reserve(count);
  for (std::size_t idx = 0; idx < count; ++idx) {
    std::vector<double> p(rank);
    std::size_t rest = idx;
    for (std::size_t k = rank; k-- > 0;) {
      p[k] = static_cast<double>(rest % side) / static_cast<double>(side);
      rest /= side;
    }
    grid.push_back(std::move(p));
  }
  return grid;
}

std::vector<Complex> spectrum(const ComplexMatrix& m, bool hermitian) {
  std::vector<Complex> out;
  if (hermitian) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(m, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw Error(ErrorKind::EigenSolverFailure, "Hermitian eigen-solve");
    for (Eigen::Index k = 0; k < solver.eigenvalues().size(); ++k) out.emplace_back(solver.eigenvalues()[k], 0.0);
  } else {
    Eigen::ComplexEigenSolver<ComplexMatrix> solver(m, false);
    if (solver.info() != Eigen::Success) throw Error(ErrorKind::EigenSolverFailure, "complex eigen-solve");
    for (Eigen::Index k = 0; k < solver.eigenvalues().size(); ++k) out.push_back(solver.eigenvalues()[k]);
  }
  return out;
}

BandSample band_sample(const FiberMatrix& fiber, const std::vector<std::vector<double>>& grid) {
  BandSample sample;
  sample.grid = grid;
  sample.sorted_real = fiber.self_adjoint();
  sample.values.reserve(grid.size());
  for (const auto& theta : grid) {
    if (theta.size() != fiber.rank()) throw Error(ErrorKind::RankMismatch, "grid point of wrong dimension");
    sample.values.push_back(spectrum(eval_fiber(fiber, theta), fiber.self_adjoint()));
  }
  return sample;
}

ComplexMatrix torus_matrix(const ValidatedGraph& graph, const Potential& potential, std::size_t cells_per_axis,
                           std::size_t cap) {
  if (cells_per_axis == 0) throw Error(ErrorKind::InvalidArgument, "torus side must be positive");
  if (potential.size() != graph.size()) throw Error(ErrorKind::SizeMismatch, "potential size");
  const std::size_t d = graph.rank();
  const std::size_t cells = ipow(cells_per_axis, d);
  const std::size_t dim = graph.size() * cells;
  if (dim > cap || cells == 0) {
    throw Error(ErrorKind::DimensionTooLarge,
                "torus dimension " + std::to_string(dim) + " exceeds cap " + std::to_string(cap));
  }
  const auto L = static_cast<std::int64_t>(cells_per_axis);
  ComplexMatrix h = ComplexMatrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (std::size_t i = 0; i < graph.size(); ++i) {
    for (std::size_t c = 0; c < cells; ++c) {
      const auto idx = static_cast<Eigen::Index>(i * cells + c);
      h(idx, idx) += potential[i].to_complex();
    }
  }
  std::vector<std::int64_t> cell(d);
  for (const auto& e : graph.edges()) {
    const Complex w = e.weight.to_complex();
    for (std::size_t c = 0; c < cells; ++c) {
      std::size_t rest = c;
      std::size_t target = 0;
      std::size_t stride = 1;
      for (std::size_t k = 0; k < d; ++k) {
        const auto ck = static_cast<std::int64_t>(rest % cells_per_axis);
        rest /= cells_per_axis;
        const std::int64_t moved = ((ck + e.shift[k]) % L + L) % L;
        target += static_cast<std::size_t>(moved) * stride;
        stride *= cells_per_axis;
      }
      h(static_cast<Eigen::Index>(e.from * cells + c), static_cast<Eigen::Index>(e.to * cells + target)) += w;
    }
  }
  return h;
}

TorusCheck finite_torus_check(const ValidatedGraph& graph, const Potential& potential, std::size_t cells_per_axis,
                              std::size_t cap) {
  const ComplexMatrix h = torus_matrix(graph, potential, cells_per_axis, cap);
  const FiberMatrix fiber = build_fiber(graph, potential);
  const bool hermitian = fiber.self_adjoint();

  TorusCheck check;
  check.dimension = static_cast<std::size_t>(h.rows());
  const auto torus = spectrum(h, hermitian);
  std::vector<Complex> fibers;
  for (const auto& theta : uniform_grid(graph.rank(), cells_per_axis)) {
    auto eig = spectrum(eval_fiber(fiber, theta), hermitian);
    fibers.insert(fibers.end(), eig.begin(), eig.end());
  }
  check.max_deviation = matched_deviation(torus, fibers, hermitian);
  check.tolerance = 1e-8 * (1.0 + potential.max_magnitude() + fiber.weight_bound());
  check.passed = check.max_deviation <= check.tolerance;
  return check;
}

}  // namespace flatband
