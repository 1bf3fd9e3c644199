#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <span>
#include <vector>

#include "flatband/graph_model.hpp"
#include "flatband/laurent.hpp"

namespace flatband {

using ComplexMatrix = Eigen::MatrixXcd;
using LongComplexMatrix = Eigen::Matrix<LongComplex, Eigen::Dynamic, Eigen::Dynamic>;

/// h_eps(z) = diag(V) + eps * sum_alpha z^alpha b_alpha, kept symbolically.
/// eps = 1 gives the plain fiber operator h(z).
class FiberMatrix {
 public:
  FiberMatrix(std::size_t rank, LaurentMatrix<GaussRational> hopping, Potential potential,
              GaussRational epsilon, double weight_bound);

  std::size_t rank() const noexcept { return rank_; }
  std::size_t size() const noexcept { return potential_.size(); }
  const Potential& potential() const noexcept { return potential_; }
  const GaussRational& epsilon() const noexcept { return epsilon_; }
  double weight_bound() const noexcept { return weight_bound_; }
  /// Unscaled off-potential part sum_alpha z^alpha (b_alpha)_{ij}.
  const ExactPoly& hopping(std::size_t i, std::size_t j) const { return hopping_(i, j); }

  ExactPoly entry(std::size_t i, std::size_t j) const;
  LaurentMatrix<GaussRational> entries() const;

  /// Real potential, real eps and b_alpha = conj(b_{-alpha})^T: h(z) is
  /// Hermitian on the torus.
  bool self_adjoint() const noexcept { return self_adjoint_; }

 private:
  std::size_t rank_;
  LaurentMatrix<GaussRational> hopping_;
  Potential potential_;
  GaussRational epsilon_;
  double weight_bound_;
  bool self_adjoint_;
};

/// Throws SizeMismatch when |V| != N.
FiberMatrix build_fiber(const ValidatedGraph& graph, const Potential& potential,
                        const GaussRational& epsilon = GaussRational(1));
inline FiberMatrix build_fiber(const ValidatedGraph& graph) { return build_fiber(graph, graph.potential()); }

/// h at z_k = exp(2 pi i theta_k).
ComplexMatrix eval_fiber(const FiberMatrix& fiber, std::span<const double> theta);
/// h at an arbitrary point of (C*)^d.
ComplexMatrix eval_fiber_at(const FiberMatrix& fiber, std::span<const Complex> z);
/// diag(V) + eps * hopping(z) in extended precision; the stored epsilon is
/// ignored in favour of `eps`.
LongComplexMatrix eval_scaled_fiber(const FiberMatrix& fiber, std::span<const LongComplex> z, LongComplex eps);

std::vector<Complex> torus_point(std::span<const double> theta);

struct BandSample {
  std::vector<std::vector<double>> grid;
  /// One row per grid point, N eigenvalues each; real and ascending when
  /// `sorted_real` is set.
  std::vector<std::vector<Complex>> values;
  bool sorted_real = false;
};

/// Tensor grid {0, 1/side, ..., (side-1)/side}^d.
std::vector<std::vector<double>> uniform_grid(std::size_t rank, std::size_t side);

/// Default grid side; odd to stay off the symmetric midpoints.
inline constexpr std::size_t kDefaultGridSide = 11;

BandSample band_sample(const FiberMatrix& fiber, const std::vector<std::vector<double>>& grid);

/// Eigenvalues of a dense matrix: real ascending (imaginary part zero) for
/// Hermitian input, unordered otherwise.
std::vector<Complex> spectrum(const ComplexMatrix& m, bool hermitian);

inline constexpr std::size_t kDefaultTorusCap = 4096;

/// Matrix of H restricted to the discrete torus (Z/LZ)^d, of size N L^d.
/// Index of (vertex i, cell c) is i * L^d + sum_k c_k L^k.
ComplexMatrix torus_matrix(const ValidatedGraph& graph, const Potential& potential, std::size_t cells_per_axis,
                           std::size_t cap = kDefaultTorusCap);

struct TorusCheck {
  bool passed = false;
  double max_deviation = 0.0;
  double tolerance = 0.0;
  std::size_t dimension = 0;
};

/// Compares the spectrum of the torus restriction with the union of
/// eig h(theta) over theta in {0, 1/L, ..., (L-1)/L}^d.
/// Throws DimensionTooLarge when N L^d exceeds `cap`.
TorusCheck finite_torus_check(const ValidatedGraph& graph, const Potential& potential, std::size_t cells_per_axis,
                              std::size_t cap = kDefaultTorusCap);

}  // namespace flatband
