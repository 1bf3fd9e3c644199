#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <vector>

#include "flatband/lattice.hpp"
#include "flatband/matrix.hpp"
#include "flatband/scalar.hpp"

namespace flatband {

/// One hopping term: the entry (b_shift)_{from,to}. Vertex indices are
/// 0-based here; the file formats use 1-based indices.
struct EdgeTerm {
  std::size_t from = 0;
  std::size_t to = 0;
  LatticeVector shift;
  GaussRational weight;

  friend bool operator==(const EdgeTerm&, const EdgeTerm&) = default;
};

struct Potential {
  std::vector<GaussRational> values;

  std::size_t size() const noexcept { return values.size(); }
  const GaussRational& operator[](std::size_t i) const { return values[i]; }
  /// min_{i<j} |V_i - V_j|; +inf for a single value.
  double separation() const;
  /// Membership in the class of potentials whose values are pairwise more than r apart.
  bool separated_by(double r) const { return separation() > r; }
  /// W_s = (V_base - V_s)^{-1}. Throws DegeneratePotential when V_s = V_base.
  GaussRational vertex_factor(std::size_t base, std::size_t s) const;
  double max_magnitude() const;
  bool is_real() const;
};

/// Raw quotient description as read from input, before validation.
struct PeriodicGraphSpec {
  std::size_t rank = 0;
  std::size_t size = 0;
  std::vector<EdgeTerm> edges;
  Potential potential;
};

/// A PeriodicGraphSpec whose invariants have been checked. Edge terms are
/// merged by (from, to, shift) and stored in that lexicographic order.
class ValidatedGraph {
 public:
  std::size_t rank() const noexcept { return rank_; }
  std::size_t size() const noexcept { return size_; }
  const std::vector<EdgeTerm>& edges() const noexcept { return edges_; }
  const Potential& potential() const noexcept { return potential_; }

  /// Edge terms leaving `vertex`, ordered by (to, shift).
  std::span<const EdgeTerm> out_edges(std::size_t vertex) const;

  /// Same graph with another potential. Throws SizeMismatch.
  ValidatedGraph with_potential(Potential potential) const;

  PeriodicGraphSpec to_spec() const;

 private:
  friend ValidatedGraph validate_spec(const PeriodicGraphSpec& spec);

  std::size_t rank_ = 0;
  std::size_t size_ = 0;
  std::vector<EdgeTerm> edges_;
  std::vector<std::size_t> out_offsets_;
  Potential potential_;
};

/// Checks weak symmetry, rank agreement and the absence of zero-shift
/// self-loops; merges duplicate terms, dropping exact-zero sums.
ValidatedGraph validate_spec(const PeriodicGraphSpec& spec);

struct QuotientGraph {
  std::size_t size = 0;
  std::vector<LatticeVector> shift_support;
  std::map<LatticeVector, Matrix<GaussRational>> matrices;
  /// Upper bound on every ||b_alpha||: max entry magnitude times N.
  double weight_bound = 0.0;
};

QuotientGraph quotient_matrices(const ValidatedGraph& graph);

struct QuotientComponent {
  std::vector<std::size_t> vertices;
  /// Hermite basis of the subgroup of Z^d generated by cycle quasimomenta.
  std::vector<LatticeVector> cycle_lattice;
  /// [Z^d : cycle lattice], 0 when the lattice has lower rank.
  std::int64_t index = 0;
};

struct ConnectivityReport {
  bool connected = false;
  std::vector<QuotientComponent> components;
};

/// The periodic graph is connected iff its quotient is connected and the
/// cycle quasimomenta generate all of Z^d.
ConnectivityReport is_gamma_connected(const ValidatedGraph& graph);

/// Component of the quotient containing `vertex`, with its cycle lattice.
QuotientComponent component_of(const ValidatedGraph& graph, std::size_t vertex);

struct MultiEdgeWitness {
  std::size_t from = 0;
  std::size_t to = 0;
  std::vector<LatticeVector> shifts;
};

struct MultiConnectivityReport {
  bool multi_connected = false;
  std::vector<MultiEdgeWitness> witnesses;
};

MultiConnectivityReport is_multi_connected(const ValidatedGraph& graph);

/// Real potential and (b_alpha)_{ij} = conj((b_{-alpha})_{ji}) for all entries.
bool is_self_adjoint(const ValidatedGraph& graph);

/// Adds (to, from, -shift, conj(weight)) for every term lacking a partner at
/// (to, from, -shift).
PeriodicGraphSpec autosymmetrize(PeriodicGraphSpec spec);

}  // namespace flatband
