#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "flatband/loop_calculus.hpp"

namespace flatband {

struct ExtremalSearch {
  std::size_t base = 0;
  /// Minimal length of a base-loop with nonzero quasimomentum.
  std::size_t length = 0;
  /// Minimal number of distinct footprint elements among those loops.
  std::size_t distinct = 0;
  /// Simple loops of that length and distinct count, in canonical order.
  std::vector<ConfigPtr> extremals;
};

/// Iterative deepening over simple loops up to 2N - 1, which is enough
/// whenever the component of `base` has a nonzero cycle quasimomentum.
/// Throws NoNonzeroQuasiLoop otherwise.
ExtremalSearch extremal_search(const ValidatedGraph& graph, std::size_t base, std::size_t cap = kDefaultExplosionCap);

struct SymmetricSearch {
  std::size_t length = 0;
  std::vector<ConfigPtr> configs;
};

/// Minimal-length configs with nonzero quasimomentum whose footprint has one
/// element of multiplicity 1 and all others of multiplicity 2, searching
/// lengths 1..max_length. Throws NoneFound when there are none.
SymmetricSearch symmetric_extremal_search(const ValidatedGraph& graph, std::size_t base, std::size_t max_length,
                                          std::size_t cap = kDefaultExplosionCap);

struct CancellationCheck {
  bool unique = false;
  /// Other configs of the same length, footprint and quasimomentum.
  std::vector<ConfigPtr> competitors;
};

/// Requires a nonzero quasimomentum (InvalidArgument otherwise).
CancellationCheck non_cancelable_check(const ValidatedGraph& graph, const LoopConfig& config,
                                       std::size_t cap = kDefaultExplosionCap);

enum class CertificateBranch { Extremal, Symmetric };

std::string branch_name(CertificateBranch b);

struct Certificate {
  std::size_t base = 0;
  std::size_t extremal_length = 0;
  CertificateBranch branch = CertificateBranch::Extremal;
  Footprint footprint;
  LatticeVector quasi;
  GaussRational totalcont;
  /// Symmetric branch only: every candidate sharing the maximal |quasi|.
  std::vector<TableKey> ties;
};

/// An exact-nonzero resummed entry with nonzero quasimomentum: first at the
/// extremal order L, then at order L + 1 among symmetric footprints, taking
/// the largest |quasi|. Throws ObstructionNotFound.
Certificate verify_obstruction(const ValidatedGraph& graph, std::size_t base, std::size_t cap = kDefaultExplosionCap);

struct DisjunctionReport {
  std::size_t base = 0;
  std::size_t extremal_length = 0;
  bool all_extremals_unique = false;
  /// Set when some minimal symmetric extremal of length <= L + 1 is unique.
  std::optional<ConfigPtr> unique_symmetric;
  /// Extremals that have competitors.
  std::vector<ConfigPtr> cancelable_extremals;

  bool holds() const { return all_extremals_unique || unique_symmetric.has_value(); }
};

/// Either every extremal loop is non-cancelable, or a symmetric extremal
/// loop of length at most L + 1 is.
DisjunctionReport obstruction_disjunction(const ValidatedGraph& graph, std::size_t base,
                                          std::size_t cap = kDefaultExplosionCap);

struct PermutationBlock {
  /// 1-based inclusive interval.
  std::size_t first = 0;
  std::size_t last = 0;
  bool reflected = false;

  friend bool operator==(const PermutationBlock&, const PermutationBlock&) = default;
};

struct InversionViolation {
  std::size_t i = 0;
  std::size_t j = 0;

  friend bool operator==(const InversionViolation&, const InversionViolation&) = default;
};

using PermutationDecomposition = std::variant<std::vector<PermutationBlock>, InversionViolation>;

/// Every inversion i < j with sigma(i) > sigma(j) has sigma(i) - sigma(j) = j - i.
bool special_permutation_hypothesis(const std::vector<std::size_t>& sigma);

/// Each block is mapped onto itself, identically or reversed.
bool decomposition_valid(const std::vector<std::size_t>& sigma, const std::vector<PermutationBlock>& blocks);

/// sigma is given as the images of 1..n. Returns maximal identity /
/// reflection intervals when the hypothesis holds, else the first violating
/// inversion. Throws InvalidArgument when sigma is not a permutation.
PermutationDecomposition special_permutation_decompose(const std::vector<std::size_t>& sigma);

/// Greedy interval split used by the decomposition, without checking the
/// hypothesis first.
std::vector<PermutationBlock> greedy_blocks(const std::vector<std::size_t>& sigma);

}  // namespace flatband
