#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "flatband/floquet.hpp"
#include "flatband/graph_model.hpp"
#include "flatband/laurent.hpp"

namespace flatband {

/// One hop of a loop, landing on `vertex` through the term (b_shift)_{prev,vertex}.
struct LoopStep {
  std::size_t vertex = 0;
  LatticeVector shift;
  GaussRational weight;

  friend bool operator==(const LoopStep&, const LoopStep&) = default;
};

/// Closed walk base -> n_1 -> ... -> n_{k-1} -> base whose interior avoids base.
struct SimpleLoop {
  std::size_t base = 0;
  std::vector<LoopStep> steps;

  std::size_t length() const noexcept { return steps.size(); }
  /// Interior occurrences are 0..length()-2; occurrence s is steps[s].vertex.
  std::size_t interior_count() const noexcept { return steps.empty() ? 0 : steps.size() - 1; }
  LatticeVector quasi() const;

  friend bool operator==(const SimpleLoop&, const SimpleLoop&) = default;
};

/// Multiplicity of every vertex; the base vertex always has multiplicity 0.
using Footprint = std::vector<std::uint32_t>;

std::size_t footprint_cardinality(const Footprint& f);
std::size_t footprint_distinct(const Footprint& f);
/// Exactly one element of multiplicity 1 and all others of multiplicity 2.
bool footprint_symmetric(const Footprint& f);

struct LoopStats {
  std::size_t length = 0;
  LatticeVector quasi;
  Footprint footprint;
  /// (-1)^(number of attachments)
  int sign = 1;
  GaussRational weight_product{1};
  std::size_t attachments = 0;
};

class LoopConfig;
using ConfigPtr = std::shared_ptr<const LoopConfig>;

/// A simple loop with ordered sequences of base-loop configurations attached
/// at interior occurrences. Each attachment duplicates the occurrence vertex
/// and contributes -W at it.
class LoopConfig {
 public:
  using Attachments = std::map<std::size_t, std::vector<ConfigPtr>>;

  LoopConfig(SimpleLoop root, Attachments attachments, std::size_t vertex_count);

  const SimpleLoop& root() const noexcept { return root_; }
  const Attachments& attachments() const noexcept { return attachments_; }
  std::size_t base() const noexcept { return root_.base; }
  /// Cached statistics, equal to loop_stats(*this).
  const LoopStats& stats() const noexcept { return stats_; }

  bool is_simple() const noexcept { return attachments_.empty(); }

  /// Preorder serialisation: steps as (vertex,shift) with 1-based vertices,
  /// attachments as @position[...] after the occurrence they hang from.
  std::string encode() const;

 private:
  SimpleLoop root_;
  Attachments attachments_;
  LoopStats stats_;
};

/// Recomputes the statistics from the tree.
LoopStats loop_stats(const LoopConfig& config, std::size_t vertex_count);

/// sign * weight_product * prod_v W_v^mult with W_v = (V_base - V_v)^{-1}.
GaussRational config_contribution(const LoopStats& stats, std::size_t base, const Potential& potential);

inline constexpr std::size_t kDefaultExplosionCap = 10'000'000;

/// Visits every simple base-loop of exactly `length` edges in canonical
/// (lexicographic on (vertex, shift)) order.
void for_each_simple_loop(const ValidatedGraph& graph, std::size_t base, std::size_t length,
                          const std::function<void(const SimpleLoop&)>& visit,
                          std::size_t cap = kDefaultExplosionCap);

/// All simple loops of length 1..max_length, by length then lexicographic.
std::vector<SimpleLoop> enumerate_simple_loops(const ValidatedGraph& graph, std::size_t base,
                                               std::size_t max_length, std::size_t cap = kDefaultExplosionCap);

/// Generates loop configurations of a fixed length, reusing the configs of
/// shorter lengths for attachments. Not thread-safe; create one per thread.
class ConfigEnumerator {
 public:
  ConfigEnumerator(const ValidatedGraph& graph, std::size_t base, std::size_t cap = kDefaultExplosionCap);

  void for_each(std::size_t length, const std::function<void(const ConfigPtr&)>& visit);
  std::vector<ConfigPtr> all(std::size_t length);

  std::size_t generated() const noexcept { return generated_; }

 private:
  const std::vector<ConfigPtr>& cached(std::size_t length);
  void count_one();

  const ValidatedGraph& graph_;
  std::size_t base_;
  std::size_t cap_;
  std::size_t generated_ = 0;
  std::map<std::size_t, std::vector<ConfigPtr>> cache_;
};

std::vector<ConfigPtr> enumerate_configs(const ValidatedGraph& graph, std::size_t base, std::size_t length,
                                         std::size_t cap = kDefaultExplosionCap);

/// eps^k coefficient of the eigenvalue branch through V_base: sum over
/// configs of length k of z^quasi * cont. Throws DegeneratePotential.
ExactPoly series_coefficient(const ValidatedGraph& graph, const Potential& potential, std::size_t base,
                             std::size_t order, std::size_t cap = kDefaultExplosionCap);

struct TableKey {
  Footprint footprint;
  LatticeVector quasi;

  friend bool operator==(const TableKey&, const TableKey&) = default;
  friend auto operator<=>(const TableKey&, const TableKey&) = default;
};

struct TableEntry {
  /// Sum of sign * weight_product over the configs of this class.
  GaussRational totalcont;
  std::size_t configs = 0;
  /// Exact cancellation: configs exist but totalcont is zero.
  bool cancelled() const { return totalcont.is_zero(); }
};

/// Configurations of one order grouped by (footprint, quasimomentum).
struct ResummedTable {
  std::size_t base = 0;
  std::size_t order = 0;
  std::map<TableKey, TableEntry> entries;
};

ResummedTable resummed_table(const ValidatedGraph& graph, std::size_t base, std::size_t order,
                             std::size_t cap = kDefaultExplosionCap);

/// sum_entries totalcont * W^footprint * z^quasi.
ExactPoly table_series_coefficient(const ResummedTable& table, const Potential& potential, std::size_t rank);

/// 0.01 * r / (N * M_b) with r the potential separation.
double heuristic_epsilon(const ValidatedGraph& graph, const Potential& potential);

struct SeriesCheck {
  std::vector<double> epsilons;
  std::vector<long double> errors;
  /// Least-squares slope of log error against log eps; NaN when every
  /// error is zero.
  double slope = 0.0;
};

/// Eigenvalue of h_eps(z) continued from V_base at eps = 0 by nearest-
/// neighbour tracking along the segment [0, eps].
LongComplex track_branch(const FiberMatrix& fiber, std::size_t base, std::span<const LongComplex> z, LongComplex eps,
                         std::size_t steps = 64);

/// Compares the truncated series S_K(eps) against the tracked eigenvalue for
/// each eps. Requires a separated potential, decreasing epsilons below the
/// heuristic bound and 1/2 <= |z_k| <= 2.
SeriesCheck series_vs_eigenvalue_check(const ValidatedGraph& graph, const Potential& potential, std::size_t base,
                                       std::size_t order, std::span<const double> epsilons,
                                       std::span<const Complex> z);

/// Estimates the first `order` Taylor coefficients of the tracked branch by
/// a discrete Cauchy integral on |eps| = radius, Richardson-extrapolated
/// against radius / 2.
std::vector<LongComplex> estimate_branch_coefficients(const FiberMatrix& fiber, std::size_t base,
                                                      std::span<const LongComplex> z, std::size_t order, double radius,
                                                      std::size_t nodes = 16);

}  // namespace flatband
