#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "flatband/floquet.hpp"
#include "flatband/random.hpp"

namespace flatband {

struct FlatBandEnergy {
  Complex value;
  /// Set when the energy was certified exactly in Q(i).
  std::optional<GaussRational> exact;
  /// |q_alpha(E)| for every alpha in the characteristic split (exact energies
  /// give exact zeros here).
  std::vector<std::pair<LatticeVector, double>> residuals;
};

enum class DetectionMethod { Exact, Sampled };

struct FlatBandReport {
  DetectionMethod method = DetectionMethod::Exact;
  std::vector<FlatBandEnergy> energies;
  /// gcd of all q_alpha; only meaningful for the exact method.
  ExactEnergyPoly gcd;
  int gcd_degree = 0;
  std::uint64_t seed = 0;
};

/// Coefficients q_alpha(E) of z^alpha in det(h(z) - E).
CharSplit<GaussRational> char_split(const FiberMatrix& fiber);

/// Roots of gcd_alpha q_alpha: an energy is a flat band iff it is an
/// eigenvalue of h(z) for every z, iff it annihilates every q_alpha.
FlatBandReport flat_band_energies(const FiberMatrix& fiber);

/// Exact test: q_alpha(E) = 0 for every alpha.
bool is_flat_band(const FiberMatrix& fiber, const GaussRational& energy);

struct SamplingOptions {
  /// 0 selects default_sample_count().
  std::size_t samples = 0;
  std::uint64_t seed = 1;
  double min_modulus = 0.5;
  double max_modulus = 2.0;
};

/// 2 * (widest exponent range of det(h(z) - E) over any z_k) + 1.
std::size_t default_sample_count(const FiberMatrix& fiber);

/// Vanishing threshold for |det(h(z) - E)|: 1e-8 (1+|E|)^N (1+M_b)^N.
double sampled_threshold(const FiberMatrix& fiber, Complex energy);

/// Numeric test: det(h(z) - E) vanishes at seeded random z on the
/// polyannulus min_modulus <= |z_k| <= max_modulus.
bool is_flat_band_sampled(const FiberMatrix& fiber, Complex energy, const SamplingOptions& options = {});

/// Numeric detection: eigenvalues of h at one random point are the
/// candidates, each kept iff is_flat_band_sampled accepts it.
FlatBandReport flat_band_energies_sampled(const FiberMatrix& fiber, const SamplingOptions& options = {});

using PotentialSampler = std::function<Potential(Rng&)>;

/// Independent uniform rationals p/q in [lo, hi] with 1 <= q <= max_den.
PotentialSampler uniform_rational_sampler(std::size_t size, std::int64_t lo, std::int64_t hi,
                                          std::int64_t max_den = 1000);

struct ProbeWitness {
  std::size_t trial = 0;
  Potential potential;
  std::vector<FlatBandEnergy> energies;
};

struct ProbeSummary {
  std::size_t trials = 0;
  std::size_t hits = 0;
  std::uint64_t seed = 0;
  std::vector<ProbeWitness> witnesses;
};

/// Runs the exact detector on `trials` sampled potentials.
ProbeSummary genericity_probe(const ValidatedGraph& graph, const PotentialSampler& sampler, std::size_t trials,
                              std::uint64_t seed);

}  // namespace flatband
