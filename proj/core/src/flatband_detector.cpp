#include "flatband/flatband_detector.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace flatband {

namespace {

std::vector<std::pair<LatticeVector, double>> residuals_at(const CharSplit<GaussRational>& split, Complex energy) {
  std::vector<std::pair<LatticeVector, double>> out;
  for (const auto& [alpha, q] : split) out.emplace_back(alpha, std::abs(q.evaluate_numeric(energy)));
  return out;
}

std::vector<Complex> random_point(Rng& rng, std::size_t rank, double lo, double hi) {
  std::vector<Complex> z;
  for (std::size_t k = 0; k < rank; ++k) {
    const double r = rng.uniform_real(lo, hi);
    const double phase = rng.uniform_real(0.0, 2.0 * std::numbers::pi);
    z.push_back(std::polar(r, phase));
  }
  return z;
}

Complex shifted_det(const FiberMatrix& fiber, std::span<const Complex> z, Complex energy) {
  ComplexMatrix m = eval_fiber_at(fiber, z);
  m -= energy * ComplexMatrix::Identity(m.rows(), m.cols());
  return m.partialPivLu().determinant();
}

}  // namespace

CharSplit<GaussRational> char_split(const FiberMatrix& fiber) {
  return characteristic_split(fiber.entries(), fiber.rank());
}

FlatBandReport flat_band_energies(const FiberMatrix& fiber) {
  const auto split = char_split(fiber);
  std::vector<ExactEnergyPoly> parts;
  parts.reserve(split.size());
  for (const auto& [alpha, q] : split) parts.push_back(q);

  FlatBandReport report;
  report.method = DetectionMethod::Exact;
  report.gcd = gcd_energy(parts);
  report.gcd_degree = report.gcd.degree();
  if (report.gcd_degree <= 0) return report;

  const auto roots = roots_energy(report.gcd);
  for (const auto& r : roots.exact) {
    FlatBandEnergy e;
    e.value = r.to_complex();
    e.exact = r;
    for (const auto& [alpha, q] : split) {
      const GaussRational v = q.evaluate(r);
      e.residuals.emplace_back(alpha, v.abs());
    }
    report.energies.push_back(std::move(e));
  }
  // Roots we could not pin down in Q(i) are still reported, flagged inexact.
  for (const auto& approx : roots.numeric) {
    const double tol = 1e-6 * (1.0 + std::abs(approx));
    const bool known = std::any_of(report.energies.begin(), report.energies.end(),
                                   [&](const FlatBandEnergy& e) { return std::abs(e.value - approx) <= tol; });
    if (known) continue;
    FlatBandEnergy e;
    e.value = approx;
    e.residuals = residuals_at(split, approx);
    report.energies.push_back(std::move(e));
  }
  return report;
}

bool is_flat_band(const FiberMatrix& fiber, const GaussRational& energy) {
  for (const auto& [alpha, q] : char_split(fiber)) {
    if (!q.evaluate(energy).is_zero()) return false;
  }
  return true;
}

std::size_t default_sample_count(const FiberMatrix& fiber) {
  const auto split = char_split(fiber);
  std::int64_t span = 0;
  for (std::size_t k = 0; k < fiber.rank(); ++k) {
    std::int64_t lo = 0;
    std::int64_t hi = 0;
    for (const auto& [alpha, q] : split) {
      lo = std::min(lo, alpha[k]);
      hi = std::max(hi, alpha[k]);
    }
    span = std::max(span, hi - lo);
  }
  return static_cast<std::size_t>(2 * span + 1);
}

double sampled_threshold(const FiberMatrix& fiber, Complex energy) {
  const double n = static_cast<double>(fiber.size());
  return 1e-8 * std::pow(1.0 + std::abs(energy), n) * std::pow(1.0 + fiber.weight_bound(), n);
}

bool is_flat_band_sampled(const FiberMatrix& fiber, Complex energy, const SamplingOptions& options) {
  const std::size_t samples = options.samples ? options.samples : default_sample_count(fiber);
  const double threshold = sampled_threshold(fiber, energy);
  Rng rng(options.seed);
  for (std::size_t s = 0; s < samples; ++s) {
    const auto z = random_point(rng, fiber.rank(), options.min_modulus, options.max_modulus);
    if (std::abs(shifted_det(fiber, z, energy)) > threshold) return false;
  }
  return true;
}

FlatBandReport flat_band_energies_sampled(const FiberMatrix& fiber, const SamplingOptions& options) {
  FlatBandReport report;
  report.method = DetectionMethod::Sampled;
  report.seed = options.seed;
  Rng rng(options.seed ^ 0x9e3779b97f4a7c15ULL);
  std::vector<Complex> z;
  if (fiber.self_adjoint()) {
    // Hermitian point on the torus keeps the candidate eigenvalues accurate.
    for (std::size_t k = 0; k < fiber.rank(); ++k) {
      z.push_back(std::polar(1.0, rng.uniform_real(0.0, 2.0 * std::numbers::pi)));
    }
  } else {
    z = random_point(rng, fiber.rank(), options.min_modulus, options.max_modulus);
  }
  const auto candidates = spectrum(eval_fiber_at(fiber, z), fiber.self_adjoint());
  const auto split = char_split(fiber);
  for (const auto& candidate : candidates) {
    if (!is_flat_band_sampled(fiber, candidate, options)) continue;
    ++report.gcd_degree;
    const double tol = 1e-6 * (1.0 + std::abs(candidate));
    const bool known = std::any_of(report.energies.begin(), report.energies.end(),
                                   [&](const FlatBandEnergy& e) { return std::abs(e.value - candidate) <= tol; });
    if (known) continue;
    FlatBandEnergy e;
    e.value = candidate;
    e.residuals = residuals_at(split, candidate);
    report.energies.push_back(std::move(e));
  }
  return report;
}

PotentialSampler uniform_rational_sampler(std::size_t size, std::int64_t lo, std::int64_t hi, std::int64_t max_den) {
  if (lo > hi || max_den < 1) throw Error(ErrorKind::InvalidArgument, "empty sampler range");
  return [=](Rng& rng) {
    Potential v;
    for (std::size_t i = 0; i < size; ++i) {
      const std::int64_t den = rng.uniform_int(1, max_den);
      const std::int64_t num = rng.uniform_int(lo * den, hi * den);
      Rational q(static_cast<long>(num), static_cast<unsigned long>(den));
      q.canonicalize();
      v.values.emplace_back(q, 0);
    }
    return v;
  };
}

ProbeSummary genericity_probe(const ValidatedGraph& graph, const PotentialSampler& sampler, std::size_t trials,
                              std::uint64_t seed) {
  ProbeSummary summary;
  summary.trials = trials;
  summary.seed = seed;
  Rng rng(seed);
  for (std::size_t t = 0; t < trials; ++t) {
    Potential v = sampler(rng);
    const auto report = flat_band_energies(build_fiber(graph, v));
    if (report.energies.empty()) continue;
    ++summary.hits;
    summary.witnesses.push_back({t, std::move(v), report.energies});
  }
  return summary;
}

}  // namespace flatband
