#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "flatband/extremal_loops.hpp"
#include "flatband/flatband_detector.hpp"
#include "flatband/random.hpp"

namespace flatband::testing {

std::string fixture_path(const std::string& name);
ValidatedGraph load_fixture(const std::string& name);

/// Names of the fixture graphs used across the suites.
const std::vector<std::string>& fixture_names();

struct RandomSpecOptions {
  std::size_t max_size = 4;
  std::size_t max_rank = 2;
  /// Number of distinct shift vectors allowed across all terms.
  std::size_t max_shifts = 5;
  /// Gaussian-integer weights and complex potential when false.
  bool self_adjoint = true;
  bool require_connected = false;
};

/// Random validated spec with small integer weights and shifts in [-1, 1]^d.
ValidatedGraph random_spec(Rng& rng, const RandomSpecOptions& options);

/// Random exact potential with distinct entries, p/q with |p/q| <= 5, q <= 7.
Potential random_potential(Rng& rng, std::size_t size, bool real = true);

/// Lieb lattice with the given potential values.
ValidatedGraph lieb(const GaussRational& v1, const GaussRational& v2, const GaussRational& v3);

// Oracles below share nothing with the library's enumeration code.

/// Every simple base-loop of the given length by plain recursion over the
/// edge list: (interior vertices, quasimomentum, weight product).
struct OracleLoop {
  std::vector<std::size_t> interior;
  LatticeVector quasi;
  GaussRational weight;
};
std::vector<OracleLoop> oracle_simple_loops(const ValidatedGraph& g, std::size_t base, std::size_t length);

/// Symbolic expansion of the eigenvalue branch through V_base as a power
/// series in eps whose coefficients are polynomials in W_v = (V_base - V_v)^{-1}
/// and z. Solves Delta = sum_P eps^|P| z^q w(P) prod_n (W_n^{-1} + Delta)^{-1}
/// by fixed-point iteration up to `order`. Keys are (order, footprint, quasi).
using OracleSeries = std::map<std::pair<std::size_t, TableKey>, GaussRational>;
OracleSeries oracle_series(const ValidatedGraph& g, std::size_t base, std::size_t order);

/// det(h(z) - E) coefficients by expansion over permutations, computed
/// without the library's determinant code.
std::map<LatticeVector, std::vector<GaussRational>> oracle_char_split(const ValidatedGraph& g, const Potential& v);

}  // namespace flatband::testing
