#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "flatband/extremal_loops.hpp"
#include "flatband/flatband_detector.hpp"

namespace flatband::cli {

inline const std::vector<std::string> kVerbs = {"validate", "connectivity", "bands",       "flatband", "loops",
                                                "extremal", "certify",      "series-check", "probe"};

struct Options {
  std::size_t grid = kDefaultGridSide;
  std::string epsilon = "1";
  bool sampled = false;
  /// 1-based; all vertices when unset (extremal, certify).
  std::optional<std::size_t> base;
  std::size_t order = 2;
  std::size_t trials = 1000;
  std::uint64_t seed = 1;
  /// 0 selects the default sample count.
  std::size_t samples = 0;
};

struct Command {
  std::string verb;
  std::string input;
  Options options;
  /// Empty for standard output.
  std::string output;
};

/// Reads a graph-spec JSON document. Throws ParseError naming the field.
PeriodicGraphSpec load_spec(const std::string& path);
PeriodicGraphSpec parse_spec(const nlohmann::json& doc);

GaussRational parse_scalar(const nlohmann::json& value, const std::string& field);

nlohmann::json exact_json(const GaussRational& x);
nlohmann::json numeric_json(Complex x);
nlohmann::json footprint_json(const Footprint& f);
nlohmann::json lattice_json(const LatticeVector& v);

/// Executes the command, writing the report to `out` and diagnostics to
/// `err`. Returns 0 on success, 1 on a domain error, 2 on an input error.
int run(const Command& cmd, std::ostream& out, std::ostream& err);

}  // namespace flatband::cli
