#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>

namespace flatband::cli {

using nlohmann::json;

namespace {

[[noreturn]] void bad_input(const std::string& detail) { throw Error(ErrorKind::ParseError, detail); }

const json& require(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) bad_input(where + ": missing field '" + key + "'");
  return obj.at(key);
}

std::int64_t as_int(const json& v, const std::string& field) {
  if (!v.is_number_integer()) bad_input(field + ": expected an integer");
  return v.get<std::int64_t>();
}

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

json config_json(const LoopConfig& c) {
  const auto& s = c.stats();
  json steps = json::array();
  for (const auto& st : c.root().steps) {
    steps.push_back({{"to", st.vertex + 1}, {"shift", lattice_json(st.shift)}, {"weight", exact_json(st.weight)}});
  }
  return {{"encoding", c.encode()},
          {"length", s.length},
          {"steps", steps},
          {"attachments", s.attachments},
          {"quasi", lattice_json(s.quasi)},
          {"footprint", footprint_json(s.footprint)},
          {"sign", s.sign},
          {"weight_product", exact_json(s.weight_product)}};
}

json energy_json(const FlatBandEnergy& e) {
  return {{"energy", e.exact ? exact_json(*e.exact) : numeric_json(e.value)}, {"exact", e.exact.has_value()}};
}

std::vector<std::size_t> bases_for(const Options& o, const ValidatedGraph& g) {
  if (o.base) return {*o.base - 1};
  std::vector<std::size_t> all(g.size());
  for (std::size_t j = 0; j < g.size(); ++j) all[j] = j;
  return all;
}

void check_options(const Command& cmd) {
  if (std::find(kVerbs.begin(), kVerbs.end(), cmd.verb) == kVerbs.end()) bad_input("unknown verb '" + cmd.verb + "'");
  const auto& o = cmd.options;
  if (o.grid == 0) bad_input("--grid must be positive");
  if (o.order == 0) bad_input("--order must be positive");
  if (o.base && *o.base == 0) bad_input("--base is 1-based");
  if (cmd.verb == "probe" && o.trials == 0) bad_input("--trials must be positive");
}

GaussRational parse_epsilon(const std::string& text) {
  try {
    return GaussRational::parse(text);
  } catch (const Error&) {
    bad_input("--epsilon: malformed number '" + text + "'");
  }
}

json do_validate(const ValidatedGraph& g) {
  return {{"valid", true},
          {"d", g.rank()},
          {"n", g.size()},
          {"edges", g.edges().size()},
          {"self_adjoint", is_self_adjoint(g)}};
}

json do_connectivity(const ValidatedGraph& g) {
  const auto conn = is_gamma_connected(g);
  const auto multi = is_multi_connected(g);
  json comps = json::array();
  for (const auto& c : conn.components) {
    json verts = json::array();
    for (auto v : c.vertices) verts.push_back(v + 1);
    json basis = json::array();
    for (const auto& b : c.cycle_lattice) basis.push_back(lattice_json(b));
    comps.push_back({{"vertices", verts}, {"cycle_lattice", basis}, {"index", c.index}});
  }
  json witnesses = json::array();
  for (const auto& w : multi.witnesses) {
    json shifts = json::array();
    for (const auto& s : w.shifts) shifts.push_back(lattice_json(s));
    witnesses.push_back({{"from", w.from + 1}, {"to", w.to + 1}, {"shifts", shifts}});
  }
  return {{"connected", conn.connected},
          {"components", comps},
          {"multi_connected", multi.multi_connected},
          {"multi_edges", witnesses}};
}

void do_bands(const ValidatedGraph& g, const Options& o, std::ostream& out) {
  const auto fiber = build_fiber(g, g.potential(), parse_epsilon(o.epsilon));
  const auto sample = band_sample(fiber, uniform_grid(g.rank(), o.grid));
  const bool with_imag = !sample.sorted_real;
  std::string header;
  for (std::size_t k = 1; k <= g.rank(); ++k) header += (k > 1 ? ",theta_" : "theta_") + std::to_string(k);
  for (std::size_t k = 1; k <= g.size(); ++k) header += ",E_" + std::to_string(k);
  if (with_imag) {
    for (std::size_t k = 1; k <= g.size(); ++k) header += ",ImE_" + std::to_string(k);
  }
  out << header << '\n';
  for (std::size_t p = 0; p < sample.grid.size(); ++p) {
    std::string row;
    for (std::size_t k = 0; k < sample.grid[p].size(); ++k) row += (k ? "," : "") + fmt17(sample.grid[p][k]);
    auto values = sample.values[p];
    if (with_imag) {
      std::sort(values.begin(), values.end(), [](const Complex& a, const Complex& b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
      });
    }
    for (const auto& e : values) row += "," + fmt17(e.real());
    if (with_imag) {
      for (const auto& e : values) row += "," + fmt17(e.imag());
    }
    out << row << '\n';
  }
}

json do_flatband(const ValidatedGraph& g, const Options& o) {
  const auto fiber = build_fiber(g, g.potential(), parse_epsilon(o.epsilon));
  json doc;
  json bands = json::array();
  if (o.sampled) {
    SamplingOptions so;
    so.seed = o.seed;
    so.samples = o.samples;
    const auto report = flat_band_energies_sampled(fiber, so);
    for (const auto& e : report.energies) bands.push_back(energy_json(e));
    doc = {{"flat_bands", bands}, {"gcd_degree", report.gcd_degree}, {"method", "sampled"}, {"seed", o.seed}};
  } else {
    const auto report = flat_band_energies(fiber);
    for (const auto& e : report.energies) bands.push_back(energy_json(e));
    doc = {{"flat_bands", bands}, {"gcd_degree", report.gcd_degree}, {"method", "exact"}};
  }
  return doc;
}

json do_loops(const ValidatedGraph& g, const Options& o) {
  const std::size_t base = o.base.value_or(1) - 1;
  const auto table = resummed_table(g, base, o.order);
  json entries = json::array();
  for (const auto& [key, entry] : table.entries) {
    entries.push_back({{"footprint", footprint_json(key.footprint)},
                       {"quasi", lattice_json(key.quasi)},
                       {"totalcont", exact_json(entry.totalcont)},
                       {"configs", entry.configs},
                       {"cancelled", entry.cancelled()}});
  }
  return {{"base", base + 1}, {"order", o.order}, {"entries", entries}};
}

json do_extremal(const ValidatedGraph& g, const Options& o) {
  json doc = json::array();
  for (auto base : bases_for(o, g)) {
    const auto search = extremal_search(g, base);
    json ext = json::array();
    for (const auto& c : search.extremals) ext.push_back(config_json(*c));
    json sym = nullptr;
    try {
      const auto s = symmetric_extremal_search(g, base, search.length + 1);
      json configs = json::array();
      for (const auto& c : s.configs) configs.push_back(config_json(*c));
      sym = {{"length", s.length}, {"configs", configs}};
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::NoneFound) throw;
    }
    doc.push_back({{"base", base + 1},
                   {"L", search.length},
                   {"distinct", search.distinct},
                   {"extremals", ext},
                   {"symmetric", sym}});
  }
  return doc;
}

json do_certify(const ValidatedGraph& g, const Options& o) {
  json doc = json::array();
  for (auto base : bases_for(o, g)) {
    const auto cert = verify_obstruction(g, base);
    json item = {{"base", base + 1},
                 {"L", cert.extremal_length},
                 {"branch", branch_name(cert.branch)},
                 {"footprint", footprint_json(cert.footprint)},
                 {"quasi", lattice_json(cert.quasi)},
                 {"totalcont", exact_json(cert.totalcont)}};
    if (cert.ties.size() > 1) {
      json ties = json::array();
      for (const auto& t : cert.ties) ties.push_back({{"footprint", footprint_json(t.footprint)}, {"quasi", lattice_json(t.quasi)}});
      item["ties"] = ties;
    }
    doc.push_back(item);
  }
  return doc;
}

json do_series_check(const ValidatedGraph& g, const Options& o) {
  const std::size_t base = o.base.value_or(1) - 1;
  const double top = heuristic_epsilon(g, g.potential());
  std::vector<double> eps;
  for (int k = 0; k < 4; ++k) eps.push_back(top / std::pow(2.0, k));
  std::vector<Complex> z;
  for (std::size_t k = 0; k < g.rank(); ++k) {
    z.push_back(std::polar(1.0, 2.0 * std::numbers::pi * (0.13 + 0.17 * static_cast<double>(k))));
  }
  const auto check = series_vs_eigenvalue_check(g, g.potential(), base, o.order, eps, z);
  json errors = json::array();
  for (auto e : check.errors) errors.push_back(static_cast<double>(e));
  json zs = json::array();
  for (const auto& zk : z) zs.push_back(numeric_json(zk));
  return {{"base", base + 1},
          {"order", o.order},
          {"z", zs},
          {"epsilons", check.epsilons},
          {"errors", errors},
          {"slope", std::isnan(check.slope) ? json(nullptr) : json(check.slope)}};
}

json do_probe(const ValidatedGraph& g, const Options& o) {
  const auto summary = genericity_probe(g, uniform_rational_sampler(g.size(), -10, 10), o.trials, o.seed);
  json witnesses = json::array();
  for (const auto& w : summary.witnesses) {
    json pot = json::array();
    for (const auto& v : w.potential.values) pot.push_back(exact_json(v));
    json energies = json::array();
    for (const auto& e : w.energies) energies.push_back(energy_json(e));
    witnesses.push_back({{"trial", w.trial}, {"potential", pot}, {"flat_bands", energies}});
  }
  return {{"trials", summary.trials}, {"hits", summary.hits}, {"seed", summary.seed}, {"witnesses", witnesses}};
}

}  // namespace

GaussRational parse_scalar(const json& value, const std::string& field) {
  try {
    if (value.is_number_integer()) return GaussRational(static_cast<long>(value.get<std::int64_t>()));
    if (value.is_number()) return GaussRational::from_double(value.get<double>());
    if (value.is_string()) return GaussRational::parse(value.get<std::string>());
    if (value.is_array()) {
      if (value.size() != 2 || !value[0].is_number() || !value[1].is_number()) {
        bad_input(field + ": expected [re, im]");
      }
      return GaussRational::from_double(value[0].get<double>(), value[1].get<double>());
    }
    if (value.is_object()) {
      const auto& num = require(value, "num", field);
      if (!num.is_string()) bad_input(field + ".num: expected a rational string");
      std::string inum = "0";
      if (value.contains("inum")) {
        if (!value["inum"].is_string()) bad_input(field + ".inum: expected a rational string");
        inum = value["inum"].get<std::string>();
      }
      return GaussRational::parse(num.get<std::string>(), inum);
    }
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::ParseError && e.detail().rfind(field, 0) != 0) bad_input(field + ": " + e.detail());
    throw;
  }
  bad_input(field + ": expected a scalar");
}

PeriodicGraphSpec parse_spec(const json& doc) {
  if (!doc.is_object()) bad_input("document: expected an object");
  PeriodicGraphSpec spec;
  const auto d = as_int(require(doc, "d", "document"), "d");
  const auto n = as_int(require(doc, "n", "document"), "n");
  if (d < 0) bad_input("d: must be non-negative");
  if (n < 0) bad_input("n: must be non-negative");
  spec.rank = static_cast<std::size_t>(d);
  spec.size = static_cast<std::size_t>(n);

  const auto& pot = require(doc, "potential", "document");
  if (!pot.is_array()) bad_input("potential: expected an array");
  for (std::size_t i = 0; i < pot.size(); ++i) {
    spec.potential.values.push_back(parse_scalar(pot[i], "potential[" + std::to_string(i) + "]"));
  }

  const auto& edges = require(doc, "edges", "document");
  if (!edges.is_array()) bad_input("edges: expected an array");
  for (std::size_t k = 0; k < edges.size(); ++k) {
    const std::string where = "edges[" + std::to_string(k) + "]";
    const auto& e = edges[k];
    EdgeTerm term;
    const auto from = as_int(require(e, "from", where), where + ".from");
    const auto to = as_int(require(e, "to", where), where + ".to");
    if (from < 1 || to < 1) bad_input(where + ": vertex indices are 1-based");
    term.from = static_cast<std::size_t>(from - 1);
    term.to = static_cast<std::size_t>(to - 1);
    const auto& shift = require(e, "shift", where);
    if (!shift.is_array()) bad_input(where + ".shift: expected an array");
    if (shift.size() != spec.rank) {
      bad_input(where + ".shift: RankMismatch: " + std::to_string(shift.size()) + " components under d = " +
                std::to_string(spec.rank));
    }
    std::vector<std::int64_t> comps;
    for (std::size_t c = 0; c < shift.size(); ++c) comps.push_back(as_int(shift[c], where + ".shift"));
    term.shift = LatticeVector(std::move(comps));
    term.weight = e.contains("weight") ? parse_scalar(e["weight"], where + ".weight") : GaussRational(1);
    spec.edges.push_back(std::move(term));
  }

  if (doc.contains("autosymmetrize")) {
    if (!doc["autosymmetrize"].is_boolean()) bad_input("autosymmetrize: expected a boolean");
    if (doc["autosymmetrize"].get<bool>()) spec = autosymmetrize(std::move(spec));
  }
  return spec;
}

PeriodicGraphSpec load_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) bad_input("cannot read '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    bad_input(path + ": " + e.what());
  }
  return parse_spec(doc);
}

json exact_json(const GaussRational& x) { return {{"num", x.real().get_str()}, {"inum", x.imag().get_str()}}; }

json numeric_json(Complex x) { return json::array({x.real(), x.imag()}); }

json footprint_json(const Footprint& f) {
  json out = json::array();
  for (std::size_t v = 0; v < f.size(); ++v) {
    if (f[v]) out.push_back({v + 1, f[v]});
  }
  return out;
}

json lattice_json(const LatticeVector& v) { return v.components(); }

int run(const Command& cmd, std::ostream& out, std::ostream& err) {
  try {
    check_options(cmd);
    const auto spec = load_spec(cmd.input);
    const auto graph = validate_spec(spec);
    if (cmd.options.base && *cmd.options.base > graph.size()) {
      bad_input("--base " + std::to_string(*cmd.options.base) + " exceeds n = " + std::to_string(graph.size()));
    }
    const auto& v = cmd.verb;
    if (v == "bands") {
      std::ostringstream csv;
      do_bands(graph, cmd.options, csv);
      out << csv.str();
      return 0;
    }
    json doc;
    if (v == "validate") doc = do_validate(graph);
    if (v == "connectivity") doc = do_connectivity(graph);
    if (v == "flatband") doc = do_flatband(graph, cmd.options);
    if (v == "loops") doc = do_loops(graph, cmd.options);
    if (v == "extremal") doc = do_extremal(graph, cmd.options);
    if (v == "certify") doc = do_certify(graph, cmd.options);
    if (v == "series-check") doc = do_series_check(graph, cmd.options);
    if (v == "probe") doc = do_probe(graph, cmd.options);
    out << doc.dump(2) << '\n';
    return 0;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.kind() == ErrorKind::ParseError ? 2 : 1;
  }
}

}  // namespace flatband::cli
