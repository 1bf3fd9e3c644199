#include "flatband/graph_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <queue>
#include <set>
#include <tuple>

#include "flatband/error.hpp"

namespace flatband {

namespace {

std::string edge_label(const EdgeTerm& e) {
  return "(" + std::to_string(e.from + 1) + "," + std::to_string(e.to + 1) + "," +
         e.shift.to_string() + ")";
}

auto edge_key(const EdgeTerm& e) { return std::tie(e.from, e.to, e.shift); }

}  // namespace

double Potential::separation() const {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < values.size(); ++i) {
    for (std::size_t j = i + 1; j < values.size(); ++j) {
      best = std::min(best, (values[i] - values[j]).abs());
    }
  }
  return best;
}

GaussRational Potential::vertex_factor(std::size_t base, std::size_t s) const {
  GaussRational gap = values.at(base) - values.at(s);
  if (gap.is_zero()) {
    throw Error(ErrorKind::DegeneratePotential, "V_" + std::to_string(base + 1) + " = V_" +
                                                    std::to_string(s + 1) + " = " +
                                                    values[base].to_string());
  }
  return gap.inverse();
}

double Potential::max_magnitude() const {
  double m = 0.0;
  for (const auto& v : values) m = std::max(m, v.abs());
  return m;
}

bool Potential::is_real() const {
  return std::all_of(values.begin(), values.end(), [](const auto& v) { return v.is_real(); });
}

std::span<const EdgeTerm> ValidatedGraph::out_edges(std::size_t vertex) const {
  return std::span<const EdgeTerm>(edges_).subspan(out_offsets_.at(vertex),
                                                   out_offsets_.at(vertex + 1) - out_offsets_[vertex]);
}

ValidatedGraph ValidatedGraph::with_potential(Potential potential) const {
  if (potential.size() != size_) {
    throw Error(ErrorKind::SizeMismatch, "potential has " + std::to_string(potential.size()) +
                                             " values, graph has " + std::to_string(size_) + " vertices");
  }
  ValidatedGraph out(*this);
  out.potential_ = std::move(potential);
  return out;
}

PeriodicGraphSpec ValidatedGraph::to_spec() const { return {rank_, size_, edges_, potential_}; }

ValidatedGraph validate_spec(const PeriodicGraphSpec& spec) {
  if (spec.size == 0) throw Error(ErrorKind::EmptyGraph, "fundamental domain has no vertices");
  if (spec.rank == 0) throw Error(ErrorKind::InvalidArgument, "lattice rank d must be at least 1");
  if (spec.potential.size() != spec.size) {
    throw Error(ErrorKind::SizeMismatch, "potential has " + std::to_string(spec.potential.size()) +
                                             " values, expected " + std::to_string(spec.size));
  }

  std::vector<EdgeTerm> raw;
  raw.reserve(spec.edges.size());
  for (const auto& e : spec.edges) {
    if (e.shift.rank() != spec.rank) {
      throw Error(ErrorKind::RankMismatch, "edge " + edge_label(e) + " has a shift of length " +
                                               std::to_string(e.shift.rank()) + ", expected " +
                                               std::to_string(spec.rank));
    }
    if (e.from >= spec.size || e.to >= spec.size) {
      throw Error(ErrorKind::InvalidArgument, "edge " + edge_label(e) + " references a missing vertex");
    }
    if (e.from == e.to && e.shift.is_zero()) {
      throw Error(ErrorKind::SelfLoopZeroShift, "edge " + edge_label(e));
    }
    raw.push_back(e);
  }

  std::stable_sort(raw.begin(), raw.end(),
                   [](const EdgeTerm& a, const EdgeTerm& b) { return edge_key(a) < edge_key(b); });
  std::vector<EdgeTerm> merged;
  for (auto& e : raw) {
    if (!merged.empty() && edge_key(merged.back()) == edge_key(e)) {
      merged.back().weight += e.weight;
    } else {
      merged.push_back(std::move(e));
    }
  }
  std::erase_if(merged, [](const EdgeTerm& e) { return e.weight.is_zero(); });

  for (const auto& e : merged) {
    EdgeTerm probe{e.to, e.from, -e.shift, {}};
    auto it = std::lower_bound(merged.begin(), merged.end(), probe,
                               [](const EdgeTerm& a, const EdgeTerm& b) { return edge_key(a) < edge_key(b); });
    if (it == merged.end() || edge_key(*it) != edge_key(probe)) {
      throw Error(ErrorKind::WeakSymmetryViolation,
                  "edge " + edge_label(e) + " has no partner " + edge_label(probe));
    }
  }

  ValidatedGraph g;
  g.rank_ = spec.rank;
  g.size_ = spec.size;
  g.edges_ = std::move(merged);
  g.potential_ = spec.potential;
  g.out_offsets_.assign(spec.size + 1, 0);
  for (const auto& e : g.edges_) ++g.out_offsets_[e.from + 1];
  for (std::size_t i = 0; i < spec.size; ++i) g.out_offsets_[i + 1] += g.out_offsets_[i];
  return g;
}

QuotientGraph quotient_matrices(const ValidatedGraph& graph) {
  QuotientGraph q;
  q.size = graph.size();
  double max_entry = 0.0;
  for (const auto& e : graph.edges()) {
    auto [it, inserted] = q.matrices.try_emplace(e.shift, graph.size(), graph.size());
    it->second(e.from, e.to) += e.weight;
    max_entry = std::max(max_entry, e.weight.abs());
  }
  for (const auto& [shift, m] : q.matrices) q.shift_support.push_back(shift);
  q.weight_bound = max_entry * static_cast<double>(graph.size());
  return q;
}

QuotientComponent component_of(const ValidatedGraph& graph, std::size_t vertex) {
  std::vector<std::optional<LatticeVector>> phi(graph.size());
  QuotientComponent comp;
  std::queue<std::size_t> frontier;
  phi.at(vertex) = LatticeVector(graph.rank());
  frontier.push(vertex);
  std::vector<LatticeVector> cycles;
  while (!frontier.empty()) {
    const std::size_t v = frontier.front();
    frontier.pop();
    comp.vertices.push_back(v);
    for (const auto& e : graph.out_edges(v)) {
      if (!phi[e.to]) {
        phi[e.to] = *phi[v] + e.shift;
        frontier.push(e.to);
      } else {
        // Tree edges contribute zero here, so no need to separate them out.
        LatticeVector q = e.shift + *phi[v] - *phi[e.to];
        if (!q.is_zero()) cycles.push_back(std::move(q));
      }
    }
  }
  std::sort(comp.vertices.begin(), comp.vertices.end());
  comp.cycle_lattice = hermite_basis(cycles, graph.rank());
  comp.index = lattice_index(comp.cycle_lattice, graph.rank());
  return comp;
}

ConnectivityReport is_gamma_connected(const ValidatedGraph& graph) {
  ConnectivityReport report;
  std::vector<bool> seen(graph.size(), false);
  for (std::size_t v = 0; v < graph.size(); ++v) {
    if (seen[v]) continue;
    auto comp = component_of(graph, v);
    for (auto u : comp.vertices) seen[u] = true;
    report.components.push_back(std::move(comp));
  }
  report.connected = report.components.size() == 1 && report.components.front().index == 1;
  return report;
}

MultiConnectivityReport is_multi_connected(const ValidatedGraph& graph) {
  MultiConnectivityReport report;
  const auto& edges = graph.edges();
  for (std::size_t a = 0; a < edges.size();) {
    std::size_t b = a;
    MultiEdgeWitness w{edges[a].from, edges[a].to, {}};
    while (b < edges.size() && edges[b].from == w.from && edges[b].to == w.to) {
      w.shifts.push_back(edges[b].shift);
      ++b;
    }
    if (w.shifts.size() > 1) report.witnesses.push_back(std::move(w));
    a = b;
  }
  report.multi_connected = !report.witnesses.empty();
  return report;
}

bool is_self_adjoint(const ValidatedGraph& graph) {
  if (!graph.potential().is_real()) return false;
  const auto& edges = graph.edges();
  for (const auto& e : edges) {
    EdgeTerm probe{e.to, e.from, -e.shift, {}};
    auto it = std::lower_bound(edges.begin(), edges.end(), probe,
                               [](const EdgeTerm& x, const EdgeTerm& y) { return edge_key(x) < edge_key(y); });
    if (it == edges.end() || edge_key(*it) != edge_key(probe)) return false;
    if (it->weight != e.weight.conj()) return false;
  }
  return true;
}

PeriodicGraphSpec autosymmetrize(PeriodicGraphSpec spec) {
  std::set<std::tuple<std::size_t, std::size_t, LatticeVector>> present;
  for (const auto& e : spec.edges) present.emplace(e.from, e.to, e.shift);
  std::vector<EdgeTerm> added;
  for (const auto& e : spec.edges) {
    auto key = std::make_tuple(e.to, e.from, -e.shift);
    if (present.count(key)) continue;
    present.insert(key);
    added.push_back({e.to, e.from, -e.shift, e.weight.conj()});
  }
  spec.edges.insert(spec.edges.end(), added.begin(), added.end());
  return spec;
}

}  // namespace flatband
