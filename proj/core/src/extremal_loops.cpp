#include "flatband/extremal_loops.hpp"

#include <algorithm>

namespace flatband {

namespace {

std::size_t quasi_norm2(const LatticeVector& v) { return static_cast<std::size_t>(v.norm2()); }

std::vector<std::size_t> vertex_list(const Footprint& f) {
  std::vector<std::size_t> out;
  for (std::size_t v = 0; v < f.size(); ++v) out.insert(out.end(), f[v], v);
  return out;
}

/// Fewer distinct vertices, then smaller sorted vertex list, then larger quasimomentum.
bool preferred(const TableKey& a, const TableKey& b) {
  const auto da = footprint_distinct(a.footprint);
  const auto db = footprint_distinct(b.footprint);
  if (da != db) return da < db;
  const auto la = vertex_list(a.footprint);
  const auto lb = vertex_list(b.footprint);
  if (la != lb) return la < lb;
  return a.quasi > b.quasi;
}

void check_permutation(const std::vector<std::size_t>& sigma) {
  std::vector<char> seen(sigma.size() + 1, 0);
  for (auto s : sigma) {
    if (s < 1 || s > sigma.size() || seen[s]) throw Error(ErrorKind::InvalidArgument, "not a permutation");
    seen[s] = 1;
  }
}

}  // namespace

ExtremalSearch extremal_search(const ValidatedGraph& graph, std::size_t base, std::size_t cap) {
  if (base >= graph.size()) throw Error(ErrorKind::InvalidArgument, "base vertex out of range");
  if (component_of(graph, base).cycle_lattice.empty()) {
    throw Error(ErrorKind::NoNonzeroQuasiLoop,
                "component of vertex " + std::to_string(base + 1) + " has no cycle with nonzero quasimomentum");
  }
  const std::size_t n = graph.size();
  for (std::size_t len = 1; len <= 2 * n - 1; ++len) {
    std::vector<ConfigPtr> hits;
    for_each_simple_loop(graph, base, len, [&](const SimpleLoop& l) {
      if (!l.quasi().is_zero()) hits.push_back(std::make_shared<const LoopConfig>(l, LoopConfig::Attachments{}, n));
    }, cap);
    if (hits.empty()) continue;

    ExtremalSearch out;
    out.base = base;
    out.length = len;
    out.distinct = n;
    for (const auto& c : hits) out.distinct = std::min(out.distinct, footprint_distinct(c->stats().footprint));
    for (const auto& c : hits) {
      if (footprint_distinct(c->stats().footprint) == out.distinct) out.extremals.push_back(c);
    }
    std::stable_sort(out.extremals.begin(), out.extremals.end(),
                     [](const ConfigPtr& a, const ConfigPtr& b) { return a->encode() < b->encode(); });
    return out;
  }
  throw Error(ErrorKind::NoNonzeroQuasiLoop,
              "no loop at vertex " + std::to_string(base + 1) + " with nonzero quasimomentum up to length " +
                  std::to_string(2 * n - 1));
}

SymmetricSearch symmetric_extremal_search(const ValidatedGraph& graph, std::size_t base, std::size_t max_length,
                                          std::size_t cap) {
  ConfigEnumerator e(graph, base, cap);
  for (std::size_t len = 1; len <= max_length; ++len) {
    SymmetricSearch out;
    out.length = len;
    e.for_each(len, [&](const ConfigPtr& c) {
      const auto& s = c->stats();
      if (!s.quasi.is_zero() && footprint_symmetric(s.footprint)) out.configs.push_back(c);
    });
    if (!out.configs.empty()) return out;
  }
  throw Error(ErrorKind::NoneFound, "no symmetric extremal loop at vertex " + std::to_string(base + 1) +
                                        " up to length " + std::to_string(max_length));
}

CancellationCheck non_cancelable_check(const ValidatedGraph& graph, const LoopConfig& config, std::size_t cap) {
  const auto& target = config.stats();
  if (target.quasi.is_zero()) throw Error(ErrorKind::InvalidArgument, "configuration has zero quasimomentum");
  const std::string self = config.encode();
  CancellationCheck out;
  bool found_self = false;
  ConfigEnumerator e(graph, config.base(), cap);
  e.for_each(target.length, [&](const ConfigPtr& c) {
    const auto& s = c->stats();
    if (s.quasi != target.quasi || s.footprint != target.footprint) return;
    if (!found_self && c->encode() == self) {
      found_self = true;
      return;
    }
    out.competitors.push_back(c);
  });
  out.unique = out.competitors.empty();
  return out;
}

std::string branch_name(CertificateBranch b) { return b == CertificateBranch::Extremal ? "extremal" : "symmetric"; }

Certificate verify_obstruction(const ValidatedGraph& graph, std::size_t base, std::size_t cap) {
  const auto search = extremal_search(graph, base, cap);
  Certificate cert;
  cert.base = base;
  cert.extremal_length = search.length;

  const auto table = resummed_table(graph, base, search.length, cap);
  const TableKey* best = nullptr;
  const TableEntry* best_entry = nullptr;
  for (const auto& [key, entry] : table.entries) {
    if (key.quasi.is_zero() || entry.cancelled()) continue;
    if (!best || preferred(key, *best)) {
      best = &key;
      best_entry = &entry;
    }
  }
  if (best) {
    cert.branch = CertificateBranch::Extremal;
    cert.footprint = best->footprint;
    cert.quasi = best->quasi;
    cert.totalcont = best_entry->totalcont;
    return cert;
  }

  const auto next = resummed_table(graph, base, search.length + 1, cap);
  std::size_t top = 0;
  for (const auto& [key, entry] : next.entries) {
    if (key.quasi.is_zero() || entry.cancelled() || !footprint_symmetric(key.footprint)) continue;
    const std::size_t norm = quasi_norm2(key.quasi);
    if (cert.ties.empty() || norm > top) {
      top = norm;
      cert.ties.clear();
      cert.footprint = key.footprint;
      cert.quasi = key.quasi;
      cert.totalcont = entry.totalcont;
    }
    if (norm == top) cert.ties.push_back(key);
  }
  if (cert.ties.empty()) {
    throw Error(ErrorKind::ObstructionNotFound,
                "every nonzero-quasimomentum entry cancels at orders " + std::to_string(search.length) + " and " +
                    std::to_string(search.length + 1) + " for vertex " + std::to_string(base + 1));
  }
  cert.branch = CertificateBranch::Symmetric;
  return cert;
}

DisjunctionReport obstruction_disjunction(const ValidatedGraph& graph, std::size_t base, std::size_t cap) {
  const auto search = extremal_search(graph, base, cap);
  DisjunctionReport report;
  report.base = base;
  report.extremal_length = search.length;
  for (const auto& c : search.extremals) {
    if (!non_cancelable_check(graph, *c, cap).unique) report.cancelable_extremals.push_back(c);
  }
  report.all_extremals_unique = report.cancelable_extremals.empty();

  try {
    const auto sym = symmetric_extremal_search(graph, base, search.length + 1, cap);
    for (const auto& c : sym.configs) {
      if (non_cancelable_check(graph, *c, cap).unique) {
        report.unique_symmetric = c;
        break;
      }
    }
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::NoneFound) throw;
  }
  return report;
}

bool special_permutation_hypothesis(const std::vector<std::size_t>& sigma) {
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    for (std::size_t j = i + 1; j < sigma.size(); ++j) {
      if (sigma[i] > sigma[j] && sigma[i] - sigma[j] != j - i) return false;
    }
  }
  return true;
}

bool decomposition_valid(const std::vector<std::size_t>& sigma, const std::vector<PermutationBlock>& blocks) {
  std::size_t next = 1;
  for (const auto& b : blocks) {
    if (b.first != next || b.last < b.first || b.last > sigma.size()) return false;
    for (std::size_t i = b.first; i <= b.last; ++i) {
      const std::size_t want = b.reflected ? b.first + b.last - i : i;
      if (sigma[i - 1] != want) return false;
    }
    next = b.last + 1;
  }
  return next == sigma.size() + 1;
}

std::vector<PermutationBlock> greedy_blocks(const std::vector<std::size_t>& sigma) {
  std::vector<PermutationBlock> blocks;
  std::size_t i = 1;
  while (i <= sigma.size()) {
    const std::size_t image = sigma[i - 1];
    if (image == i) {
      if (!blocks.empty() && !blocks.back().reflected && blocks.back().last + 1 == i) {
        blocks.back().last = i;
      } else {
        blocks.push_back({i, i, false});
      }
      ++i;
    } else {
      const std::size_t last = std::max(image, i);
      blocks.push_back({i, last, true});
      i = last + 1;
    }
  }
  return blocks;
}

PermutationDecomposition special_permutation_decompose(const std::vector<std::size_t>& sigma) {
  check_permutation(sigma);
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    for (std::size_t j = i + 1; j < sigma.size(); ++j) {
      if (sigma[i] > sigma[j] && sigma[i] - sigma[j] != j - i) return InversionViolation{i + 1, j + 1};
    }
  }
  return greedy_blocks(sigma);
}

}  // namespace flatband
