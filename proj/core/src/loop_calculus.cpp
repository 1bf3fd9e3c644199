#include "flatband/loop_calculus.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>

namespace flatband {

namespace {

/// reach[r][v]: a walk of exactly r steps leads from v to base with no
/// intermediate visit to base.
std::vector<std::vector<char>> reachability(const ValidatedGraph& g, std::size_t base, std::size_t max_steps) {
  const std::size_t n = g.size();
  std::vector<std::vector<char>> reach(max_steps + 1, std::vector<char>(n, 0));
  for (std::size_t r = 1; r <= max_steps; ++r) {
    for (std::size_t v = 0; v < n; ++v) {
      for (const auto& e : g.out_edges(v)) {
        const bool ok = r == 1 ? e.to == base : (e.to != base && reach[r - 1][e.to]);
        if (ok) {
          reach[r][v] = 1;
          break;
        }
      }
    }
  }
  return reach;
}

void check_base(const ValidatedGraph& g, std::size_t base) {
  if (base >= g.size()) {
    throw Error(ErrorKind::InvalidArgument,
                "base vertex " + std::to_string(base + 1) + " out of range 1.." + std::to_string(g.size()));
  }
}

[[noreturn]] void explode(std::size_t cap) {
  throw Error(ErrorKind::ExplosionGuard, "enumeration exceeded " + std::to_string(cap) + " objects");
}

/// Lazily computed W_v = (V_base - V_v)^{-1} and its powers.
class VertexFactors {
 public:
  VertexFactors(const Potential& potential, std::size_t base)
      : potential_(potential), base_(base), w_(potential.size()) {}

  const GaussRational& power(std::size_t v, std::uint32_t mult) {
    auto& powers = w_[v];
    if (powers.empty()) powers.push_back(GaussRational(1));
    while (powers.size() <= mult) {
      if (powers.size() == 1) base_factor_.emplace(v, potential_.vertex_factor(base_, v));
      powers.push_back(powers.back() * base_factor_.at(v));
    }
    return powers[mult];
  }

  GaussRational monomial(const Footprint& f) {
    GaussRational out(1);
    for (std::size_t v = 0; v < f.size(); ++v) {
      if (f[v] != 0) out *= power(v, f[v]);
    }
    return out;
  }

 private:
  const Potential& potential_;
  std::size_t base_;
  std::vector<std::vector<GaussRational>> w_;
  std::map<std::size_t, GaussRational> base_factor_;
};

LoopStats root_stats(const SimpleLoop& root, std::size_t vertex_count) {
  LoopStats s;
  s.length = root.length();
  s.quasi = root.quasi();
  s.footprint.assign(vertex_count, 0);
  for (std::size_t k = 0; k < root.interior_count(); ++k) ++s.footprint[root.steps[k].vertex];
  for (const auto& step : root.steps) s.weight_product *= step.weight;
  return s;
}

void absorb(LoopStats& into, const LoopStats& child, std::size_t occurrence_vertex) {
  into.length += child.length;
  into.quasi += child.quasi;
  for (std::size_t v = 0; v < child.footprint.size(); ++v) into.footprint[v] += child.footprint[v];
  ++into.footprint[occurrence_vertex];
  into.sign = -into.sign * child.sign;
  into.weight_product *= child.weight_product;
  into.attachments += 1 + child.attachments;
}

std::vector<LongComplex> long_eigenvalues(const LongComplexMatrix& m) {
  Eigen::ComplexEigenSolver<LongComplexMatrix> solver(m, false);
  if (solver.info() != Eigen::Success) throw Error(ErrorKind::EigenSolverFailure, "extended-precision eigen-solve");
  std::vector<LongComplex> out;
  for (Eigen::Index k = 0; k < solver.eigenvalues().size(); ++k) out.push_back(solver.eigenvalues()[k]);
  return out;
}

/// Nearest eigenvalue to `previous`; ambiguous when the runner-up is not
/// clearly farther than the step just taken.
LongComplex follow(const std::vector<LongComplex>& eig, LongComplex previous) {
  std::size_t best = 0;
  long double d1 = std::numeric_limits<long double>::infinity();
  long double d2 = std::numeric_limits<long double>::infinity();
  for (std::size_t k = 0; k < eig.size(); ++k) {
    const long double d = std::abs(eig[k] - previous);
    if (d < d1) {
      d2 = d1;
      d1 = d;
      best = k;
    } else if (d < d2) {
      d2 = d;
    }
  }
  if (d2 <= 2.0L * d1) {
    throw Error(ErrorKind::BranchTrackingAmbiguity, "two eigenvalues equally close to the tracked branch");
  }
  return eig[best];
}

std::vector<LongComplex> to_long(std::span<const Complex> z) {
  std::vector<LongComplex> out;
  for (const auto& zk : z) out.emplace_back(zk.real(), zk.imag());
  return out;
}

}  // namespace

LatticeVector SimpleLoop::quasi() const {
  LatticeVector q = steps.empty() ? LatticeVector() : LatticeVector(steps.front().shift.rank());
  for (const auto& s : steps) q += s.shift;
  return q;
}

std::size_t footprint_cardinality(const Footprint& f) {
  std::size_t n = 0;
  for (auto m : f) n += m;
  return n;
}

std::size_t footprint_distinct(const Footprint& f) {
  return static_cast<std::size_t>(std::count_if(f.begin(), f.end(), [](std::uint32_t m) { return m != 0; }));
}

bool footprint_symmetric(const Footprint& f) {
  std::size_t ones = 0;
  for (auto m : f) {
    if (m == 1) {
      ++ones;
    } else if (m != 0 && m != 2) {
      return false;
    }
  }
  return ones == 1;
}

LoopConfig::LoopConfig(SimpleLoop root, Attachments attachments, std::size_t vertex_count)
    : root_(std::move(root)), attachments_(std::move(attachments)) {
  for (const auto& [pos, seq] : attachments_) {
    if (pos >= root_.interior_count()) throw Error(ErrorKind::InvalidArgument, "attachment at a non-interior position");
    if (seq.empty()) throw Error(ErrorKind::InvalidArgument, "empty attachment sequence");
    for (const auto& child : seq) {
      if (!child || child->base() != root_.base) {
        throw Error(ErrorKind::InvalidArgument, "attached configuration must share the base vertex");
      }
    }
  }
  stats_ = root_stats(root_, vertex_count);
  for (const auto& [pos, seq] : attachments_) {
    for (const auto& child : seq) absorb(stats_, child->stats(), root_.steps[pos].vertex);
  }
}

std::string LoopConfig::encode() const {
  std::string out;
  for (std::size_t k = 0; k < root_.steps.size(); ++k) {
    const auto& s = root_.steps[k];
    out += "(" + std::to_string(s.vertex + 1) + "," + s.shift.to_string() + ")";
    auto it = attachments_.find(k);
    if (it == attachments_.end()) continue;
    out += "@" + std::to_string(k) + "[";
    for (std::size_t c = 0; c < it->second.size(); ++c) {
      if (c) out += ";";
      out += it->second[c]->encode();
    }
    out += "]";
  }
  return out;
}

LoopStats loop_stats(const LoopConfig& config, std::size_t vertex_count) {
  LoopStats s = root_stats(config.root(), vertex_count);
  for (const auto& [pos, seq] : config.attachments()) {
    for (const auto& child : seq) absorb(s, loop_stats(*child, vertex_count), config.root().steps[pos].vertex);
  }
  return s;
}

GaussRational config_contribution(const LoopStats& stats, std::size_t base, const Potential& potential) {
  GaussRational out = stats.weight_product;
  if (stats.sign < 0) out = -out;
  for (std::size_t v = 0; v < stats.footprint.size(); ++v) {
    if (stats.footprint[v] == 0) continue;
    const GaussRational w = potential.vertex_factor(base, v);
    for (std::uint32_t k = 0; k < stats.footprint[v]; ++k) out *= w;
  }
  return out;
}

void for_each_simple_loop(const ValidatedGraph& graph, std::size_t base, std::size_t length,
                          const std::function<void(const SimpleLoop&)>& visit, std::size_t cap) {
  check_base(graph, base);
  if (length == 0) return;
  const auto reach = reachability(graph, base, length);
  SimpleLoop loop;
  loop.base = base;
  std::size_t count = 0;

  std::function<void(std::size_t, std::size_t)> dfs = [&](std::size_t cur, std::size_t remaining) {
    for (const auto& e : graph.out_edges(cur)) {
      const bool ok = remaining == 1 ? e.to == base : (e.to != base && reach[remaining - 1][e.to]);
      if (!ok) continue;
      loop.steps.push_back({e.to, e.shift, e.weight});
      if (remaining == 1) {
        if (++count > cap) explode(cap);
        visit(loop);
      } else {
        dfs(e.to, remaining - 1);
      }
      loop.steps.pop_back();
    }
  };
  if (reach[length][base] || length == 1) dfs(base, length);
}

std::vector<SimpleLoop> enumerate_simple_loops(const ValidatedGraph& graph, std::size_t base,
                                               std::size_t max_length, std::size_t cap) {
  std::vector<SimpleLoop> out;
  for (std::size_t len = 1; len <= max_length; ++len) {
    for_each_simple_loop(graph, base, len, [&](const SimpleLoop& l) {
      if (out.size() >= cap) explode(cap);
      out.push_back(l);
    }, cap);
  }
  return out;
}

ConfigEnumerator::ConfigEnumerator(const ValidatedGraph& graph, std::size_t base, std::size_t cap)
    : graph_(graph), base_(base), cap_(cap) {
  check_base(graph, base);
}

void ConfigEnumerator::count_one() {
  if (++generated_ > cap_) explode(cap_);
}

const std::vector<ConfigPtr>& ConfigEnumerator::cached(std::size_t length) {
  auto it = cache_.find(length);
  if (it != cache_.end()) return it->second;
  auto configs = all(length);
  return cache_.emplace(length, std::move(configs)).first->second;
}

std::vector<ConfigPtr> ConfigEnumerator::all(std::size_t length) {
  auto it = cache_.find(length);
  if (it != cache_.end()) return it->second;
  std::vector<ConfigPtr> out;
  for_each(length, [&](const ConfigPtr& c) { out.push_back(c); });
  return out;
}

void ConfigEnumerator::for_each(std::size_t length, const std::function<void(const ConfigPtr&)>& visit) {
  if (length == 0) return;
  auto hit = cache_.find(length);
  if (hit != cache_.end()) {
    for (const auto& c : hit->second) visit(c);
    return;
  }
  // Attachments come from strictly shorter lengths; fill them first so the
  // recursion below only reads the cache.
  for (std::size_t m = 1; m + 2 <= length; ++m) cached(m);

  const std::size_t n = graph_.size();
  for (std::size_t len = 1; len <= length; ++len) {
    std::vector<SimpleLoop> roots;
    for_each_simple_loop(graph_, base_, len, [&](const SimpleLoop& l) { roots.push_back(l); }, cap_);
    const std::size_t extra = length - len;
    for (const auto& root : roots) {
      if (extra == 0) {
        count_one();
        visit(std::make_shared<const LoopConfig>(root, LoopConfig::Attachments{}, n));
        continue;
      }
      const std::size_t slots = root.interior_count();
      if (slots == 0) continue;

      LoopConfig::Attachments current;
      std::vector<ConfigPtr> sequence;
      // Distribute `remaining` edges over slots pos.., each slot receiving an
      // ordered sequence of configurations.
      std::function<void(std::size_t, std::size_t)> place;
      std::function<void(std::size_t, std::size_t, std::size_t)> fill;
      place = [&](std::size_t pos, std::size_t remaining) {
        if (pos == slots) {
          if (remaining != 0) return;
          count_one();
          visit(std::make_shared<const LoopConfig>(root, current, n));
          return;
        }
        place(pos + 1, remaining);
        for (std::size_t take = 1; take <= remaining; ++take) fill(pos, take, remaining - take);
      };
      fill = [&](std::size_t pos, std::size_t left, std::size_t after) {
        if (left == 0) {
          current[pos] = sequence;
          place(pos + 1, after);
          current.erase(pos);
          return;
        }
        for (std::size_t part = 1; part <= left; ++part) {
          for (const auto& child : cache_.at(part)) {
            sequence.push_back(child);
            fill(pos, left - part, after);
            sequence.pop_back();
          }
        }
      };
      place(0, extra);
    }
  }
}

std::vector<ConfigPtr> enumerate_configs(const ValidatedGraph& graph, std::size_t base, std::size_t length,
                                         std::size_t cap) {
  ConfigEnumerator e(graph, base, cap);
  return e.all(length);
}

ExactPoly series_coefficient(const ValidatedGraph& graph, const Potential& potential, std::size_t base,
                             std::size_t order, std::size_t cap) {
  check_base(graph, base);
  if (potential.size() != graph.size()) throw Error(ErrorKind::SizeMismatch, "potential size");
  if (order == 0) return ExactPoly::constant(graph.rank(), potential[base]);
  ExactPoly out(graph.rank());
  VertexFactors w(potential, base);
  ConfigEnumerator e(graph, base, cap);
  e.for_each(order, [&](const ConfigPtr& c) {
    const auto& s = c->stats();
    GaussRational cont = s.weight_product * w.monomial(s.footprint);
    if (s.sign < 0) cont = -cont;
    out.add_term(s.quasi, cont);
  });
  return out;
}

ResummedTable resummed_table(const ValidatedGraph& graph, std::size_t base, std::size_t order, std::size_t cap) {
  ResummedTable table;
  table.base = base;
  table.order = order;
  ConfigEnumerator e(graph, base, cap);
  e.for_each(order, [&](const ConfigPtr& c) {
    const auto& s = c->stats();
    auto& entry = table.entries[TableKey{s.footprint, s.quasi}];
    if (s.sign < 0) {
      entry.totalcont -= s.weight_product;
    } else {
      entry.totalcont += s.weight_product;
    }
    ++entry.configs;
  });
  return table;
}

ExactPoly table_series_coefficient(const ResummedTable& table, const Potential& potential, std::size_t rank) {
  ExactPoly out(rank);
  VertexFactors w(potential, table.base);
  for (const auto& [key, entry] : table.entries) {
    if (entry.cancelled()) continue;
    out.add_term(key.quasi, entry.totalcont * w.monomial(key.footprint));
  }
  return out;
}

double heuristic_epsilon(const ValidatedGraph& graph, const Potential& potential) {
  double r = potential.separation();
  if (r == 0.0) throw Error(ErrorKind::DegeneratePotential, "potential values are not pairwise distinct");
  if (!std::isfinite(r)) r = 1.0;
  const double mb = quotient_matrices(graph).weight_bound;
  if (mb == 0.0) return 0.01 * r;
  return 0.01 * r / (static_cast<double>(graph.size()) * mb);
}

LongComplex track_branch(const FiberMatrix& fiber, std::size_t base, std::span<const LongComplex> z, LongComplex eps,
                         std::size_t steps) {
  if (steps == 0) throw Error(ErrorKind::InvalidArgument, "tracking needs at least one step");
  LongComplex lambda = fiber.potential()[base].to_long_complex();
  for (std::size_t m = 1; m <= steps; ++m) {
    const LongComplex t = eps * static_cast<long double>(m) / static_cast<long double>(steps);
    lambda = follow(long_eigenvalues(eval_scaled_fiber(fiber, z, t)), lambda);
  }
  return lambda;
}

SeriesCheck series_vs_eigenvalue_check(const ValidatedGraph& graph, const Potential& potential, std::size_t base,
                                       std::size_t order, std::span<const double> epsilons,
                                       std::span<const Complex> z) {
  check_base(graph, base);
  if (potential.size() != graph.size()) throw Error(ErrorKind::SizeMismatch, "potential size");
  const double bound = heuristic_epsilon(graph, potential);
  if (epsilons.empty()) throw Error(ErrorKind::InvalidArgument, "no epsilon values");
  for (std::size_t k = 0; k < epsilons.size(); ++k) {
    if (!(epsilons[k] > 0.0) || epsilons[k] > bound * (1.0 + 1e-12)) {
      throw Error(ErrorKind::InvalidArgument, "epsilon outside (0, " + std::to_string(bound) + "]");
    }
    if (k && !(epsilons[k] < epsilons[k - 1])) throw Error(ErrorKind::InvalidArgument, "epsilons must decrease");
  }
  if (z.size() != graph.rank()) throw Error(ErrorKind::RankMismatch, "evaluation point dimension");
  for (const auto& zk : z) {
    if (std::abs(zk) < 0.5 || std::abs(zk) > 2.0) {
      throw Error(ErrorKind::InvalidArgument, "evaluation point outside 1/2 <= |z| <= 2");
    }
  }

  const auto zl = to_long(z);
  std::vector<LongComplex> coeff;
  for (std::size_t k = 1; k <= order; ++k) {
    coeff.push_back(series_coefficient(graph, potential, base, k).evaluate_numeric<long double>(zl));
  }
  const FiberMatrix fiber = build_fiber(graph, potential);

  SeriesCheck check;
  check.epsilons.assign(epsilons.begin(), epsilons.end());
  for (double eps : epsilons) {
    const long double e = eps;
    LongComplex sum = potential[base].to_long_complex();
    long double power = 1.0L;
    for (const auto& c : coeff) {
      power *= e;
      sum += c * power;
    }
    check.errors.push_back(std::abs(track_branch(fiber, base, zl, LongComplex(e)) - sum));
  }

  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t used = 0;
  for (std::size_t k = 0; k < epsilons.size(); ++k) {
    if (!(check.errors[k] > 0.0L)) continue;
    const double x = std::log(epsilons[k]);
    const double y = std::log(static_cast<double>(check.errors[k]));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++used;
  }
  const double denom = static_cast<double>(used) * sxx - sx * sx;
  check.slope = used >= 2 && denom != 0.0 ? (static_cast<double>(used) * sxy - sx * sy) / denom
                                          : std::numeric_limits<double>::quiet_NaN();
  return check;
}

std::vector<LongComplex> estimate_branch_coefficients(const FiberMatrix& fiber, std::size_t base,
                                                      std::span<const LongComplex> z, std::size_t order, double radius,
                                                      std::size_t nodes) {
  if (nodes <= order) throw Error(ErrorKind::InvalidArgument, "need more quadrature nodes than the order");
  if (!(radius > 0.0)) throw Error(ErrorKind::InvalidArgument, "radius must be positive");

  auto cauchy = [&](long double rho) {
    constexpr std::size_t kSub = 8;
    std::vector<LongComplex> values;
    LongComplex lambda = track_branch(fiber, base, z, LongComplex(rho));
    const long double step = 2.0L * std::numbers::pi_v<long double> / static_cast<long double>(nodes * kSub);
    for (std::size_t m = 0; m < nodes; ++m) {
      values.push_back(lambda);
      for (std::size_t s = 1; s <= kSub; ++s) {
        const LongComplex eps = std::polar(rho, step * static_cast<long double>(m * kSub + s));
        lambda = follow(long_eigenvalues(eval_scaled_fiber(fiber, z, eps)), lambda);
      }
    }
    std::vector<LongComplex> c(order + 1, LongComplex(0));
    for (std::size_t k = 0; k <= order; ++k) {
      for (std::size_t m = 0; m < nodes; ++m) {
        const LongComplex eps = std::polar(rho, step * static_cast<long double>(m * kSub));
        c[k] += values[m] / std::pow(eps, static_cast<int>(k));
      }
      c[k] /= static_cast<long double>(nodes);
    }
    return c;
  };

  const auto coarse = cauchy(radius);
  const auto fine = cauchy(radius / 2.0L);
  // Aliasing error in c_k scales like rho^nodes.
  const long double gain = std::pow(2.0L, static_cast<long double>(nodes));
  std::vector<LongComplex> out(order + 1);
  for (std::size_t k = 0; k <= order; ++k) out[k] = (gain * fine[k] - coarse[k]) / (gain - 1.0L);
  return out;
}

}  // namespace flatband
