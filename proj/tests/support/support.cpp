#include "support.hpp"

#include <algorithm>
#include <numeric>

#include "cli.hpp"

namespace flatband::testing {

std::string fixture_path(const std::string& name) { return std::string(FLATBAND_FIXTURE_DIR) + "/" + name; }

ValidatedGraph load_fixture(const std::string& name) { return validate_spec(cli::load_spec(fixture_path(name))); }

const std::vector<std::string>& fixture_names() {
  static const std::vector<std::string> names = {"lieb.json", "chain.json", "single_chain.json", "dimer.json"};
  return names;
}

Potential random_potential(Rng& rng, std::size_t size, bool real) {
  Potential v;
  while (v.values.size() < size) {
    const auto den = rng.uniform_int(1, 7);
    GaussRational x(Rational(static_cast<long>(rng.uniform_int(-5 * den, 5 * den)), static_cast<unsigned long>(den)),
                    real ? Rational(0) : Rational(static_cast<long>(rng.uniform_int(-3, 3)), 2UL));
    if (std::find(v.values.begin(), v.values.end(), x) == v.values.end()) v.values.push_back(x);
  }
  return v;
}

ValidatedGraph random_spec(Rng& rng, const RandomSpecOptions& options) {
  for (;;) {
    PeriodicGraphSpec spec;
    spec.size = static_cast<std::size_t>(rng.uniform_int(1, static_cast<std::int64_t>(options.max_size)));
    spec.rank = static_cast<std::size_t>(rng.uniform_int(1, static_cast<std::int64_t>(options.max_rank)));
    std::vector<LatticeVector> pool = {LatticeVector(spec.rank)};
    std::size_t available = 1;
    for (std::size_t k = 0; k < spec.rank; ++k) available *= 3;
    const std::size_t pairs = std::min((options.max_shifts - 1) / 2, (available - 1) / 2);
    while (pool.size() < 1 + pairs) {
      LatticeVector a(spec.rank);
      for (std::size_t k = 0; k < spec.rank; ++k) a[k] = rng.uniform_int(-1, 1);
      if (a.is_zero() || std::find(pool.begin(), pool.end(), a) != pool.end() ||
          std::find(pool.begin(), pool.end(), -a) != pool.end()) {
        continue;
      }
      pool.push_back(a);
    }
    auto weight = [&] {
      for (;;) {
        const auto re = rng.uniform_int(-2, 2);
        const auto im = options.self_adjoint ? 0 : rng.uniform_int(-1, 1);
        if (re != 0 || im != 0) return GaussRational(Rational(static_cast<long>(re)), Rational(static_cast<long>(im)));
      }
    };
    const auto terms = rng.uniform_int(1, static_cast<std::int64_t>(spec.size) + 2);
    for (std::int64_t t = 0; t < terms; ++t) {
      const auto i = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(spec.size) - 1));
      const auto j = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(spec.size) - 1));
      LatticeVector a = pool[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(pool.size()) - 1))];
      if (rng.uniform_int(0, 1)) a = -a;
      if (i == j && a.is_zero()) continue;
      const GaussRational w = weight();
      spec.edges.push_back({i, j, a, w});
      spec.edges.push_back({j, i, -a, options.self_adjoint ? w.conj() : weight()});
    }
    spec.potential = random_potential(rng, spec.size, options.self_adjoint);
    try {
      auto g = validate_spec(spec);
      if (options.require_connected && !is_gamma_connected(g).connected) continue;
      return g;
    } catch (const Error&) {
      continue;
    }
  }
}

ValidatedGraph lieb(const GaussRational& v1, const GaussRational& v2, const GaussRational& v3) {
  PeriodicGraphSpec spec;
  spec.rank = 2;
  spec.size = 3;
  const GaussRational one(1);
  spec.edges = {{0, 1, {0, 0}, one}, {0, 1, {-1, 0}, one}, {0, 2, {0, 0}, one}, {0, 2, {0, -1}, one},
                {1, 0, {0, 0}, one}, {1, 0, {1, 0}, one},  {2, 0, {0, 0}, one}, {2, 0, {0, 1}, one}};
  spec.potential.values = {v1, v2, v3};
  return validate_spec(spec);
}

std::vector<OracleLoop> oracle_simple_loops(const ValidatedGraph& g, std::size_t base, std::size_t length) {
  std::vector<OracleLoop> out;
  OracleLoop cur{{}, LatticeVector(g.rank()), GaussRational(1)};
  auto rec = [&](auto&& self, std::size_t at, std::size_t left) -> void {
    for (const auto& e : g.edges()) {
      if (e.from != at) continue;
      if (left == 1 && e.to != base) continue;
      if (left > 1 && e.to == base) continue;
      const OracleLoop saved = cur;
      cur.quasi += e.shift;
      cur.weight *= e.weight;
      if (left == 1) {
        out.push_back(cur);
      } else {
        cur.interior.push_back(e.to);
        self(self, e.to, left - 1);
      }
      cur = saved;
    }
  };
  rec(rec, base, length);
  return out;
}

namespace {

using Key = std::pair<std::size_t, TableKey>;

OracleSeries multiply(const OracleSeries& a, const OracleSeries& b, std::size_t order) {
  OracleSeries out;
  for (const auto& [ka, ca] : a) {
    for (const auto& [kb, cb] : b) {
      const std::size_t k = ka.first + kb.first;
      if (k > order) continue;
      Footprint f = ka.second.footprint;
      for (std::size_t v = 0; v < f.size(); ++v) f[v] += kb.second.footprint[v];
      out[{k, TableKey{f, ka.second.quasi + kb.second.quasi}}] += ca * cb;
    }
  }
  std::erase_if(out, [](const auto& kv) { return kv.second.is_zero(); });
  return out;
}

void accumulate(OracleSeries& into, const OracleSeries& add, const GaussRational& scale) {
  for (const auto& [k, c] : add) into[k] += c * scale;
  std::erase_if(into, [](const auto& kv) { return kv.second.is_zero(); });
}

}  // namespace

OracleSeries oracle_series(const ValidatedGraph& g, std::size_t base, std::size_t order) {
  const std::size_t n = g.size();
  const TableKey unit_key{Footprint(n, 0), LatticeVector(g.rank())};
  const OracleSeries one = {{{0, unit_key}, GaussRational(1)}};

  std::vector<std::vector<OracleLoop>> loops(order + 1);
  for (std::size_t len = 1; len <= order; ++len) loops[len] = oracle_simple_loops(g, base, len);

  OracleSeries delta;
  for (std::size_t iter = 0; iter < order; ++iter) {
    // G_v = W_v * sum_m (-W_v Delta)^m
    std::vector<OracleSeries> resolvent(n);
    for (std::size_t v = 0; v < n; ++v) {
      if (v == base) continue;
      TableKey wk = unit_key;
      wk.footprint[v] = 1;
      const OracleSeries w = {{{0, wk}, GaussRational(1)}};
      OracleSeries minus_w_delta;
      accumulate(minus_w_delta, multiply(w, delta, order), GaussRational(-1));
      OracleSeries sum = one;
      OracleSeries power = one;
      for (std::size_t m = 1; m <= order; ++m) {
        power = multiply(power, minus_w_delta, order);
        accumulate(sum, power, GaussRational(1));
      }
      resolvent[v] = multiply(w, sum, order);
    }
    OracleSeries next;
    for (std::size_t len = 1; len <= order; ++len) {
      for (const auto& loop : loops[len]) {
        OracleSeries term = {{{len, TableKey{Footprint(n, 0), loop.quasi}}, loop.weight}};
        for (auto v : loop.interior) term = multiply(term, resolvent[v], order);
        accumulate(next, term, GaussRational(1));
      }
    }
    delta = std::move(next);
  }
  return delta;
}

std::map<LatticeVector, std::vector<GaussRational>> oracle_char_split(const ValidatedGraph& g, const Potential& v) {
  using Entry = std::map<LatticeVector, std::vector<GaussRational>>;
  const std::size_t n = g.size();
  auto poly_mul = [](const std::vector<GaussRational>& a, const std::vector<GaussRational>& b) {
    std::vector<GaussRational> out(a.size() + b.size() - 1);
    for (std::size_t i = 0; i < a.size(); ++i) {
      for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    }
    return out;
  };
  std::vector<std::vector<Entry>> m(n, std::vector<Entry>(n));
  for (const auto& e : g.edges()) {
    auto& slot = m[e.from][e.to][e.shift];
    if (slot.empty()) slot.assign(1, GaussRational());
    slot[0] += e.weight;
  }
  for (std::size_t i = 0; i < n; ++i) {
    auto& slot = m[i][i][LatticeVector(g.rank())];
    if (slot.empty()) slot.assign(1, GaussRational());
    slot[0] += v[i];
    slot.resize(2);
    slot[1] = GaussRational(-1);
  }
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  Entry total;
  do {
    int sign = 1;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        if (perm[i] > perm[j]) sign = -sign;
      }
    }
    Entry prod = {{LatticeVector(g.rank()), {GaussRational(sign)}}};
    for (std::size_t i = 0; i < n && !prod.empty(); ++i) {
      Entry next;
      for (const auto& [ea, pa] : prod) {
        for (const auto& [eb, pb] : m[i][perm[i]]) {
          auto& slot = next[ea + eb];
          auto p = poly_mul(pa, pb);
          if (slot.size() < p.size()) slot.resize(p.size());
          for (std::size_t k = 0; k < p.size(); ++k) slot[k] += p[k];
        }
      }
      prod = std::move(next);
    }
    for (const auto& [e, p] : prod) {
      auto& slot = total[e];
      if (slot.size() < p.size()) slot.resize(p.size());
      for (std::size_t k = 0; k < p.size(); ++k) slot[k] += p[k];
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  for (auto it = total.begin(); it != total.end();) {
    auto& p = it->second;
    while (!p.empty() && p.back().is_zero()) p.pop_back();
    it = p.empty() ? total.erase(it) : std::next(it);
  }
  return total;
}

}  // namespace flatband::testing
