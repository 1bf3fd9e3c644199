#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include "support.hpp"

namespace flatband {
namespace {

using testing::load_fixture;

Footprint foot(std::size_t n, std::initializer_list<std::pair<std::size_t, std::uint32_t>> items) {
  Footprint f(n, 0);
  for (auto [v, m] : items) f[v - 1] = m;
  return f;
}

template <class F>
ErrorKind kind_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorKind::InvalidArgument;
}

// h12 = 1 + z + z^2, h21 = 1 - z^-1 + z^-2: the two quasimomentum +1 loops cancel.
ValidatedGraph cancelling_dimer() {
  PeriodicGraphSpec s;
  s.rank = 1;
  s.size = 2;
  s.edges = {{0, 1, {0}, 1}, {0, 1, {1}, 1}, {0, 1, {2}, 1}, {1, 0, {0}, 1}, {1, 0, {-1}, -1}, {1, 0, {-2}, 1}};
  s.potential.values = {0, 1};
  return validate_spec(s);
}

TEST(ExtremalSearch, Examples) {
  const auto chain1 = extremal_search(load_fixture("single_chain.json"), 0);
  EXPECT_EQ(chain1.length, 1U);
  EXPECT_EQ(chain1.distinct, 0U);
  EXPECT_EQ(chain1.extremals.size(), 2U);

  const auto lieb = extremal_search(load_fixture("lieb.json"), 0);
  EXPECT_EQ(lieb.length, 2U);
  EXPECT_EQ(lieb.distinct, 1U);
  EXPECT_EQ(lieb.extremals.size(), 4U);

  const auto chain = extremal_search(load_fixture("chain.json"), 2);
  EXPECT_EQ(chain.length, 3U);
  EXPECT_EQ(chain.distinct, 2U);
  std::vector<std::int64_t> quasi;
  for (const auto& c : chain.extremals) quasi.push_back(c->stats().quasi[0]);
  std::sort(quasi.begin(), quasi.end());
  EXPECT_EQ(quasi, (std::vector<std::int64_t>{-3, -1, 1, 3}));
}

TEST(ExtremalSearch, NoNonzeroQuasiLoop) {
  EXPECT_EQ(kind_of([] { extremal_search(load_fixture("isolated.json"), 0); }), ErrorKind::NoNonzeroQuasiLoop);
  const auto g = load_fixture("finite_component.json");
  EXPECT_EQ(kind_of([&] { extremal_search(g, 1); }), ErrorKind::NoNonzeroQuasiLoop);
  EXPECT_NO_THROW(extremal_search(g, 0));
}

TEST(ExtremalSearch, ShorterLoopsHaveZeroQuasi) {
  Rng rng(83);
  std::vector<ValidatedGraph> graphs;
  for (const auto& name : testing::fixture_names()) graphs.push_back(load_fixture(name));
  for (int t = 0; t < 15; ++t) graphs.push_back(testing::random_spec(rng, {.require_connected = true}));
  for (const auto& g : graphs) {
    for (std::size_t base = 0; base < g.size(); ++base) {
      ExtremalSearch s;
      try {
        s = extremal_search(g, base);
      } catch (const Error& e) {
        ASSERT_EQ(e.kind(), ErrorKind::NoNonzeroQuasiLoop);
        continue;
      }
      ConfigEnumerator e(g, base);
      for (std::size_t len = 1; len <= s.length; ++len) {
        e.for_each(len, [&](const ConfigPtr& c) {
          if (len < s.length || !c->is_simple()) {
            EXPECT_TRUE(c->stats().quasi.is_zero()) << c->encode();
          } else if (!c->stats().quasi.is_zero()) {
            EXPECT_GE(footprint_distinct(c->stats().footprint), s.distinct);
          }
        });
      }
    }
  }
}

TEST(SymmetricSearch, Examples) {
  const auto chain = symmetric_extremal_search(load_fixture("chain.json"), 2, 4);
  EXPECT_EQ(chain.length, 4U);
  bool plus = false;
  bool minus = false;
  for (const auto& c : chain.configs) {
    const auto& s = c->stats();
    EXPECT_TRUE(footprint_symmetric(s.footprint));
    EXPECT_FALSE(s.quasi.is_zero());
    plus = plus || s.quasi == LatticeVector{2};
    minus = minus || s.quasi == LatticeVector{-2};
  }
  EXPECT_TRUE(plus);
  EXPECT_TRUE(minus);

  EXPECT_EQ(kind_of([] { symmetric_extremal_search(load_fixture("single_chain.json"), 0, 6); }), ErrorKind::NoneFound);

  const auto dimer = symmetric_extremal_search(load_fixture("dimer.json"), 0, 3);
  EXPECT_EQ(dimer.length, 2U);
  ASSERT_EQ(dimer.configs.size(), 2U);
  for (const auto& c : dimer.configs) EXPECT_EQ(c->stats().footprint, foot(2, {{2, 1}}));
}

TEST(NonCancelable, Examples) {
  const auto lieb = load_fixture("lieb.json");
  for (const auto& c : extremal_search(lieb, 0).extremals) EXPECT_TRUE(non_cancelable_check(lieb, *c).unique);

  const auto chain = load_fixture("chain.json");
  for (const auto& c : extremal_search(chain, 2).extremals) EXPECT_TRUE(non_cancelable_check(chain, *c).unique);

  const auto g = cancelling_dimer();
  std::size_t cancelable = 0;
  for (const auto& c : extremal_search(g, 0).extremals) {
    const auto check = non_cancelable_check(g, *c);
    if (c->stats().quasi == LatticeVector{1} || c->stats().quasi == LatticeVector{-1}) {
      EXPECT_FALSE(check.unique);
      EXPECT_EQ(check.competitors.size(), 1U);
      ++cancelable;
    } else {
      EXPECT_TRUE(check.unique);
    }
  }
  EXPECT_EQ(cancelable, 4U);

  for (const auto& c : enumerate_configs(lieb, 0, 2)) {
    if (c->stats().quasi.is_zero()) {
      EXPECT_EQ(kind_of([&] { non_cancelable_check(lieb, *c); }), ErrorKind::InvalidArgument);
    }
  }
}

TEST(Certificate, Examples) {
  const auto c1 = verify_obstruction(load_fixture("single_chain.json"), 0);
  EXPECT_EQ(c1.branch, CertificateBranch::Extremal);
  EXPECT_EQ(c1.footprint, Footprint(1, 0));
  EXPECT_EQ(c1.quasi, LatticeVector{1});
  EXPECT_EQ(c1.totalcont, GaussRational(1));

  const auto lieb = load_fixture("lieb.json");
  const auto c2 = verify_obstruction(lieb, 0);
  EXPECT_EQ(c2.extremal_length, 2U);
  EXPECT_EQ(c2.footprint, foot(3, {{2, 1}}));
  EXPECT_EQ(c2.quasi, (LatticeVector{1, 0}));
  EXPECT_EQ(c2.totalcont, GaussRational(1));
  EXPECT_EQ(verify_obstruction(lieb, 2).quasi, (LatticeVector{0, 1}));

  const auto c3 = verify_obstruction(load_fixture("chain.json"), 2);
  EXPECT_EQ(c3.branch, CertificateBranch::Extremal);
  EXPECT_EQ(c3.extremal_length, 3U);
  EXPECT_EQ(c3.footprint, foot(3, {{1, 1}, {2, 1}}));
  EXPECT_EQ(c3.quasi, LatticeVector{3});
  EXPECT_EQ(c3.totalcont, GaussRational(-1));
}

TEST(Certificate, SkipsCancelledEntries) {
  const auto c = verify_obstruction(cancelling_dimer(), 0);
  EXPECT_EQ(c.branch, CertificateBranch::Extremal);
  EXPECT_EQ(c.quasi, LatticeVector{2});
  EXPECT_EQ(c.totalcont, GaussRational(1));
}

TEST(Certificate, AgreesWithTables) {
  Rng rng(89);
  std::vector<ValidatedGraph> graphs;
  for (const auto& name : testing::fixture_names()) graphs.push_back(load_fixture(name));
  graphs.push_back(cancelling_dimer());
  for (int t = 0; t < 15; ++t) graphs.push_back(testing::random_spec(rng, {.require_connected = true}));
  for (const auto& g : graphs) {
    for (std::size_t base = 0; base < g.size(); ++base) {
      Certificate c;
      try {
        c = verify_obstruction(g, base);
      } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::NoNonzeroQuasiLoop);
        continue;
      }
      const std::size_t order = c.branch == CertificateBranch::Extremal ? c.extremal_length : c.extremal_length + 1;
      const auto table = resummed_table(g, base, order);
      const auto& entry = table.entries.at({c.footprint, c.quasi});
      EXPECT_EQ(entry.totalcont, c.totalcont);
      EXPECT_FALSE(c.totalcont.is_zero());
      EXPECT_FALSE(c.quasi.is_zero());
      if (c.branch == CertificateBranch::Symmetric) EXPECT_TRUE(footprint_symmetric(c.footprint));
    }
  }
}

TEST(Disjunction, HoldsOnFixtures) {
  for (const auto& name : testing::fixture_names()) {
    const auto g = load_fixture(name);
    for (std::size_t base = 0; base < g.size(); ++base) EXPECT_TRUE(obstruction_disjunction(g, base).holds()) << name;
  }
  const auto r = obstruction_disjunction(cancelling_dimer(), 0);
  EXPECT_FALSE(r.all_extremals_unique);
  EXPECT_EQ(r.cancelable_extremals.size(), 4U);
}

// Every composition of 1..n into identity or reflection blocks.
std::vector<std::vector<std::size_t>> block_permutations(std::size_t n) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> cur;
  auto rec = [&](auto&& self, std::size_t start) -> void {
    if (start > n) {
      out.push_back(cur);
      return;
    }
    for (std::size_t end = start; end <= n; ++end) {
      for (int reflect = 0; reflect < 2; ++reflect) {
        if (reflect && end == start) continue;
        for (std::size_t i = start; i <= end; ++i) cur.push_back(reflect ? start + end - i : i);
        self(self, end + 1);
        cur.resize(start - 1);
      }
    }
  };
  rec(rec, 1);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

TEST(Permutation, Examples) {
  const std::vector<std::size_t> rev = {3, 2, 1, 4};
  const auto d = special_permutation_decompose(rev);
  ASSERT_TRUE(std::holds_alternative<std::vector<PermutationBlock>>(d));
  EXPECT_EQ(std::get<std::vector<PermutationBlock>>(d),
            (std::vector<PermutationBlock>{{1, 3, true}, {4, 4, false}}));

  const std::vector<std::size_t> bad = {2, 3, 1};
  const auto v = special_permutation_decompose(bad);
  ASSERT_TRUE(std::holds_alternative<InversionViolation>(v));
  EXPECT_EQ(std::get<InversionViolation>(v), (InversionViolation{1, 3}));

  const std::vector<std::size_t> id = {1, 2, 3};
  EXPECT_EQ(std::get<std::vector<PermutationBlock>>(special_permutation_decompose(id)),
            (std::vector<PermutationBlock>{{1, 3, false}}));

  EXPECT_EQ(kind_of([] { special_permutation_decompose({1, 1, 2}); }), ErrorKind::InvalidArgument);
  EXPECT_EQ(kind_of([] { special_permutation_decompose({0, 1}); }), ErrorKind::InvalidArgument);
  EXPECT_TRUE(std::holds_alternative<std::vector<PermutationBlock>>(special_permutation_decompose({})));
}

TEST(Permutation, BruteForceUpToSix) {
  for (std::size_t n = 1; n <= 6; ++n) {
    const auto blocky = block_permutations(n);
    std::vector<std::size_t> sigma(n);
    std::iota(sigma.begin(), sigma.end(), 1);
    do {
      const bool want = std::binary_search(blocky.begin(), blocky.end(), sigma);
      EXPECT_EQ(special_permutation_hypothesis(sigma), want);
      const auto d = special_permutation_decompose(sigma);
      if (want) {
        ASSERT_TRUE(std::holds_alternative<std::vector<PermutationBlock>>(d));
        EXPECT_TRUE(decomposition_valid(sigma, std::get<std::vector<PermutationBlock>>(d)));
      } else {
        ASSERT_TRUE(std::holds_alternative<InversionViolation>(d));
        const auto [i, j] = std::get<InversionViolation>(d);
        EXPECT_LT(i, j);
        EXPECT_GT(sigma[i - 1], sigma[j - 1]);
        EXPECT_NE(sigma[i - 1] - sigma[j - 1], j - i);
      }
    } while (std::next_permutation(sigma.begin(), sigma.end()));
  }
}

}  // namespace
}  // namespace flatband
