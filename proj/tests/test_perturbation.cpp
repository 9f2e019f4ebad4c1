#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "mck/perturbation.hpp"
#include "oracles.hpp"

using namespace mck;

namespace {

const Marking kAllTwo = Marking::all(2, 2, 2);

std::vector<MorseGraph> seeds_of(int q) {
  std::vector<MorseGraph> out;
  for (const auto& g : oracle::full_catalog(q))
    if (g.levels() == 1) out.push_back(g);
  return out;
}

// Every ordered family of sub-blocks of the given level.
std::vector<std::vector<std::vector<int>>> splits_of(const MorseGraph& g, int level) {
  std::vector<int> saddles;
  for (int v = 0; v < g.q; ++v)
    if (g.level[v] == level) saddles.push_back(v + 1);
  std::vector<std::vector<std::vector<int>>> out;
  for (const auto& f : oracle::level_functions(static_cast<int>(saddles.size()))) {
    const int m = *std::max_element(f.begin(), f.end()) + 1;
    std::vector<std::vector<int>> blocks(m);
    for (std::size_t i = 0; i < saddles.size(); ++i) blocks[f[i]].push_back(saddles[i]);
    out.push_back(blocks);
  }
  return out;
}

}  // namespace

TEST_CASE("identity split and identity refinement") {
  for (const auto& g : oracle::full_catalog(3)) {
    const std::string form = canonical_form(g);
    CHECK(canonical_form(delta(g, invariants(g).J)) == form);
    for (int l = 0; l < g.levels(); ++l) {
      std::vector<int> all;
      for (int v = 0; v < g.q; ++v)
        if (g.level[v] == l) all.push_back(v + 1);
      CHECK(canonical_form(split_level(g, l, {all})) == form);
    }
  }
}

TEST_CASE("splitting one q = 2 atom into two levels") {
  int tried = 0;
  for (const auto& g : seeds_of(2)) {
    const Topology t = trace(g);
    if (t.atoms.size() != 1) continue;
    for (const auto& blocks : std::vector<std::vector<std::vector<int>>>{{{1}, {2}}, {{2}, {1}}}) {
      const MorseGraph h = split_level(g, 0, blocks);
      const RegionReport rep = validate(h);
      CHECK(rep.s == 2);
      CHECK((g.q - 1) - (h.q - rep.s) == 1);
      CHECK(invariants(h).J == OrderedPartition(2, blocks));
      ++tried;
    }
  }
  CHECK(tried > 0);
}

TEST_CASE("every split preserves counts, labels and the sphere condition") {
  for (int q = 1; q <= 3; ++q)
    for (const auto& g : oracle::full_catalog(q)) {
      const auto inv = invariants(g);
      for (int l = 0; l < g.levels(); ++l)
        for (const auto& blocks : splits_of(g, l)) {
          const MorseGraph h = split_level(g, l, blocks);
          const RegionReport rep = validate(h);
          CHECK(rep.p == g.p);
          CHECK(rep.q == g.q);
          CHECK(rep.r == g.r);
          CHECK(rep.s == inv.s + static_cast<int>(blocks.size()) - 1);
          CHECK(rep.n >= inv.n);
          CHECK(h.marks == g.marks);
          std::multiset<std::pair<int, int>> before, after;
          for (const auto& c : g.caps) before.insert({static_cast<int>(c.kind), c.label});
          for (const auto& c : h.caps) after.insert({static_cast<int>(c.kind), c.label});
          CHECK(before == after);
        }
    }
}

TEST_CASE("split argument errors") {
  const MorseGraph g = oracle::two_level_example(kAllTwo);
  CHECK_THROWS_AS(split_level(g, 0, {{2}}), ArgumentError);
  CHECK_THROWS_AS(split_level(g, 0, {{1}, {}}), ArgumentError);
  CHECK_THROWS_AS(split_level(g, 5, {{1}}), ArgumentError);
  const MorseGraph f = merge_all_levels(g);
  CHECK_THROWS_AS(split_level(f, 0, {{1}, {1, 2}}), ArgumentError);
  CHECK_THROWS_AS(delta(g, OrderedPartition(2, {{1, 2}})), ArgumentError);
  CHECK_THROWS_AS(delta(g, OrderedPartition(2, {{2}, {1}})), ArgumentError);
}

TEST_CASE("index arithmetic and transitivity over all faces") {
  for (int q = 1; q <= 3; ++q)
    for (const auto& g : oracle::full_catalog(q)) {
      const auto J = invariants(g).J;
      for (const auto& J1 : refinements(J)) {
        const MorseGraph h1 = delta(g, J1);
        CHECK(q - invariants(h1).s == q - J1.size());
        CHECK(invariants(h1).J == J1);
        for (const auto& J2 : refinements(J1))
          CHECK(canonical_form(delta(h1, J2)) == canonical_form(delta(g, J2)));
      }
    }
}

TEST_CASE("chain independence") {
  for (int q = 2; q <= 3; ++q)
    for (const auto& g : oracle::full_catalog(q)) {
      const auto J = invariants(g).J;
      for (const auto& target : refinements(J)) {
        const auto chains = maximal_chains(J, target);
        REQUIRE_FALSE(chains.empty());
        const std::string expect = canonical_form(delta(g, target));
        for (const auto& chain : chains) {
          CHECK(chain.front() == J);
          CHECK(chain.back() == target);
          CHECK(canonical_form(delta_along(g, chain)) == expect);
        }
      }
    }
}

TEST_CASE("closure of the seeds equals direct enumeration at q <= 2") {
  for (int q = 1; q <= 2; ++q)
    for (auto [p, r] : oracle::sphere_counts(q)) {
      const Marking m = Marking::all(p, q, r);
      std::set<std::string> closed;
      for (const auto& g : oracle::catalog(p, q, r, m)) closed.insert(canonical_form(g));
      CHECK(closed == oracle::direct_enumeration(p, q, r, m));
    }
}

TEST_CASE("merge all levels") {
  const MorseGraph f0 = oracle::figure_eight(Marking::all(2, 1, 1));
  CHECK(canonical_form(merge_all_levels(f0)) == canonical_form(f0));

  const MorseGraph g = oracle::two_level_example(kAllTwo);
  const MorseGraph f = merge_all_levels(g);
  CHECK(f.levels() == 1);
  const Topology t = trace(f);
  CHECK(t.atoms.size() == 1);
  CHECK(t.atoms[0] == std::vector<int>{0, 1});
  CHECK(canonical_form(delta(f, invariants(g).J)) == canonical_form(g));

  for (int q = 1; q <= 3; ++q)
    for (const auto& h : oracle::full_catalog(q)) {
      const MorseGraph m = merge_all_levels(h);
      CHECK(m.levels() == 1);
      CHECK(canonical_form(delta(m, invariants(h).J)) == canonical_form(h));
    }
}

TEST_CASE("compatibility with automorphisms") {
  const Marking part{1, 1, 1, 0, 0, 0};
  int nontrivial = 0;
  for (const auto& g : oracle::catalog(2, 3, 3, part)) {
    const auto autos = automorphisms(g);
    if (autos.size() < 2) continue;
    const auto J = invariants(g).J;
    for (const auto& a : autos)
      for (const auto& target : refinements(J)) {
        std::vector<int> level(g.q);
        for (int v = 0; v < g.q; ++v) level[a.saddle_map[v]] = target.levels()[v];
        const OrderedPartition moved = OrderedPartition::from_levels(level);
        CHECK(canonical_form(delta(g, moved)) == canonical_form(delta(g, target)));
        ++nontrivial;
      }
  }
  CHECK(nontrivial > 0);
}
