#include <gtest/gtest.h>

#include <filesystem>
#include <random>

#include "oracles.hpp"
#include "relcalc/homsearch.hpp"
#include "relcalc/json_io.hpp"

using namespace relcalc;

namespace {

std::vector<RelationalStructure> corpus_structures() {
  std::vector<RelationalStructure> out;
  for (const auto& entry : std::filesystem::directory_iterator(RELCALC_DATA_DIR "/structures")) {
    try {
      out.push_back(read_structure(entry.path()));
    } catch (const InvalidStructure&) {
    }
  }
  return out;
}

}  // namespace

TEST(FindHoms, SToSHasThreeMaps) {
  const auto s = semilattice_structure();
  const auto homs = find_homs(s, s);
  EXPECT_EQ(homs, (std::vector<ElementMap>{{0, 0}, {0, 1}, {1, 1}}));
}

TEST(FindHoms, CorpusAgreesWithBruteForce) {
  const auto corpus = corpus_structures();
  ASSERT_GE(corpus.size(), 5u);
  for (const auto& g : corpus) {
    for (const auto& h : corpus) {
      if (g.signature() != h.signature() || g.size() > 4 || h.size() > 4) continue;
      const auto expected = oracle::all_homs(g, h);
      EXPECT_EQ(find_homs_serial(g, h), expected);
      EXPECT_EQ(find_homs(g, h), expected);
      EXPECT_EQ(count_homs(g, h), expected.size());
    }
  }
}

TEST(FindHoms, RandomStructuresAgreeWithBruteForce) {
  std::mt19937_64 rng(11);
  const Signature sig = {{"E", 2}, {"T", 3}};
  for (int trial = 0; trial < 120; ++trial) {
    const auto g = oracle::random_structure(rng, 1 + trial % 4, sig, 0.15);
    const auto h = oracle::random_structure(rng, 1 + (trial / 4) % 4, sig, 0.5);
    const auto expected = oracle::all_homs(g, h);
    ASSERT_EQ(find_homs_serial(g, h), expected) << "trial " << trial;
    ASSERT_EQ(find_homs(g, h), expected) << "trial " << trial;
  }
}

TEST(FindHoms, OptionsFilterLikeBruteForce) {
  std::mt19937_64 rng(5);
  const Signature sig = {{"E", 2}};
  for (int trial = 0; trial < 60; ++trial) {
    const auto g = oracle::random_structure(rng, 3, sig, 0.2);
    const auto h = oracle::random_structure(rng, 3, sig, 0.6);
    const auto all = oracle::all_homs(g, h);

    SearchOptions nc;
    nc.nonconstant_only = true;
    std::vector<ElementMap> expected_nc;
    for (const auto& m : all) {
      if (!is_constant_map(m)) expected_nc.push_back(m);
    }
    EXPECT_EQ(find_homs(g, h, nc), expected_nc);

    SearchOptions pin;
    pin.pinned = {{1, 2}};
    std::vector<ElementMap> expected_pin;
    for (const auto& m : all) {
      if (m[1] == 2) expected_pin.push_back(m);
    }
    EXPECT_EQ(find_homs(g, h, pin), expected_pin);

    SearchOptions inj;
    inj.injective = true;
    std::vector<ElementMap> expected_inj;
    for (const auto& m : all) {
      if (std::set<Element>(m.begin(), m.end()).size() == m.size()) expected_inj.push_back(m);
    }
    EXPECT_EQ(find_homs(g, h, inj), expected_inj);

    SearchOptions lim;
    lim.limit = 2;
    const auto limited = find_homs(g, h, lim);
    EXPECT_EQ(limited, std::vector<ElementMap>(all.begin(), all.begin() + std::min<std::size_t>(2, all.size())));
  }
}

TEST(FindHoms, EmptySource) {
  const RelationalStructure empty(0);
  RelationalStructure h(2);
  h.add_relation("R", Relation(3));
  RelationalStructure g(0);
  g.add_relation("R", Relation(3));
  EXPECT_EQ(find_homs(g, h).size(), 1u);
}

TEST(FindHoms, SignatureMismatchThrows) {
  RelationalStructure g(2);
  g.add_relation("E", Relation(2, std::vector<Tuple>{{0, 1}}));
  EXPECT_THROW(find_homs(g, semilattice_structure()), SignatureMismatch);
}

TEST(HomCheck, ReportsFailingTuple) {
  const auto s = semilattice_structure();
  const auto c = is_homomorphism(s, s, ElementMap{1, 0});
  EXPECT_FALSE(c.ok);
  EXPECT_EQ(c.symbol, "R");
  EXPECT_FALSE(s.only_relation().contains(c.image));
  EXPECT_TRUE(is_homomorphism(s, s, ElementMap{0, 1}).ok);
  auto ps = std::make_shared<const RelationalStructure>(s);
  EXPECT_THROW(make_homomorphism(ps, ps, ElementMap{1, 0}), VerificationFailure);
}

TEST(Polymorphisms, CountsOnS) {
  const auto s = semilattice_structure();
  EXPECT_EQ(polymorphisms(s, 1).size(), 3u);
  EXPECT_EQ(polymorphisms(s, 2).size(), 5u);
  EXPECT_EQ(polymorphisms(s, 3).size(), 9u);
}

TEST(Polymorphisms, MatchHomsFromPower) {
  const auto s = semilattice_structure();
  for (std::size_t n = 1; n <= 3; ++n) {
    const auto tables = polymorphisms(s, n);
    const auto homs = oracle::all_homs(power(s, n), s);
    ASSERT_EQ(tables.size(), homs.size());
    for (std::size_t i = 0; i < homs.size(); ++i) {
      EXPECT_EQ(tables[i].values(), homs[i]);
      EXPECT_TRUE(is_polymorphism(s, tables[i]));
    }
  }
}

TEST(Polymorphisms, IsPolymorphismMatchesPowerHoms) {
  // every binary operation on {0,1}
  const auto s = semilattice_structure();
  std::size_t accepted = 0;
  for (unsigned code = 0; code < 16; ++code) {
    OperationTable t(2, 2, {code & 1u, (code >> 1) & 1u, (code >> 2) & 1u, (code >> 3) & 1u});
    const bool direct = is_polymorphism(s, t);
    EXPECT_EQ(direct, oracle::preserves(power(s, 2), s, t.values())) << code;
    accepted += direct;
  }
  EXPECT_EQ(accepted, 5u);
}

TEST(Retraction, SPlusIRetractsOntoS) {
  const auto u = read_structure(RELCALC_DATA_DIR "/structures/S_plus_I.json");
  const auto s = semilattice_structure();
  const auto r = find_retraction(u, s);
  ASSERT_TRUE(r.has_value());
  EXPECT_EQ(compose(r->coretraction, r->retraction), (ElementMap{0, 1}));
  EXPECT_TRUE(is_homomorphism(u, s, r->retraction).ok);
  EXPECT_TRUE(is_homomorphism(s, u, r->coretraction).ok);
  EXPECT_FALSE(find_retraction(point_structure(), s).has_value());
}

TEST(Retraction, GivenCoretraction) {
  const auto u = read_structure(RELCALC_DATA_DIR "/structures/S_plus_I.json");
  const auto s = semilattice_structure();
  const auto r = find_retraction(u, s, ElementMap{0, 1});
  ASSERT_TRUE(r.has_value());
  EXPECT_EQ(r->coretraction, (ElementMap{0, 1}));
  EXPECT_FALSE(find_retraction(u, s, ElementMap{1, 0}).has_value());
}

TEST(Isomorphism, E0IsSPlusI) {
  const auto e0 = read_structure(RELCALC_DATA_DIR "/structures/E0.json");
  const auto u = read_structure(RELCALC_DATA_DIR "/structures/S_plus_I.json");
  const auto iso = find_isomorphism(e0, u);
  ASSERT_TRUE(iso.has_value());
  EXPECT_TRUE(is_homomorphism(e0, u, *iso).ok);
  EXPECT_FALSE(find_isomorphism(semilattice_structure(), power(semilattice_structure(), 2)).has_value());
}

TEST(Compose, Basics) {
  EXPECT_EQ(compose(ElementMap{1, 0, 1}, ElementMap{2, 3}), (ElementMap{3, 2, 3}));
  EXPECT_TRUE(is_constant_map(ElementMap{4, 4}));
  EXPECT_FALSE(is_constant_map(ElementMap{4, 5}));
}
