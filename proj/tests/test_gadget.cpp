#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "relcalc/gadget.hpp"
#include "relcalc/json_io.hpp"
#include "relcalc/semilat.hpp"

using namespace relcalc;

namespace {

/// Direct transcription of the transform: enumerate Hom(𝕊, D) and test every triple against 𝕐.
std::set<Tuple> transform_oracle(const RelationalStructure& d, std::size_t* universe) {
  const auto homs = oracle::all_homs(semilattice_structure(), d);
  *universe = homs.size();
  const auto y = y_structure(d.only_symbol());
  std::set<Tuple> out;
  for (Element f = 0; f < homs.size(); ++f) {
    for (Element g = 0; g < homs.size(); ++g) {
      for (Element h = 0; h < homs.size(); ++h) {
        if (homs[f][0] != homs[g][0] || homs[f][0] != homs[h][0]) continue;
        const ElementMap m = {homs[f][0], homs[f][1], homs[g][1], homs[h][1]};
        if (oracle::preserves(y, d, m)) out.insert({f, g, h});
      }
    }
  }
  return out;
}

std::map<std::size_t, std::size_t> multiplicities(const PowerProfile& p) { return p.multiplicity; }

}  // namespace

TEST(YStructure, Invariants) {
  const auto y = y_structure();
  EXPECT_EQ(y.labels(), (std::vector<std::string>{"d", "a", "b", "c"}));
  EXPECT_TRUE(is_reflexive(y));
  EXPECT_EQ(y.only_relation().size(), 16u);
  EXPECT_TRUE(is_partial_semilattice(y).accepted());
  EXPECT_FALSE(largest_element(y).has_value());
  const auto a = *y.find_label("a"), b = *y.find_label("b"), c = *y.find_label("c");
  EXPECT_EQ(meet_lookup(y, a, b), c);
}

TEST(YStructure, SelfTest) { EXPECT_TRUE(y_reconstruction_self_test()); }

TEST(Gadget, E0Golden) {
  const auto e0 = gadget_transform(semilattice_structure());
  EXPECT_EQ(e0, read_structure(RELCALC_DATA_DIR "/structures/E0.json"));
  EXPECT_TRUE(find_isomorphism(e0, read_structure(RELCALC_DATA_DIR "/structures/S_plus_I.json")).has_value());
}

TEST(Gadget, PointIsFixed) {
  EXPECT_EQ(gadget_transform(point_structure()).only_relation().size(), 1u);
  EXPECT_TRUE(find_isomorphism(gadget_transform(point_structure()), point_structure()).has_value());
}

TEST(Gadget, MatchesOracleOnRandomStructures) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 60; ++trial) {
    const auto d = oracle::random_structure(rng, 1 + trial % 4, {{"R", 3}}, 0.35);
    std::size_t n = 0;
    const auto expected = transform_oracle(d, &n);
    const auto got = gadget_transform(d);
    ASSERT_EQ(got.size(), n);
    const auto rows = got.only_relation().rows();
    EXPECT_EQ(std::set<Tuple>(rows.begin(), rows.end()), expected) << "trial " << trial;
  }
}

TEST(Gadget, PreservesReflexivity) {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 40; ++trial) {
    auto d = oracle::random_structure(rng, 2 + trial % 3, {{"R", 3}}, 0.4);
    auto rows = d.only_relation().rows();
    for (Element e = 0; e < d.size(); ++e) rows.push_back({e, e, e});
    RelationalStructure refl(d.size());
    refl.add_relation("R", Relation(3, rows));
    EXPECT_TRUE(is_reflexive(gadget_transform(refl)));
  }
}

TEST(Gadget, CommutesWithProducts) {
  const auto s = semilattice_structure();
  const auto e0 = gadget_transform(s);
  const std::vector<RelationalStructure> pair = {e0, e0};
  EXPECT_TRUE(find_isomorphism(gadget_transform(power(s, 2)), product(pair)).has_value());
}

TEST(Gadget, RejectsWrongSignature) {
  RelationalStructure g(2);
  g.add_relation("E", Relation(2, std::vector<Tuple>{{0, 1}}));
  EXPECT_THROW(gadget_transform(g), SignatureMismatch);
}

TEST(PowerProfile, RecognizesPowers) {
  const auto s = semilattice_structure();
  const std::vector<RelationalStructure> parts = {power(s, 2), point_structure(), s};
  const auto p = power_profile(disjoint_union(parts));
  EXPECT_TRUE(p.all_matched());
  EXPECT_EQ(multiplicities(p), (std::map<std::size_t, std::size_t>{{0, 1}, {1, 1}, {2, 1}}));
  const auto not_power = power_profile(read_structure(RELCALC_DATA_DIR "/structures/chain3.json"));
  EXPECT_EQ(not_power.unmatched, 1u);
  EXPECT_THROW(analyze_gadget_components(read_structure(RELCALC_DATA_DIR "/structures/chain3.json")), Error);
}

TEST(GadgetComponents, BinomialMultiplicities) {
  const auto s = semilattice_structure();
  for (std::size_t n = 1; n <= 3; ++n) {
    const auto g = analyze_gadget_components(power(s, n));
    EXPECT_EQ(multiplicities(g.input), (std::map<std::size_t, std::size_t>{{n, 1}}));
    ASSERT_TRUE(g.output.all_matched());
    std::size_t binom = 1;
    for (std::size_t k = 0; k <= n; ++k) {
      EXPECT_EQ(g.output.multiplicity.at(k), binom) << "n=" << n << " k=" << k;
      binom = binom * (n - k) / (k + 1);
    }
  }
}

TEST(GadgetComponents, DiagonalProductDoubles) {
  const auto s = semilattice_structure();
  for (std::size_t n = 1; n <= 2; ++n) {
    const auto plain = analyze_gadget_components(power(s, n));
    const std::vector<RelationalStructure> factors = {plain.transformed, diagonal_structure(2)};
    const auto doubled = power_profile(product(factors));
    ASSERT_TRUE(doubled.all_matched());
    for (const auto& [k, count] : plain.output.multiplicity) EXPECT_EQ(doubled.multiplicity.at(k), 2 * count);
  }
}

TEST(Diagonal, Structure) {
  const auto d = diagonal_structure(3);
  EXPECT_EQ(d.size(), 3u);
  EXPECT_EQ(d.only_relation().size(), 3u);
  EXPECT_EQ(power_profile(d).multiplicity.at(0), 3u);
}
