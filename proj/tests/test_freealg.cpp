#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "relcalc/freealg.hpp"

using namespace relcalc;

namespace {

std::set<oracle::Function> as_set(const FreeAlgebra& f) {
  return {f.functions.begin(), f.functions.end()};
}

void expect_matches_oracle(const FiniteAlgebra& a, std::size_t k, std::size_t expected_size) {
  const auto f = free_algebra(a, k);
  EXPECT_EQ(f.size(), expected_size);
  EXPECT_EQ(as_set(f), oracle::free_algebra_set(a, k));
}

}  // namespace

TEST(FreeAlgebra, VariableNames) {
  EXPECT_EQ(variable_names(2), (std::vector<std::string>{"x", "y"}));
  EXPECT_EQ(variable_names(4), (std::vector<std::string>{"x1", "x2", "x3", "x4"}));
}

TEST(FreeAlgebra, SizesMatchNaiveClosure) {
  expect_matches_oracle(fixtures::empty_signature(), 2, 2);
  expect_matches_oracle(fixtures::semilattice(), 1, 1);
  expect_matches_oracle(fixtures::semilattice(), 2, 3);
  expect_matches_oracle(fixtures::semilattice(), 3, 7);
  expect_matches_oracle(fixtures::lattice(), 2, 4);
  expect_matches_oracle(fixtures::lattice(), 3, 18);
  expect_matches_oracle(fixtures::majority_algebra(), 3, 4);
  expect_matches_oracle(fixtures::minority_algebra(), 3, 4);
  expect_matches_oracle(fixtures::chain3(), 2, 3);
}

TEST(FreeAlgebra, GeneratorsAreProjections) {
  const auto f = free_algebra(fixtures::semilattice(), 2);
  ASSERT_EQ(f.generators, (std::vector<Element>{0, 1}));
  EXPECT_EQ(f.functions[0], (std::vector<Element>{0, 0, 1, 1}));
  EXPECT_EQ(f.functions[1], (std::vector<Element>{0, 1, 0, 1}));
  EXPECT_EQ(f.term_name(0), "x");
  EXPECT_EQ(f.term_name(2), "meet(x,y)");
  EXPECT_FALSE(f.derived_by[0].has_value());
  EXPECT_TRUE(f.derived_by[2].has_value());
  EXPECT_EQ(f.find(std::vector<Element>{0, 0, 0, 1}), 2u);
  EXPECT_FALSE(f.find(std::vector<Element>{1, 1, 1, 1}).has_value());
}

TEST(FreeAlgebra, TablesAgreeWithFunctions) {
  const auto a = fixtures::lattice();
  const auto f = free_algebra(a, 2);
  f.algebra.validate();
  for (const auto& [symbol, table] : f.algebra.operations) {
    const auto& base = a.operations.at(symbol);
    for (Element p = 0; p < f.size(); ++p) {
      for (Element q = 0; q < f.size(); ++q) {
        const Element r = table(std::vector<Element>{p, q});
        for (std::size_t i = 0; i < f.functions[p].size(); ++i) {
          EXPECT_EQ(f.functions[r][i], base(std::vector<Element>{f.functions[p][i], f.functions[q][i]}));
        }
      }
    }
  }
}

TEST(FreeAlgebra, LoggedStepsAreIdentitiesOfA) {
  for (const auto& a : {fixtures::semilattice(), fixtures::lattice(), fixtures::majority_algebra(),
                        fixtures::minority_algebra()}) {
    for (std::size_t k = 1; k <= 3; ++k) {
      const auto f = free_algebra(a, k);
      for (const auto* log : {&f.derivation, &f.coincidences}) {
        for (const auto& step : *log) {
          const auto id = f.identity(step);
          EXPECT_TRUE(ident::holds_in(a, id, a.operations).holds) << ident::to_string(id);
        }
      }
      EXPECT_EQ(f.derivation.size() + f.generators.size(), f.size());
    }
  }
}

TEST(FreeAlgebra, TermsEvaluateToTheirFunctions) {
  const auto a = fixtures::lattice();
  const auto f = free_algebra(a, 3);
  for (Element e = 0; e < f.size(); ++e) {
    const ident::Identity self{f.term(e), f.term(e)};
    EXPECT_TRUE(ident::holds_in(a, self, a.operations).holds);
  }
}

TEST(FreeAlgebra, SizeBound) {
  EXPECT_THROW(free_algebra(fixtures::lattice(), 4, Limits{100}), SizeBoundExceeded);
}
