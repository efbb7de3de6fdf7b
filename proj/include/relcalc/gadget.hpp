#pragma once

// The transform D -> D2 on Hom(𝕊, D) through the four-element semilattice 𝕐,
// and recognition of disjoint unions of powers of 𝕊.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "relcalc/structure.hpp"

namespace relcalc {

/// Universe d, a, b, c (ids 0..3) with every triple (u, v, u∧v) for the order
/// d < c < a, d < c < b.
RelationalStructure y_structure(const std::string& symbol = "R");

/// Universe: homomorphisms 𝕊 -> D in lexicographic order of (f(0), f(1)),
/// labelled "(f(0),f(1))". (f, g, h) is a triple when d -> f(0) = g(0) = h(0),
/// a -> f(1), b -> g(1), c -> h(1) is a homomorphism 𝕐 -> D.
/// Throws SignatureMismatch unless D has a single ternary relation.
RelationalStructure gadget_transform(const RelationalStructure& d);

/// True when gadget_transform(𝕊) has exactly the five triples on
/// (0,0), (0,1), (1,1) that pin down 𝕐.
bool y_reconstruction_self_test();

/// n points, constant triples only.
RelationalStructure diagonal_structure(std::size_t n, const std::string& symbol = "R");

struct MatchedComponent {
  std::vector<Element> members;
  std::optional<std::size_t> power;  // k with component ≅ 𝕊^k (𝕊^0 = 𝕀)
};

struct PowerProfile {
  std::vector<MatchedComponent> components;
  std::map<std::size_t, std::size_t> multiplicity;  // k -> number of components ≅ 𝕊^k
  std::size_t unmatched = 0;

  bool all_matched() const noexcept { return unmatched == 0; }
};

/// Matches every connected component against 𝕊^k by isomorphism search.
PowerProfile power_profile(const RelationalStructure& s);

struct GadgetAnalysis {
  PowerProfile input;
  RelationalStructure transformed;
  PowerProfile output;
};

/// Checks that D is a disjoint union of powers of 𝕊 (Error otherwise), then
/// transforms it and matches the components of the result.
GadgetAnalysis analyze_gadget_components(const RelationalStructure& d);

}  // namespace relcalc
