#pragma once

// Partial semilattices: structures with one reflexive ternary relation made of
// triples (a, b, a∧b) for some ambient meet semilattice.

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "relcalc/homsearch.hpp"
#include "relcalc/structure.hpp"

namespace relcalc {

/// Partial binary operation read off a single ternary relation.
class MeetTable {
 public:
  /// Throws InvalidStructure unless `s` has exactly one relation and it is
  /// ternary; throws NonFunctional on (a,b,c), (a,b,c') with c != c'.
  explicit MeetTable(const RelationalStructure& s);

  std::size_t size() const noexcept { return n_; }
  std::optional<Element> operator()(Element a, Element b) const;

 private:
  std::size_t n_;
  std::vector<std::optional<Element>> table_;
};

std::optional<Element> meet_lookup(const RelationalStructure& s, Element a, Element b);
/// ((a1 ⊓ a2) ⊓ a3) ... ⊓ an; none as soon as an intermediate meet is undefined.
std::optional<Element> iterated_meet(const RelationalStructure& s, std::span<const Element> seq);
std::optional<Element> iterated_meet(const MeetTable& meet, std::span<const Element> seq);

/// The element 1 with (a,1,a) and (1,a,a) for every a. Throws
/// VerificationFailure if two candidates exist.
std::optional<Element> largest_element(const RelationalStructure& s);

struct PartialSemilatticeWitness {
  /// Ambient semilattice as a binary operation on its own ids.
  OperationTable ambient;
  /// Universe of s -> ambient ids; injective.
  ElementMap embedding;
};

struct PartialSemilatticeResult {
  std::optional<PartialSemilatticeWitness> witness;
  std::string reason;  // set on refusal
  /// Singletons {a}, {b} identified by the generated congruence, when that caused the refusal.
  std::optional<std::pair<Element, Element>> merged;

  bool accepted() const noexcept { return witness.has_value(); }
};

/// Decides whether the triples of `s` extend to a meet semilattice, via the
/// congruence of the non-empty-subset semilattice generated by ({a,b},{c}).
/// Throws InvalidStructure for anything but one ternary relation and
/// SizeBoundExceeded above `max_universe` elements.
PartialSemilatticeResult is_partial_semilattice(const RelationalStructure& s, std::size_t max_universe = 12);

/// Independent check of an accepting witness: the ambient operation is a
/// semilattice, the embedding is injective, and every triple is a meet.
bool verify_witness(const RelationalStructure& s, const PartialSemilatticeWitness& w);

struct ProductHomDecomposition {
  std::optional<Element> constant;
  /// f_i : factor i -> target, used when f is not constant.
  std::vector<ElementMap> unary;
  std::vector<Element> tops;
};

/// Splits f : factors[0] x ... x factors[n-1] -> target into unary maps
/// f_i(x) = f(1, ..., x, ..., 1) and checks f(x1..xn) = f_1(x1) ⊓ ... ⊓ f_n(xn).
/// Throws VerificationFailure when a precondition fails (no largest element,
/// f or some f_i not a homomorphism, meet identity broken).
ProductHomDecomposition decompose_product_hom(std::span<const RelationalStructure> factors,
                                              const RelationalStructure& target, const ElementMap& f);

struct MeetClassification {
  enum class Kind { Constant, Meet, Refused };
  Kind kind = Kind::Refused;
  Element value = 0;                     // Constant
  std::vector<std::size_t> coordinates;  // Meet: 1-based, ascending
  bool preserves_s = false;              // is_polymorphism(𝕊, t)
};

/// Table over {0,1}: constant, minimum over a coordinate set, or refused.
/// Throws InvalidStructure for other base sizes.
MeetClassification classify_meet_operation(const OperationTable& t);
std::string to_string(const MeetClassification& c);

/// Random partial semilattice of `size` elements with a largest element,
/// carved out of the subset lattice of a 3-element set.
RelationalStructure random_partial_semilattice(std::mt19937_64& rng, std::size_t size);

struct ProductDecompositionSuite {
  std::size_t instances = 0;
  std::size_t homomorphisms = 0;
  std::size_t failures = 0;
  std::string first_failure;
};

/// `count` random products of 1..3 partial semilattices with largest elements
/// (factor size 1..4); decomposes every homomorphism into 𝕊.
ProductDecompositionSuite run_product_decomposition_suite(std::uint64_t seed, std::size_t count);

}  // namespace relcalc
