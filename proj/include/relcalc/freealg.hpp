#pragma once

// Free algebras of the variety generated by a finite algebra, realized as
// subalgebras of A^(A^k) generated by the k projections.

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "relcalc/algebra.hpp"
#include "relcalc/identlang.hpp"

namespace relcalc {

/// One application of a basic operation during the closure.
struct TermStep {
  std::string symbol;
  std::vector<Element> args;
  Element result = 0;
  std::size_t round = 0;
};

struct FreeAlgebra {
  /// Elements are term operations; labels are their term names.
  FiniteAlgebra algebra;
  std::size_t base_size = 0;  // |A|
  std::vector<std::string> variable_names;
  std::vector<Element> generators;
  /// Element id -> its values on A^k in lexicographic order.
  std::vector<std::vector<Element>> functions;
  /// Steps that created a new element, in creation order.
  std::vector<TermStep> derivation;
  /// Element id -> index into `derivation`; none for generators.
  std::vector<std::optional<std::size_t>> derived_by;
  /// Steps whose result was already present. Each one is an identity of A.
  std::vector<TermStep> coincidences;

  std::size_t size() const noexcept { return functions.size(); }
  std::optional<Element> find(std::span<const Element> function) const;
  ident::Term term(Element e) const;
  std::string term_name(Element e) const;
  /// symbol(term(args...)) = term(result)
  ident::Identity identity(const TermStep& step) const;

  std::map<std::vector<Element>, Element> index;
};

/// x, y, z for k <= 3, otherwise x1..xk.
std::vector<std::string> variable_names(std::size_t k);

/// Breadth-first closure of the projections. Round r applies every operation
/// (symbols in name order) to every argument tuple (lexicographic in element
/// ids) that uses an element first added in round r-1; new elements are
/// numbered in that order. Throws SizeBoundExceeded when the elements or the
/// operation tables of the result would exceed `limits.max_tuples` entries.
FreeAlgebra free_algebra(const FiniteAlgebra& a, std::size_t k, const Limits& limits = {});

}  // namespace relcalc
