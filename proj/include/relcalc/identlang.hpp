#pragma once

// A small equational language: terms, linear identities, the Hobby-McKenzie
// subset condition, and the search for interpretations into semilattices.

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "relcalc/algebra.hpp"
#include "relcalc/errors.hpp"

namespace relcalc::ident {

struct SourcePos {
  std::size_t line = 0;
  std::size_t column = 0;
};

struct Term {
  enum class Kind { Variable, Application };

  Kind kind = Kind::Variable;
  std::string name;  // variable name or operation symbol
  std::vector<Term> args;
  SourcePos pos;  // not part of equality

  static Term variable(std::string name) { return {Kind::Variable, std::move(name), {}, {}}; }
  static Term apply(std::string symbol, std::vector<Term> args) {
    return {Kind::Application, std::move(symbol), std::move(args), {}};
  }

  bool is_variable() const noexcept { return kind == Kind::Variable; }
  bool operator==(const Term& o) const { return kind == o.kind && name == o.name && args == o.args; }
};

struct Identity {
  Term lhs;
  Term rhs;
  bool operator==(const Identity&) const = default;
};

struct TermSystem {
  std::map<std::string, std::size_t> declarations;  // symbol -> arity
  std::vector<Identity> identities;
  std::set<std::string> idempotent;

  bool operator==(const TermSystem&) const = default;
};

/// Non-empty coordinate subset (1-based, ascending) per symbol.
struct SLLabeling {
  std::map<std::string, std::vector<std::size_t>> sigma;
  bool operator==(const SLLabeling&) const = default;
};

std::string to_string(const Term& t);
std::string to_string(const Identity& i);
std::string to_string(const SLLabeling& l);
/// Canonical text form; parse(print(s)) == s.
std::string print(const TermSystem& sys);

/// Throws ParseError (with line/column) on syntax errors, undeclared symbols
/// and arity mismatches.
TermSystem parse(std::string_view text);
Term parse_term(std::string_view text, const std::map<std::string, std::size_t>& declarations);

/// Variables in order of first occurrence (lhs before rhs).
std::vector<std::string> variables(const Term& t);
std::vector<std::string> variables(const Identity& i);

bool is_linear(const Identity& i);
/// Linear and in at most two variables.
bool in_two_variable_fragment(const Identity& i);
/// Keeps only the identities saturate() accepts.
TermSystem linear_fragment(const TermSystem& sys);

/// Closure of a linear two-variable system under renaming, swapping and
/// identifying the two variables, symmetry and transitivity (pairing is the
/// special case s1 = v = s2). Declared idempotency contributes f(x,...,x) = x.
/// Output is canonical: variables x,y, identities listed per class in term order.
/// Throws Error on identities outside the fragment.
TermSystem saturate(const TermSystem& sys);

struct HmCheckResult {
  bool pass = false;
  /// Coordinate subset I -> identity t(...) = t(...) with x at every position of I
  /// on the left and y at some position of I on the right.
  std::map<std::vector<std::size_t>, Identity> witnesses;
  std::optional<std::vector<std::size_t>> missing;  // first subset without witness
};

/// Runs on saturate(linear_fragment(sys)). Throws Error if `t` is undeclared or
/// not idempotent (declared, or t(x,...,x) = x derivable in the saturation).
HmCheckResult hm_term_check(const TermSystem& sys, const std::string& t);

/// Non-empty subsets of {1..n} in lexicographic order of their sorted lists.
std::vector<std::vector<std::size_t>> nonempty_subsets(std::size_t n);

/// All labelings of a signature, indexed in lexicographic order (symbols by name,
/// first symbol most significant).
class LabelingSpace {
 public:
  explicit LabelingSpace(const std::map<std::string, std::size_t>& declarations);
  std::size_t size() const noexcept { return size_; }
  SLLabeling at(std::size_t index) const;
  /// Per-symbol subset choice for `index`, in symbol order.
  std::vector<std::size_t> choice(std::size_t index) const;
  const std::vector<std::string>& symbols() const noexcept { return symbols_; }
  const std::vector<std::vector<std::size_t>>& subsets(std::size_t symbol_index) const {
    return subsets_[symbol_index];
  }
  bool has_nullary() const noexcept { return has_nullary_; }

 private:
  std::vector<std::string> symbols_;
  std::vector<std::vector<std::vector<std::size_t>>> subsets_;
  std::size_t size_ = 1;
  bool has_nullary_ = false;
};

/// Variable x -> {x}; f(t1..tn) -> union of the sets of t_i for i in sigma(f).
std::set<std::string> sigma_varset(const Term& t, const SLLabeling& labeling);
bool satisfied_by(const Identity& i, const SLLabeling& labeling);

struct LabelingRefutation {
  SLLabeling labeling;
  Identity violated;
};

struct SlInterpResult {
  std::optional<SLLabeling> labeling;  // first surviving labeling
  std::vector<LabelingRefutation> refutations;  // one per labeling when UNSAT
  std::string note;
  bool satisfiable() const noexcept { return labeling.has_value(); }
};

/// Tries every labeling; `parallel` fans the labelings out over threads and
/// still reports the lexicographically first survivor.
SlInterpResult sl_interp_search(const TermSystem& sys, bool parallel = true,
                                 std::size_t max_labelings = 1'000'000);

/// Replays the subset-condition witnesses against every labeling: for each
/// labeling sigma, the witness for I = sigma(t) must be violated.
bool hm_witnesses_refute_all_labelings(const TermSystem& sys, const std::string& t, const HmCheckResult& hm);

struct HoldsResult {
  bool holds = true;
  std::map<std::string, Element> counterexample;
};

/// Evaluates both sides under every assignment of algebra elements.
HoldsResult holds_in(const FiniteAlgebra& algebra, const Identity& identity,
                     const std::map<std::string, OperationTable>& interp);

}  // namespace relcalc::ident
