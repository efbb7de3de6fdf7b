#include <algorithm>
#include <cstdint>
#include <limits>

#include "relcalc/detail/union_find.hpp"
#include "relcalc/identlang.hpp"

namespace relcalc::ident {

namespace {

void collect_vars(const Term& t, std::vector<std::string>& out) {
  if (t.is_variable()) {
    if (std::find(out.begin(), out.end(), t.name) == out.end()) out.push_back(t.name);
    return;
  }
  for (const auto& a : t.args) collect_vars(a, out);
}

bool is_flat(const Term& t) {
  return t.is_variable() || std::ranges::all_of(t.args, [](const Term& a) { return a.is_variable(); });
}

// Flat terms over the two variables x (0) and y (1): the variables themselves,
// then f(w) for each symbol in name order and each w in {x,y}^arity in
// lexicographic order.
class FlatSpace {
 public:
  static constexpr std::size_t kMaxArity = 20;

  explicit FlatSpace(const std::map<std::string, std::size_t>& decls) {
    std::size_t next = 2;
    for (const auto& [symbol, arity] : decls) {
      if (arity > kMaxArity) throw Error("arity of " + symbol + " too large for saturation");
      symbols_.push_back(symbol);
      arities_.push_back(arity);
      offsets_.push_back(next);
      next += std::size_t{1} << arity;
    }
    size_ = next;
  }

  std::size_t size() const noexcept { return size_; }

  static bool is_var(std::size_t node) { return node < 2; }

  // symbol index of an application node
  std::size_t symbol_of(std::size_t node) const {
    auto it = std::upper_bound(offsets_.begin(), offsets_.end(), node);
    return static_cast<std::size_t>(it - offsets_.begin()) - 1;
  }

  std::size_t app(std::size_t sym, std::span<const std::uint8_t> w) const {
    std::size_t r = 0;
    for (auto b : w) r = r * 2 + b;
    return offsets_[sym] + r;
  }

  std::vector<std::uint8_t> args(std::size_t node) const {
    const std::size_t s = symbol_of(node);
    std::size_t r = node - offsets_[s];
    std::vector<std::uint8_t> w(arities_[s]);
    for (std::size_t i = w.size(); i-- > 0;) {
      w[i] = static_cast<std::uint8_t>(r & 1u);
      r >>= 1;
    }
    return w;
  }

  // sub[v] is the image of variable v
  std::size_t substitute(std::size_t node, const std::uint8_t sub[2]) const {
    if (is_var(node)) return sub[node];
    auto w = args(node);
    for (auto& b : w) b = sub[b];
    return app(symbol_of(node), w);
  }

  std::size_t from_term(const Term& t, const std::vector<std::string>& vars) const {
    auto var_index = [&](const std::string& name) {
      return static_cast<std::uint8_t>(std::find(vars.begin(), vars.end(), name) - vars.begin());
    };
    if (t.is_variable()) return var_index(t.name);
    const auto s = static_cast<std::size_t>(
        std::lower_bound(symbols_.begin(), symbols_.end(), t.name) - symbols_.begin());
    std::vector<std::uint8_t> w;
    for (const auto& a : t.args) w.push_back(var_index(a.name));
    return app(s, w);
  }

  Term to_term(std::size_t node) const {
    static const char* names[2] = {"x", "y"};
    if (is_var(node)) return Term::variable(names[node]);
    std::vector<Term> args;
    for (auto b : this->args(node)) args.push_back(Term::variable(names[b]));
    return Term::apply(symbols_[symbol_of(node)], std::move(args));
  }

  std::size_t symbol_index(const std::string& name) const {
    return static_cast<std::size_t>(std::find(symbols_.begin(), symbols_.end(), name) - symbols_.begin());
  }
  std::size_t first_app(std::size_t sym) const { return offsets_[sym]; }
  std::size_t app_count(std::size_t sym) const { return std::size_t{1} << arities_[sym]; }
  std::size_t arity(std::size_t sym) const { return arities_[sym]; }

 private:
  std::vector<std::string> symbols_;
  std::vector<std::size_t> arities_;
  std::vector<std::size_t> offsets_;
  std::size_t size_ = 2;
};

struct Saturation {
  FlatSpace space;
  std::vector<std::size_t> class_of;  // node -> class root
  std::vector<std::vector<std::size_t>> classes;
};

Saturation saturate_classes(const TermSystem& sys) {
  FlatSpace space(sys.declarations);
  detail::UnionFind uf(space.size());
  for (const auto& id : sys.identities) {
    if (!in_two_variable_fragment(id)) {
      throw Error("identity outside the linear two-variable fragment: " + to_string(id));
    }
    const auto vars = variables(id);
    uf.unite(space.from_term(id.lhs, vars), space.from_term(id.rhs, vars));
  }
  for (const auto& symbol : sys.idempotent) {
    const std::size_t s = space.symbol_index(symbol);
    std::vector<std::uint8_t> all_x(space.arity(s), 0);
    uf.unite(space.app(s, all_x), 0);
  }
  // swap, identify y:=x, identify x:=y
  static const std::uint8_t subs[3][2] = {{1, 0}, {0, 0}, {1, 1}};
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t a = 0; a < space.size(); ++a) {
      const std::size_t r = uf.find(a);
      if (r == a) continue;
      for (const auto& sub : subs) {
        if (uf.unite(space.substitute(a, sub), space.substitute(r, sub))) changed = true;
      }
    }
  }
  Saturation out{space, std::vector<std::size_t>(space.size()), uf.classes()};
  for (std::size_t c = 0; c < out.classes.size(); ++c) {
    for (std::size_t n : out.classes[c]) out.class_of[n] = c;
  }
  return out;
}

}  // namespace

std::vector<std::string> variables(const Term& t) {
  std::vector<std::string> out;
  collect_vars(t, out);
  return out;
}

std::vector<std::string> variables(const Identity& i) {
  std::vector<std::string> out;
  collect_vars(i.lhs, out);
  collect_vars(i.rhs, out);
  return out;
}

bool is_linear(const Identity& i) { return is_flat(i.lhs) && is_flat(i.rhs); }

bool in_two_variable_fragment(const Identity& i) { return is_linear(i) && variables(i).size() <= 2; }

TermSystem linear_fragment(const TermSystem& sys) {
  TermSystem out{sys.declarations, {}, sys.idempotent};
  for (const auto& id : sys.identities) {
    if (in_two_variable_fragment(id)) out.identities.push_back(id);
  }
  return out;
}

TermSystem saturate(const TermSystem& sys) {
  const Saturation sat = saturate_classes(sys);
  TermSystem out{sys.declarations, {}, sys.idempotent};
  for (const auto& cls : sat.classes) {
    for (std::size_t i = 0; i < cls.size(); ++i) {
      for (std::size_t j = i + 1; j < cls.size(); ++j) {
        out.identities.push_back({sat.space.to_term(cls[i]), sat.space.to_term(cls[j])});
      }
    }
  }
  return out;
}

HmCheckResult hm_term_check(const TermSystem& sys, const std::string& t) {
  auto decl = sys.declarations.find(t);
  if (decl == sys.declarations.end()) throw Error("undeclared symbol " + t);
  if (decl->second == 0) throw Error(t + " is nullary");
  const Saturation sat = saturate_classes(linear_fragment(sys));
  const FlatSpace& space = sat.space;
  const std::size_t s = space.symbol_index(t);
  const std::size_t n = space.arity(s);
  {
    std::vector<std::uint8_t> all_x(n, 0);
    if (!sys.idempotent.contains(t) && sat.class_of[space.app(s, all_x)] != sat.class_of[0]) {
      throw Error(t + " is not declared idempotent");
    }
  }

  HmCheckResult result;
  result.pass = true;
  const std::size_t first = space.first_app(s);
  const std::size_t count = space.app_count(s);
  for (const auto& subset : nonempty_subsets(n)) {
    bool found = false;
    for (std::size_t a = first; a < first + count && !found; ++a) {
      const auto wa = space.args(a);
      if (!std::ranges::all_of(subset, [&](std::size_t i) { return wa[i - 1] == 0; })) continue;
      for (std::size_t b = first; b < first + count; ++b) {
        if (sat.class_of[b] != sat.class_of[a]) continue;
        const auto wb = space.args(b);
        if (std::ranges::any_of(subset, [&](std::size_t i) { return wb[i - 1] == 1; })) {
          result.witnesses.emplace(subset, Identity{space.to_term(a), space.to_term(b)});
          found = true;
          break;
        }
      }
    }
    if (!found) {
      result.pass = false;
      result.missing = subset;
      break;
    }
  }
  return result;
}

std::vector<std::vector<std::size_t>> nonempty_subsets(std::size_t n) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> cur;
  auto extend = [&](auto&& self, std::size_t from) -> void {
    for (std::size_t i = from; i <= n; ++i) {
      cur.push_back(i);
      out.push_back(cur);
      self(self, i + 1);
      cur.pop_back();
    }
  };
  extend(extend, 1);
  return out;
}

LabelingSpace::LabelingSpace(const std::map<std::string, std::size_t>& declarations) {
  for (const auto& [symbol, arity] : declarations) {
    if (arity > 30) throw SizeBoundExceeded("arity of " + symbol + " too large for labeling search");
    symbols_.push_back(symbol);
    subsets_.push_back(nonempty_subsets(arity));
    const std::size_t k = subsets_.back().size();
    if (k == 0) has_nullary_ = true;
    if (k != 0 && size_ > std::numeric_limits<std::size_t>::max() / k) {
      throw SizeBoundExceeded("labeling space too large");
    }
    size_ *= k;
  }
  if (has_nullary_) size_ = 0;
}

std::vector<std::size_t> LabelingSpace::choice(std::size_t index) const {
  std::vector<std::size_t> c(symbols_.size());
  for (std::size_t i = symbols_.size(); i-- > 0;) {
    c[i] = index % subsets_[i].size();
    index /= subsets_[i].size();
  }
  return c;
}

SLLabeling LabelingSpace::at(std::size_t index) const {
  SLLabeling l;
  const auto c = choice(index);
  for (std::size_t i = 0; i < symbols_.size(); ++i) l.sigma[symbols_[i]] = subsets_[i][c[i]];
  return l;
}

std::set<std::string> sigma_varset(const Term& t, const SLLabeling& labeling) {
  if (t.is_variable()) return {t.name};
  std::set<std::string> out;
  const auto& subset = labeling.sigma.at(t.name);
  for (std::size_t i : subset) {
    auto sub = sigma_varset(t.args.at(i - 1), labeling);
    out.insert(sub.begin(), sub.end());
  }
  return out;
}

bool satisfied_by(const Identity& i, const SLLabeling& labeling) {
  return sigma_varset(i.lhs, labeling) == sigma_varset(i.rhs, labeling);
}

SlInterpResult sl_interp_search(const TermSystem& sys, bool parallel, std::size_t max_labelings) {
  const LabelingSpace space(sys.declarations);
  SlInterpResult result;
  if (space.has_nullary()) {
    result.note = "a nullary symbol has no image among semilattice terms";
    return result;
  }
  if (space.size() > max_labelings) {
    throw SizeBoundExceeded("labeling space of " + std::to_string(space.size()) + " exceeds the bound of " +
                            std::to_string(max_labelings));
  }
  constexpr std::int32_t kSurvives = -1;
  std::vector<std::int32_t> first_violation(space.size(), kSurvives);
  const auto n = static_cast<std::int64_t>(space.size());
#pragma omp parallel for schedule(dynamic, 16) if (parallel)
  for (std::int64_t idx = 0; idx < n; ++idx) {
    const SLLabeling l = space.at(static_cast<std::size_t>(idx));
    for (std::size_t k = 0; k < sys.identities.size(); ++k) {
      if (!satisfied_by(sys.identities[k], l)) {
        first_violation[static_cast<std::size_t>(idx)] = static_cast<std::int32_t>(k);
        break;
      }
    }
  }
  for (std::size_t idx = 0; idx < space.size(); ++idx) {
    if (first_violation[idx] == kSurvives) {
      result.labeling = space.at(idx);
      return result;
    }
  }
  for (std::size_t idx = 0; idx < space.size(); ++idx) {
    result.refutations.push_back(
        {space.at(idx), sys.identities[static_cast<std::size_t>(first_violation[idx])]});
  }
  return result;
}

bool hm_witnesses_refute_all_labelings(const TermSystem& sys, const std::string& t, const HmCheckResult& hm) {
  if (!hm.pass) return false;
  const LabelingSpace space(sys.declarations);
  for (std::size_t idx = 0; idx < space.size(); ++idx) {
    const SLLabeling l = space.at(idx);
    const auto& witness = hm.witnesses.at(l.sigma.at(t));
    const auto left = sigma_varset(witness.lhs, l);
    const auto right = sigma_varset(witness.rhs, l);
    // left collapses to {x} and right picks up y
    if (left != std::set<std::string>{"x"} || !right.contains("y")) return false;
  }
  return true;
}

namespace {

Element evaluate(const Term& t, const std::map<std::string, Element>& assignment, std::size_t base,
                 const std::map<std::string, OperationTable>& interp) {
  if (t.is_variable()) return assignment.at(t.name);
  auto it = interp.find(t.name);
  if (it == interp.end()) throw Error("no interpretation for symbol " + t.name);
  const OperationTable& op = it->second;
  if (op.arity() != t.args.size()) {
    throw Error("arity mismatch: " + t.name + " is interpreted by a table of arity " + std::to_string(op.arity()) +
                " but applied to " + std::to_string(t.args.size()) + " arguments");
  }
  if (op.base_size() != base) throw Error("interpretation of " + t.name + " lives on a different universe");
  std::vector<Element> args;
  args.reserve(t.args.size());
  for (const auto& a : t.args) args.push_back(evaluate(a, assignment, base, interp));
  return op(args);
}

}  // namespace

HoldsResult holds_in(const FiniteAlgebra& algebra, const Identity& identity,
                     const std::map<std::string, OperationTable>& interp) {
  const auto vars = variables(identity);
  const std::size_t base = algebra.size();
  std::size_t total = 1;
  for (std::size_t i = 0; i < vars.size(); ++i) {
    if (base != 0 && total > Limits{}.max_tuples / base) throw SizeBoundExceeded("too many assignments");
    total *= base;
  }
  std::vector<Element> values(vars.size());
  std::map<std::string, Element> assignment;
  for (std::size_t r = 0; r < total; ++r) {
    OperationTable::unrank_args(r, vars.size(), base, values);
    for (std::size_t i = 0; i < vars.size(); ++i) assignment[vars[i]] = values[i];
    if (evaluate(identity.lhs, assignment, base, interp) != evaluate(identity.rhs, assignment, base, interp)) {
      return {false, assignment};
    }
  }
  return {};
}

}  // namespace relcalc::ident
