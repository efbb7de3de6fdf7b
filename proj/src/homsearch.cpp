#include "relcalc/homsearch.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>

namespace relcalc {

// ---------------------------------------------------------- OperationTable

std::size_t OperationTable::table_length(std::size_t arity, std::size_t base_size) {
  std::size_t len = 1;
  for (std::size_t i = 0; i < arity; ++i) len *= base_size;
  return len;
}

void OperationTable::unrank_args(std::size_t rank, std::size_t arity, std::size_t base_size,
                                 std::span<Element> out) {
  for (std::size_t i = arity; i-- > 0;) {
    out[i] = static_cast<Element>(rank % base_size);
    rank /= base_size;
  }
}

OperationTable::OperationTable(std::size_t arity, std::size_t base_size, std::vector<Element> values)
    : arity_(arity), base_size_(base_size), values_(std::move(values)) {
  if (values_.size() != table_length(arity_, base_size_)) {
    throw InvalidStructure("operation table of arity " + std::to_string(arity_) + " over " +
                           std::to_string(base_size_) + " elements needs " +
                           std::to_string(table_length(arity_, base_size_)) + " values, got " +
                           std::to_string(values_.size()));
  }
  for (Element v : values_) {
    if (v >= base_size_) throw InvalidStructure("operation table value " + std::to_string(v) + " out of range");
  }
}

Element OperationTable::operator()(std::span<const Element> args) const {
  std::size_t r = 0;
  for (Element a : args) r = r * base_size_ + a;
  return values_[r];
}

bool OperationTable::is_idempotent() const {
  if (arity_ == 0) return false;
  std::vector<Element> args(arity_);
  for (Element a = 0; a < base_size_; ++a) {
    std::fill(args.begin(), args.end(), a);
    if ((*this)(args) != a) return false;
  }
  return true;
}

std::optional<Element> OperationTable::constant_value() const {
  if (values_.empty()) return std::nullopt;
  if (std::ranges::all_of(values_, [&](Element v) { return v == values_[0]; })) return values_[0];
  return std::nullopt;
}

// ------------------------------------------------------------------ engine

namespace {

class Engine {
 public:
  Engine(const RelationalStructure& g, const RelationalStructure& h, const SearchOptions& opts)
      : n_(g.size()), m_(h.size()), words_((h.size() + 63) / 64), injective_(opts.injective), incident_(n_) {
    require_same_signature(g, h);
    for (const auto& [symbol, rel] : g.relations()) {
      const Relation* target = &h.relation(symbol);
      for (std::size_t k = 0; k < rel.size(); ++k) {
        auto t = rel[k];
        Constraint c{target, Tuple(t.begin(), t.end()), {}};
        c.distinct = c.vars;
        std::sort(c.distinct.begin(), c.distinct.end());
        c.distinct.erase(std::unique(c.distinct.begin(), c.distinct.end()), c.distinct.end());
        constraints_.push_back(std::move(c));
      }
    }
    for (std::size_t i = 0; i < constraints_.size(); ++i) {
      for (Element v : constraints_[i].distinct) incident_[v].push_back(i);
    }

    initial_.assign(n_ * words_, 0);
    for (std::size_t v = 0; v < n_; ++v) {
      for (std::size_t b = 0; b < m_; ++b) set(initial_, v, b);
    }
    for (const auto& [src, tgt] : opts.pinned) {
      if (src >= n_ || tgt >= m_) throw InvalidStructure("pinned assignment references an invalid id");
      std::fill_n(initial_.begin() + static_cast<std::ptrdiff_t>(src * words_), words_, 0);
      set(initial_, src, tgt);
    }
    // node consistency for tuples over a single variable
    Tuple row;
    for (const auto& c : constraints_) {
      if (c.distinct.size() != 1) continue;
      const Element v = c.distinct[0];
      row.assign(c.vars.size(), 0);
      for (std::size_t b = 0; b < m_; ++b) {
        if (!test(initial_, v, b)) continue;
        std::fill(row.begin(), row.end(), static_cast<Element>(b));
        if (!c.target->contains(row)) clear(initial_, v, b);
      }
    }
    for (std::size_t v = 0; v < n_; ++v) {
      if (empty_domain(initial_, v)) consistent_ = false;
    }
  }

  bool consistent() const { return consistent_; }
  std::size_t variables() const { return n_; }

  std::vector<Element> candidates(std::size_t v) const {
    std::vector<Element> out;
    for (std::size_t b = 0; b < m_; ++b) {
      if (test(initial_, v, b)) out.push_back(static_cast<Element>(b));
    }
    return out;
  }

  /// Runs the search, optionally with variable 0 fixed. Visitor sees complete maps.
  void run(std::optional<Element> first_value, const MapVisitor& visit) const {
    if (!consistent_) return;
    State st{initial_, ElementMap(n_, 0), std::vector<char>(injective_ ? m_ : 0, 0), false};
    if (n_ == 0) {
      visit(st.assign);
      return;
    }
    if (first_value) {
      std::fill_n(st.domains.begin(), words_, 0);
      if (test(initial_, 0, *first_value)) set(st.domains, 0, *first_value);
    }
    dfs(0, st.domains, st, visit);
  }

 private:
  struct Constraint {
    const Relation* target;
    Tuple vars;
    std::vector<Element> distinct;  // sorted
  };
  struct State {
    std::vector<std::uint64_t> domains;
    ElementMap assign;
    std::vector<char> used;
    bool stop;
  };

  void set(std::vector<std::uint64_t>& d, std::size_t v, std::size_t b) const {
    d[v * words_ + b / 64] |= std::uint64_t{1} << (b % 64);
  }
  void clear(std::vector<std::uint64_t>& d, std::size_t v, std::size_t b) const {
    d[v * words_ + b / 64] &= ~(std::uint64_t{1} << (b % 64));
  }
  bool test(const std::vector<std::uint64_t>& d, std::size_t v, std::size_t b) const {
    return (d[v * words_ + b / 64] >> (b % 64)) & 1u;
  }
  bool empty_domain(const std::vector<std::uint64_t>& d, std::size_t v) const {
    for (std::size_t w = 0; w < words_; ++w) {
      if (d[v * words_ + w]) return false;
    }
    return true;
  }

  // Forward checking after assigning `var`. Variables < = var are assigned.
  bool propagate(Element var, std::vector<std::uint64_t>& dom, const ElementMap& assign) const {
    Tuple row;
    for (std::size_t ci : incident_[var]) {
      const Constraint& c = constraints_[ci];
      auto first_open = std::upper_bound(c.distinct.begin(), c.distinct.end(), var);
      const auto open = static_cast<std::size_t>(c.distinct.end() - first_open);
      if (open > 1) continue;
      row.resize(c.vars.size());
      if (open == 0) {
        for (std::size_t p = 0; p < row.size(); ++p) row[p] = assign[c.vars[p]];
        if (!c.target->contains(row)) return false;
        continue;
      }
      const Element w = *first_open;
      for (std::size_t b = 0; b < m_; ++b) {
        if (!test(dom, w, b)) continue;
        for (std::size_t p = 0; p < row.size(); ++p) {
          row[p] = c.vars[p] == w ? static_cast<Element>(b) : assign[c.vars[p]];
        }
        if (!c.target->contains(row)) clear(dom, w, b);
      }
      if (empty_domain(dom, w)) return false;
    }
    return true;
  }

  void dfs(Element var, const std::vector<std::uint64_t>& dom, State& st, const MapVisitor& visit) const {
    for (std::size_t b = 0; b < m_ && !st.stop; ++b) {
      if (!test(dom, var, b)) continue;
      if (injective_ && st.used[b]) continue;
      st.assign[var] = static_cast<Element>(b);
      std::vector<std::uint64_t> next = dom;
      std::fill_n(next.begin() + static_cast<std::ptrdiff_t>(var * words_), words_, 0);
      set(next, var, b);
      if (!propagate(var, next, st.assign)) continue;
      if (var + 1 == n_) {
        if (!visit(st.assign)) st.stop = true;
        continue;
      }
      if (injective_) st.used[b] = 1;
      dfs(var + 1, next, st, visit);
      if (injective_) st.used[b] = 0;
    }
  }

  std::size_t n_;
  std::size_t m_;
  std::size_t words_;
  bool injective_;
  bool consistent_ = true;
  std::vector<Constraint> constraints_;
  std::vector<std::vector<std::size_t>> incident_;
  std::vector<std::uint64_t> initial_;
};

// Wraps the raw visitor with the nonconstant filter and the result limit.
MapVisitor collecting(std::vector<ElementMap>& out, const SearchOptions& opts) {
  return [&out, &opts](const ElementMap& m) {
    if (opts.nonconstant_only && is_constant_map(m)) return true;
    out.push_back(m);
    return opts.limit == 0 || out.size() < opts.limit;
  };
}

}  // namespace

bool is_constant_map(const ElementMap& map) {
  return std::ranges::all_of(map, [&](Element e) { return e == map.front(); });
}

void search_homs_serial(const RelationalStructure& g, const RelationalStructure& h, const SearchOptions& opts,
                        const MapVisitor& visit) {
  Engine(g, h, opts).run(std::nullopt, visit);
}

std::vector<ElementMap> find_homs_serial(const RelationalStructure& g, const RelationalStructure& h,
                                         const SearchOptions& opts) {
  std::vector<ElementMap> out;
  search_homs_serial(g, h, opts, collecting(out, opts));
  return out;
}

std::vector<ElementMap> find_homs(const RelationalStructure& g, const RelationalStructure& h,
                                  const SearchOptions& opts) {
  const Engine engine(g, h, opts);
  if (!engine.consistent()) return {};
  if (engine.variables() == 0) {
    std::vector<ElementMap> out;
    engine.run(std::nullopt, collecting(out, opts));
    return out;
  }
  const std::vector<Element> first = engine.candidates(0);
  std::vector<std::vector<ElementMap>> branches(first.size());
  const auto n_branches = static_cast<std::int64_t>(first.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t i = 0; i < n_branches; ++i) {
    auto& out = branches[static_cast<std::size_t>(i)];
    engine.run(first[static_cast<std::size_t>(i)], collecting(out, opts));
  }
  std::vector<ElementMap> merged;
  for (auto& b : branches) {
    for (auto& m : b) {
      if (opts.limit != 0 && merged.size() == opts.limit) return merged;
      merged.push_back(std::move(m));
    }
  }
  return merged;
}

std::size_t count_homs(const RelationalStructure& g, const RelationalStructure& h, const SearchOptions& opts) {
  std::size_t count = 0;
  search_homs_serial(g, h, opts, [&](const ElementMap& m) {
    if (opts.nonconstant_only && is_constant_map(m)) return true;
    ++count;
    return opts.limit == 0 || count < opts.limit;
  });
  return count;
}

HomCheck is_homomorphism(const RelationalStructure& g, const RelationalStructure& h, const ElementMap& map) {
  require_same_signature(g, h);
  if (map.size() != g.size()) throw InvalidStructure("map is not total on the source universe");
  for (Element v : map) {
    if (v >= h.size()) throw InvalidStructure("map value " + std::to_string(v) + " outside the target universe");
  }
  for (const auto& [symbol, rel] : g.relations()) {
    const Relation& target = h.relation(symbol);
    Tuple img(rel.arity());
    for (std::size_t k = 0; k < rel.size(); ++k) {
      auto t = rel[k];
      for (std::size_t i = 0; i < t.size(); ++i) img[i] = map[t[i]];
      if (!target.contains(img)) return {false, symbol, Tuple(t.begin(), t.end()), img};
    }
  }
  return {};
}

Homomorphism make_homomorphism(std::shared_ptr<const RelationalStructure> g,
                               std::shared_ptr<const RelationalStructure> h, ElementMap map) {
  if (auto check = is_homomorphism(*g, *h, map); !check.ok) {
    throw VerificationFailure("map does not preserve relation " + check.symbol);
  }
  return {std::move(g), std::move(h), std::move(map)};
}

std::vector<OperationTable> polymorphisms(const RelationalStructure& h, std::size_t n, const Limits& limits) {
  const RelationalStructure hn = power(h, n, limits);
  std::vector<OperationTable> out;
  for (auto& m : find_homs(hn, h)) out.emplace_back(n, h.size(), std::move(m));
  return out;
}

bool is_polymorphism(const RelationalStructure& h, const OperationTable& op, const Limits& limits) {
  if (op.base_size() != h.size()) throw InvalidStructure("operation base size differs from the structure size");
  const std::size_t n = op.arity();
  for (const auto& [symbol, rel] : h.relations()) {
    std::vector<std::size_t> counts(n, rel.size());
    std::size_t combos = 1;
    for (std::size_t i = 0; i < n; ++i) {
      if (rel.size() != 0 && combos > limits.max_tuples / rel.size()) {
        throw SizeBoundExceeded("polymorphism check exceeds the size bound");
      }
      combos *= rel.size();
    }
    std::vector<Element> pick(n), args(n);
    Tuple out(rel.arity());
    for (std::size_t c = 0; c < combos; ++c) {
      lex_unrank(c, counts, pick);
      for (std::size_t p = 0; p < rel.arity(); ++p) {
        for (std::size_t i = 0; i < n; ++i) args[i] = rel[pick[i]][p];
        out[p] = op(args);
      }
      if (!rel.contains(out)) return false;
    }
  }
  return true;
}

std::optional<Retraction> find_retraction(const RelationalStructure& g, const RelationalStructure& h,
                                          const std::optional<ElementMap>& coretraction) {
  require_same_signature(g, h);
  std::vector<ElementMap> betas;
  if (coretraction) {
    if (!is_homomorphism(h, g, *coretraction).ok) return std::nullopt;
    betas.push_back(*coretraction);
  } else {
    SearchOptions injective;
    injective.injective = true;  // alpha ∘ beta = id forces beta injective
    betas = find_homs(h, g, injective);
  }
  for (const auto& beta : betas) {
    SearchOptions opts;
    opts.limit = 1;
    bool clash = false;
    for (Element x = 0; x < h.size(); ++x) {
      auto [it, fresh] = opts.pinned.try_emplace(beta[x], x);
      if (!fresh && it->second != x) clash = true;
    }
    if (clash) continue;
    auto alphas = find_homs_serial(g, h, opts);
    if (!alphas.empty()) return Retraction{std::move(alphas.front()), beta};
  }
  return std::nullopt;
}

ElementMap compose(const ElementMap& first, const ElementMap& second) {
  ElementMap out(first.size());
  for (std::size_t i = 0; i < first.size(); ++i) out[i] = second.at(first[i]);
  return out;
}

std::optional<ElementMap> find_isomorphism(const RelationalStructure& a, const RelationalStructure& b) {
  if (a.signature() != b.signature() || a.size() != b.size()) return std::nullopt;
  for (const auto& [symbol, rel] : a.relations()) {
    if (rel.size() != b.relation(symbol).size()) return std::nullopt;
  }
  SearchOptions opts;
  opts.injective = true;
  opts.limit = 1;
  auto found = find_homs(a, b, opts);
  if (found.empty()) return std::nullopt;
  // A bijective homomorphism with equal tuple counts maps each relation onto
  // its counterpart, so the inverse is a homomorphism too.
  ElementMap inverse(a.size());
  for (Element x = 0; x < a.size(); ++x) inverse[found[0][x]] = x;
  if (!is_homomorphism(b, a, inverse).ok) {
    throw VerificationFailure("isomorphism candidate has a non-homomorphic inverse");
  }
  return found.front();
}

}  // namespace relcalc
