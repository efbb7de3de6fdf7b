#pragma once

// Brute-force reference computations used as independent oracles. They share
// no search code with the library: everything here enumerates exhaustively.

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "relcalc/algebra.hpp"
#include "relcalc/structure.hpp"

namespace oracle {

using relcalc::Element;
using relcalc::ElementMap;
using relcalc::RelationalStructure;
using relcalc::Tuple;

inline bool preserves(const RelationalStructure& g, const RelationalStructure& h, const ElementMap& m) {
  for (const auto& [symbol, rel] : g.relations()) {
    const auto& target = h.relation(symbol);
    for (const auto& t : rel.rows()) {
      Tuple img;
      for (Element e : t) img.push_back(m[e]);
      if (!target.contains(img)) return false;
    }
  }
  return true;
}

/// Every map g -> h in lexicographic order, filtered by preservation.
inline std::vector<ElementMap> all_homs(const RelationalStructure& g, const RelationalStructure& h) {
  std::vector<ElementMap> out;
  if (h.size() == 0) {
    if (g.size() == 0) out.emplace_back();
    return out;
  }
  ElementMap m(g.size(), 0);
  while (true) {
    if (preserves(g, h, m)) out.push_back(m);
    std::size_t i = m.size();
    while (i > 0) {
      --i;
      if (++m[i] < h.size()) break;
      m[i] = 0;
      if (i == 0) return out;
    }
    if (m.empty()) return out;
  }
}

/// Blocks of the graph where two elements are adjacent when they occur in a common tuple.
inline std::set<std::set<Element>> components(const RelationalStructure& s) {
  std::vector<std::set<Element>> adj(s.size());
  for (const auto& [symbol, rel] : s.relations()) {
    for (const auto& t : rel.rows()) {
      for (Element a : t) {
        for (Element b : t) adj[a].insert(b);
      }
    }
  }
  std::vector<bool> seen(s.size(), false);
  std::set<std::set<Element>> out;
  for (Element start = 0; start < s.size(); ++start) {
    if (seen[start]) continue;
    std::set<Element> block;
    std::vector<Element> stack = {start};
    seen[start] = true;
    while (!stack.empty()) {
      Element v = stack.back();
      stack.pop_back();
      block.insert(v);
      for (Element w : adj[v]) {
        if (!seen[w]) {
          seen[w] = true;
          stack.push_back(w);
        }
      }
    }
    out.insert(block);
  }
  return out;
}

inline RelationalStructure random_structure(std::mt19937_64& rng, std::size_t n,
                                            const std::map<std::string, std::size_t>& signature, double density) {
  RelationalStructure s(n);
  std::bernoulli_distribution keep(density);
  for (const auto& [symbol, arity] : signature) {
    std::vector<Tuple> rows;
    std::size_t total = 1;
    for (std::size_t i = 0; i < arity; ++i) total *= n;
    Tuple t(arity);
    for (std::size_t r = 0; r < total; ++r) {
      std::size_t x = r;
      for (std::size_t i = arity; i-- > 0;) {
        t[i] = static_cast<Element>(x % n);
        x /= n;
      }
      if (keep(rng)) rows.push_back(t);
    }
    s.add_relation(symbol, relcalc::Relation(arity, rows));
  }
  return s;
}

/// Values of a term operation on A^k, as a vector indexed by lexicographic rank.
using Function = std::vector<Element>;

/// Subalgebra of A^(A^k) generated by the projections, by naive fixpoint.
inline std::set<Function> free_algebra_set(const relcalc::FiniteAlgebra& a, std::size_t k) {
  const std::size_t base = a.size();
  std::size_t points = 1;
  for (std::size_t i = 0; i < k; ++i) points *= base;
  std::set<Function> elems;
  for (std::size_t g = 0; g < k; ++g) {
    Function f(points);
    for (std::size_t p = 0; p < points; ++p) {
      std::size_t x = p;
      for (std::size_t i = k; i-- > 0;) {
        if (i == g) f[p] = static_cast<Element>(x % base);
        x /= base;
      }
    }
    elems.insert(f);
  }
  bool grew = true;
  while (grew) {
    grew = false;
    std::vector<Function> cur(elems.begin(), elems.end());
    for (const auto& [symbol, op] : a.operations) {
      const std::size_t n = op.arity();
      std::size_t combos = 1;
      for (std::size_t i = 0; i < n; ++i) combos *= cur.size();
      std::vector<Element> args(n);
      for (std::size_t c = 0; c < combos; ++c) {
        std::vector<std::size_t> pick(n);
        std::size_t x = c;
        for (std::size_t i = n; i-- > 0;) {
          pick[i] = x % cur.size();
          x /= cur.size();
        }
        Function f(points);
        for (std::size_t p = 0; p < points; ++p) {
          for (std::size_t i = 0; i < n; ++i) args[i] = cur[pick[i]][p];
          f[p] = op(args);
        }
        if (elems.insert(f).second) grew = true;
      }
    }
  }
  return elems;
}

/// Subuniverse of B^3 generated by `seed` under coordinatewise operations, by naive fixpoint.
inline std::set<Tuple> closure_in_cube(const relcalc::FiniteAlgebra& b, std::set<Tuple> rel) {
  bool grew = true;
  while (grew) {
    grew = false;
    std::vector<Tuple> cur(rel.begin(), rel.end());
    for (const auto& [symbol, op] : b.operations) {
      const std::size_t n = op.arity();
      std::size_t combos = 1;
      for (std::size_t i = 0; i < n; ++i) combos *= cur.size();
      std::vector<Element> args(n);
      for (std::size_t c = 0; c < combos; ++c) {
        std::vector<std::size_t> pick(n);
        std::size_t x = c;
        for (std::size_t i = n; i-- > 0;) {
          pick[i] = x % cur.size();
          x /= cur.size();
        }
        Tuple t(3);
        for (std::size_t p = 0; p < 3; ++p) {
          for (std::size_t i = 0; i < n; ++i) args[i] = cur[pick[i]][p];
          t[p] = op(args);
        }
        if (rel.insert(t).second) grew = true;
      }
    }
  }
  return rel;
}

}  // namespace oracle
