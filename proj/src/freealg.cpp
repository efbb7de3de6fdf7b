#include "relcalc/freealg.hpp"

#include <algorithm>
#include <cstdint>

namespace relcalc {

std::vector<std::string> variable_names(std::size_t k) {
  std::vector<std::string> out;
  if (k <= 3) {
    out = {"x", "y", "z"};
    out.resize(k);
    return out;
  }
  for (std::size_t i = 1; i <= k; ++i) out.push_back("x" + std::to_string(i));
  return out;
}

std::optional<Element> FreeAlgebra::find(std::span<const Element> function) const {
  auto it = index.find(std::vector<Element>(function.begin(), function.end()));
  if (it == index.end()) return std::nullopt;
  return it->second;
}

ident::Term FreeAlgebra::term(Element e) const {
  const auto& step = derived_by.at(e);
  if (!step) {
    const auto pos = std::ranges::find(generators, e) - generators.begin();
    return ident::Term::variable(variable_names.at(static_cast<std::size_t>(pos)));
  }
  const TermStep& s = derivation[*step];
  std::vector<ident::Term> args;
  for (Element a : s.args) args.push_back(term(a));
  return ident::Term::apply(s.symbol, std::move(args));
}

std::string FreeAlgebra::term_name(Element e) const { return ident::to_string(term(e)); }

ident::Identity FreeAlgebra::identity(const TermStep& step) const {
  std::vector<ident::Term> args;
  for (Element a : step.args) args.push_back(term(a));
  return {ident::Term::apply(step.symbol, std::move(args)), term(step.result)};
}

namespace {

// Advances `idx` to the next tuple in [0, bound)^n; false after the last one.
bool next_tuple(std::vector<Element>& idx, std::size_t bound) {
  for (std::size_t i = idx.size(); i-- > 0;) {
    if (++idx[i] < bound) return true;
    idx[i] = 0;
  }
  return false;
}

}  // namespace

FreeAlgebra free_algebra(const FiniteAlgebra& a, std::size_t k, const Limits& limits) {
  if (k == 0) throw Error("free algebra needs at least one generator");
  a.validate();
  const std::size_t base = a.size();
  if (base == 0) throw Error("free algebra over an empty algebra");

  std::size_t points = 1;  // |A^k|
  for (std::size_t i = 0; i < k; ++i) {
    if (points > limits.max_tuples / base) throw SizeBoundExceeded("A^k exceeds the size bound");
    points *= base;
  }

  FreeAlgebra fa;
  fa.base_size = base;
  fa.variable_names = variable_names(k);

  auto add = [&](std::vector<Element> fn) -> Element {
    if ((fa.functions.size() + 1) * points > limits.max_tuples) {
      throw SizeBoundExceeded("free algebra on " + std::to_string(k) + " generators exceeds the size bound");
    }
    const auto id = static_cast<Element>(fa.functions.size());
    fa.index.emplace(fn, id);
    fa.functions.push_back(std::move(fn));
    fa.derived_by.emplace_back();
    return id;
  };

  std::vector<Element> point(k);
  for (std::size_t g = 0; g < k; ++g) {
    std::vector<Element> fn(points);
    for (std::size_t p = 0; p < points; ++p) {
      OperationTable::unrank_args(p, k, base, point);
      fn[p] = point[g];
    }
    // Projections coincide only when |A| = 1.
    if (auto existing = fa.find(fn)) {
      fa.generators.push_back(*existing);
    } else {
      fa.generators.push_back(add(std::move(fn)));
    }
  }

  std::vector<std::string> symbols;
  for (const auto& [symbol, op] : a.operations) symbols.push_back(symbol);

  std::size_t frontier_begin = 0;
  for (std::size_t round = 1;; ++round) {
    const std::size_t known = fa.size();
    if (frontier_begin == known) break;
    for (const auto& symbol : symbols) {
      const OperationTable& op = a.operations.at(symbol);
      const std::size_t n = op.arity();
      if (n == 0 && round > 1) continue;
      // Argument tuples over [0, known) touching the frontier.
      std::vector<std::vector<Element>> tuples;
      std::vector<Element> idx(n, 0);
      do {
        if (n == 0 || std::ranges::any_of(idx, [&](Element e) { return e >= frontier_begin; })) tuples.push_back(idx);
      } while (n > 0 && next_tuple(idx, known));

      std::vector<std::vector<Element>> results(tuples.size(), std::vector<Element>(points));
#pragma omp parallel for schedule(static) if (tuples.size() * points > 4096)
      for (std::int64_t t = 0; t < static_cast<std::int64_t>(tuples.size()); ++t) {
        const auto& args = tuples[static_cast<std::size_t>(t)];
        std::vector<Element> vals(n);
        auto& out = results[static_cast<std::size_t>(t)];
        for (std::size_t p = 0; p < points; ++p) {
          for (std::size_t i = 0; i < n; ++i) vals[i] = fa.functions[args[i]][p];
          out[p] = op(vals);
        }
      }
      for (std::size_t t = 0; t < tuples.size(); ++t) {
        TermStep step{symbol, tuples[t], 0, round};
        if (auto existing = fa.find(results[t])) {
          step.result = *existing;
          fa.coincidences.push_back(std::move(step));
        } else {
          step.result = add(std::move(results[t]));
          fa.derived_by.back() = fa.derivation.size();
          fa.derivation.push_back(std::move(step));
        }
      }
    }
    frontier_begin = known;
  }

  // Operation tables of the free algebra; every argument tuple was visited once.
  const std::size_t size = fa.size();
  for (const auto& symbol : symbols) {
    const std::size_t n = a.operations.at(symbol).arity();
    std::size_t len = 1;
    for (std::size_t i = 0; i < n; ++i) {
      if (len > limits.max_tuples / size) throw SizeBoundExceeded("operation table of " + symbol + " too large");
      len *= size;
    }
    fa.algebra.operations.emplace(symbol, OperationTable(n, size, std::vector<Element>(len, 0)));
  }
  std::map<std::string, std::vector<Element>> values;
  for (const auto& symbol : symbols) values[symbol] = fa.algebra.operations.at(symbol).values();
  auto record = [&](const TermStep& s) {
    std::size_t r = 0;
    for (Element e : s.args) r = r * size + e;
    values[s.symbol][r] = s.result;
  };
  for (const auto& s : fa.derivation) record(s);
  for (const auto& s : fa.coincidences) record(s);
  for (const auto& symbol : symbols) {
    const std::size_t n = a.operations.at(symbol).arity();
    fa.algebra.operations[symbol] = OperationTable(n, size, std::move(values[symbol]));
  }
  for (Element e = 0; e < size; ++e) fa.algebra.labels.push_back(fa.term_name(e));
  return fa;
}

}  // namespace relcalc
