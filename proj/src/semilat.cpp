#include "relcalc/semilat.hpp"

#include <algorithm>
#include <bit>
#include <numeric>

#include "relcalc/detail/union_find.hpp"

namespace relcalc {

MeetTable::MeetTable(const RelationalStructure& s) : n_(s.size()), table_(s.size() * s.size()) {
  if (s.relations().size() != 1) throw InvalidStructure("expected exactly one relation");
  const Relation& r = s.only_relation();
  if (r.arity() != 3) throw InvalidStructure("expected a ternary relation");
  for (std::size_t i = 0; i < r.size(); ++i) {
    auto t = r[i];
    auto& slot = table_[t[0] * n_ + t[1]];
    if (slot && *slot != t[2]) {
      throw NonFunctional("relation " + s.only_symbol() + " has (" + std::to_string(t[0]) + "," +
                          std::to_string(t[1]) + "," + std::to_string(*slot) + ") and (" + std::to_string(t[0]) +
                          "," + std::to_string(t[1]) + "," + std::to_string(t[2]) + ")");
    }
    slot = t[2];
  }
}

std::optional<Element> MeetTable::operator()(Element a, Element b) const { return table_.at(a * n_ + b); }

std::optional<Element> meet_lookup(const RelationalStructure& s, Element a, Element b) {
  return MeetTable(s)(a, b);
}

std::optional<Element> iterated_meet(const MeetTable& meet, std::span<const Element> seq) {
  if (seq.empty()) return std::nullopt;
  std::optional<Element> acc = seq[0];
  for (std::size_t i = 1; i < seq.size() && acc; ++i) acc = meet(*acc, seq[i]);
  return acc;
}

std::optional<Element> iterated_meet(const RelationalStructure& s, std::span<const Element> seq) {
  return iterated_meet(MeetTable(s), seq);
}

std::optional<Element> largest_element(const RelationalStructure& s) {
  const MeetTable meet(s);
  std::optional<Element> found;
  for (Element one = 0; one < s.size(); ++one) {
    bool ok = true;
    for (Element a = 0; a < s.size() && ok; ++a) ok = meet(a, one) == a && meet(one, a) == a;
    if (!ok) continue;
    if (found) {
      throw VerificationFailure("two largest elements: " + s.label(*found) + " and " + s.label(one));
    }
    found = one;
  }
  return found;
}

PartialSemilatticeResult is_partial_semilattice(const RelationalStructure& s, std::size_t max_universe) {
  const std::size_t n = s.size();
  if (n > max_universe) {
    throw SizeBoundExceeded("partial semilattice check limited to " + std::to_string(max_universe) +
                            " elements, got " + std::to_string(n));
  }
  PartialSemilatticeResult result;
  std::optional<MeetTable> meet;
  try {
    meet.emplace(s);
  } catch (const NonFunctional& e) {
    result.reason = std::string("not functional: ") + e.what();
    return result;
  }
  if (!is_reflexive(s)) {
    result.reason = "not reflexive";
    return result;
  }
  if (n == 0) {
    result.witness = PartialSemilatticeWitness{OperationTable(2, 0, {}), {}};
    return result;
  }

  // Non-empty subsets of the universe as bitmasks, joined by union.
  const std::size_t subsets = std::size_t{1} << n;
  detail::UnionFind uf(subsets);
  const Relation& r = s.only_relation();
  for (std::size_t i = 0; i < r.size(); ++i) {
    auto t = r[i];
    const std::size_t lhs = (std::size_t{1} << t[0]) | (std::size_t{1} << t[1]);
    const std::size_t rhs = std::size_t{1} << t[2];
    for (std::size_t c = 0; c < subsets; ++c) uf.unite(lhs | c, rhs | c);
  }
  for (Element a = 0; a < n; ++a) {
    for (Element b = a + 1; b < n; ++b) {
      if (uf.same(std::size_t{1} << a, std::size_t{1} << b)) {
        result.reason = "singletons {" + s.label(a) + "} and {" + s.label(b) + "} are identified";
        result.merged = std::make_pair(a, b);
        return result;
      }
    }
  }

  // Quotient, classes numbered by their smallest non-empty member.
  std::vector<std::size_t> class_id(subsets, 0);
  std::vector<std::size_t> rep;
  std::vector<std::size_t> root_class(subsets, SIZE_MAX);
  for (std::size_t m = 1; m < subsets; ++m) {
    const std::size_t root = uf.find(m);
    if (root_class[root] == SIZE_MAX) {
      root_class[root] = rep.size();
      rep.push_back(m);
    }
    class_id[m] = root_class[root];
  }
  const std::size_t k = rep.size();
  std::vector<Element> values(k * k);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) values[i * k + j] = static_cast<Element>(class_id[rep[i] | rep[j]]);
  }
  PartialSemilatticeWitness w{OperationTable(2, k, std::move(values)), ElementMap(n)};
  for (Element a = 0; a < n; ++a) w.embedding[a] = static_cast<Element>(class_id[std::size_t{1} << a]);
  result.witness = std::move(w);
  return result;
}

bool verify_witness(const RelationalStructure& s, const PartialSemilatticeWitness& w) {
  const OperationTable& op = w.ambient;
  const std::size_t k = op.base_size();
  if (op.arity() != 2 || w.embedding.size() != s.size()) return false;
  auto m = [&](Element a, Element b) { return op.at_rank(a * k + b); };
  for (Element a = 0; a < k; ++a) {
    if (m(a, a) != a) return false;
    for (Element b = 0; b < k; ++b) {
      if (m(a, b) != m(b, a)) return false;
      for (Element c = 0; c < k; ++c) {
        if (m(m(a, b), c) != m(a, m(b, c))) return false;
      }
    }
  }
  std::vector<Element> image = w.embedding;
  std::ranges::sort(image);
  if (std::ranges::adjacent_find(image) != image.end()) return false;
  if (std::ranges::any_of(image, [&](Element e) { return e >= k; })) return false;
  const Relation& r = s.only_relation();
  for (std::size_t i = 0; i < r.size(); ++i) {
    auto t = r[i];
    if (m(w.embedding[t[0]], w.embedding[t[1]]) != w.embedding[t[2]]) return false;
  }
  return true;
}

ProductHomDecomposition decompose_product_hom(std::span<const RelationalStructure> factors,
                                              const RelationalStructure& target, const ElementMap& f) {
  const RelationalStructure prod = product(factors);
  if (f.size() != prod.size()) throw VerificationFailure("map is not defined on the whole product");
  const HomCheck check = is_homomorphism(prod, target, f);
  if (!check.ok) throw VerificationFailure("map is not a homomorphism on relation " + check.symbol);

  ProductHomDecomposition out;
  std::vector<std::size_t> radices;
  for (const auto& h : factors) {
    const auto top = largest_element(h);
    if (!top) throw VerificationFailure("factor without a largest element");
    out.tops.push_back(*top);
    radices.push_back(h.size());
  }
  if (is_constant_map(f) && !f.empty()) {
    out.constant = f[0];
    return out;
  }

  const MeetTable meet(target);
  std::vector<Element> coords(out.tops);
  for (std::size_t i = 0; i < factors.size(); ++i) {
    ElementMap fi(factors[i].size());
    for (Element x = 0; x < factors[i].size(); ++x) {
      coords = out.tops;
      coords[i] = x;
      fi[x] = f[lex_rank(coords, radices)];
    }
    const HomCheck c = is_homomorphism(factors[i], target, fi);
    if (!c.ok) throw VerificationFailure("f_" + std::to_string(i + 1) + " is not a homomorphism");
    out.unary.push_back(std::move(fi));
  }
  std::vector<Element> values(factors.size());
  for (std::size_t p = 0; p < prod.size(); ++p) {
    lex_unrank(p, radices, coords);
    for (std::size_t i = 0; i < factors.size(); ++i) values[i] = out.unary[i][coords[i]];
    const auto m = iterated_meet(meet, values);
    if (!m || *m != f[p]) {
      throw VerificationFailure("iterated meet of the f_i differs from f at " + prod.label(static_cast<Element>(p)));
    }
  }
  return out;
}

MeetClassification classify_meet_operation(const OperationTable& t) {
  if (t.base_size() != 2) throw InvalidStructure("meet classification needs a table over {0,1}");
  MeetClassification c;
  c.preserves_s = is_polymorphism(semilattice_structure(), t);
  if (auto v = t.constant_value()) {
    c.kind = MeetClassification::Kind::Constant;
    c.value = *v;
    return c;
  }
  const std::size_t n = t.arity();
  // J = coordinates where a single 0 forces the value 0
  std::vector<Element> args(n, 1);
  for (std::size_t i = 0; i < n; ++i) {
    args[i] = 0;
    if (t(args) == 0) c.coordinates.push_back(i + 1);
    args[i] = 1;
  }
  bool matches = !c.coordinates.empty();
  for (std::size_t r = 0; r < t.table_length(n, 2) && matches; ++r) {
    OperationTable::unrank_args(r, n, 2, args);
    Element expect = 1;
    for (std::size_t j : c.coordinates) expect = std::min(expect, args[j - 1]);
    matches = t.at_rank(r) == expect;
  }
  if (matches) {
    c.kind = MeetClassification::Kind::Meet;
  } else {
    c.kind = MeetClassification::Kind::Refused;
    c.coordinates.clear();
    if (c.preserves_s) throw VerificationFailure("table preserves the semilattice relation but is not a meet");
  }
  return c;
}

std::string to_string(const MeetClassification& c) {
  switch (c.kind) {
    case MeetClassification::Kind::Constant:
      return "Constant(" + std::to_string(c.value) + ")";
    case MeetClassification::Kind::Meet: {
      std::string s = "Meet({";
      for (std::size_t i = 0; i < c.coordinates.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(c.coordinates[i]);
      }
      return s + "})";
    }
    case MeetClassification::Kind::Refused:
      break;
  }
  return "refused";
}

RelationalStructure random_partial_semilattice(std::mt19937_64& rng, std::size_t size) {
  if (size == 0 || size > 8) throw InvalidStructure("random partial semilattice size must be 1..8");
  // Elements are subsets of {0,1,2}; 7 (the full set) is the top.
  std::vector<unsigned> pool = {0, 1, 2, 3, 4, 5, 6};
  std::shuffle(pool.begin(), pool.end(), rng);
  std::vector<unsigned> chosen(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(size - 1));
  chosen.push_back(7);
  std::ranges::sort(chosen);
  auto id_of = [&](unsigned m) -> std::optional<Element> {
    auto it = std::ranges::find(chosen, m);
    if (it == chosen.end()) return std::nullopt;
    return static_cast<Element>(it - chosen.begin());
  };
  const Element top = static_cast<Element>(size - 1);
  std::bernoulli_distribution keep(0.5);
  std::vector<Tuple> triples;
  for (Element a = 0; a < size; ++a) {
    for (Element b = 0; b < size; ++b) {
      const auto m = id_of(chosen[a] & chosen[b]);
      if (!m) continue;
      const bool forced = a == b || a == top || b == top;
      if (forced || keep(rng)) triples.push_back({a, b, *m});
    }
  }
  RelationalStructure s(size);
  s.add_relation("R", Relation(3, triples));
  return s;
}

ProductDecompositionSuite run_product_decomposition_suite(std::uint64_t seed, std::size_t count) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> factor_count(1, 3);
  std::uniform_int_distribution<std::size_t> factor_size(1, 4);
  std::vector<std::vector<RelationalStructure>> instances(count);
  for (auto& inst : instances) {
    const std::size_t k = factor_count(rng);
    for (std::size_t i = 0; i < k; ++i) inst.push_back(random_partial_semilattice(rng, factor_size(rng)));
  }

  const RelationalStructure target = semilattice_structure();
  ProductDecompositionSuite report;
  report.instances = count;
  std::vector<std::size_t> homs(count, 0);
  std::vector<std::string> failure(count);
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t idx = 0; idx < static_cast<std::int64_t>(count); ++idx) {
    const auto& factors = instances[static_cast<std::size_t>(idx)];
    const auto maps = find_homs_serial(product(factors), target);
    homs[static_cast<std::size_t>(idx)] = maps.size();
    for (const auto& f : maps) {
      try {
        decompose_product_hom(factors, target, f);
      } catch (const Error& e) {
        failure[static_cast<std::size_t>(idx)] = "instance " + std::to_string(idx) + ": " + e.what();
        break;
      }
    }
  }
  for (std::size_t i = 0; i < count; ++i) {
    report.homomorphisms += homs[i];
    if (!failure[i].empty()) {
      if (report.failures++ == 0) report.first_failure = failure[i];
    }
  }
  return report;
}

}  // namespace relcalc
