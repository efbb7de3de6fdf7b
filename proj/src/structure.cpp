#include "relcalc/structure.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

#include "relcalc/detail/union_find.hpp"

namespace relcalc {

namespace {

std::string format_tuple(std::span<const Element> t) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i) os << ',';
    os << t[i];
  }
  os << ')';
  return os.str();
}

bool row_less(std::span<const Element> a, std::span<const Element> b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

}  // namespace

// ---------------------------------------------------------------- Relation

Relation::Relation(std::size_t arity) : arity_(arity) {
  if (arity_ == 0) throw InvalidStructure("relations must have positive arity");
}

Relation::Relation(std::size_t arity, std::vector<Element> flat) : arity_(arity) {
  if (arity_ == 0) throw InvalidStructure("relations must have positive arity");
  if (flat.size() % arity_ != 0) throw InvalidStructure("flat tuple data is not a multiple of the arity");
  const std::size_t n = flat.size() / arity_;
  auto row = [&](std::size_t i) { return std::span<const Element>(flat.data() + i * arity_, arity_); };

  bool sorted_unique = true;
  for (std::size_t i = 1; i < n && sorted_unique; ++i) sorted_unique = row_less(row(i - 1), row(i));
  if (sorted_unique) {
    data_ = std::move(flat);
    return;
  }

  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return row_less(row(a), row(b)); });
  data_.reserve(flat.size());
  for (std::size_t k = 0; k < n; ++k) {
    if (k > 0 && std::ranges::equal(row(idx[k - 1]), row(idx[k]))) continue;
    auto r = row(idx[k]);
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

Relation::Relation(std::size_t arity, const std::vector<Tuple>& rows)
    : Relation(arity, [&] {
        std::vector<Element> flat;
        flat.reserve(rows.size() * arity);
        for (const auto& r : rows) {
          if (r.size() != arity) throw InvalidStructure("arity mismatch: tuple " + format_tuple(r));
          flat.insert(flat.end(), r.begin(), r.end());
        }
        return flat;
      }()) {}

bool Relation::contains(std::span<const Element> row) const {
  if (row.size() != arity_) return false;
  std::size_t lo = 0, hi = size();
  while (lo < hi) {
    std::size_t mid = (lo + hi) / 2;
    auto r = (*this)[mid];
    if (row_less(r, row)) {
      lo = mid + 1;
    } else {
      hi = mid;
    }
  }
  return lo < size() && std::ranges::equal((*this)[lo], row);
}

std::pair<std::size_t, std::size_t> Relation::prefix_range(std::span<const Element> prefix) const {
  const std::size_t k = prefix.size();
  auto cmp_prefix = [&](std::size_t i) {
    auto r = (*this)[i].first(k);
    if (row_less(r, prefix)) return -1;
    if (row_less(prefix, r)) return 1;
    return 0;
  };
  std::size_t lo = 0, hi = size();
  while (lo < hi) {
    std::size_t mid = (lo + hi) / 2;
    if (cmp_prefix(mid) < 0) lo = mid + 1; else hi = mid;
  }
  std::size_t first = lo;
  hi = size();
  while (lo < hi) {
    std::size_t mid = (lo + hi) / 2;
    if (cmp_prefix(mid) <= 0) lo = mid + 1; else hi = mid;
  }
  return {first, lo};
}

std::vector<Tuple> Relation::rows() const {
  std::vector<Tuple> out;
  out.reserve(size());
  for (std::size_t i = 0; i < size(); ++i) {
    auto r = (*this)[i];
    out.emplace_back(r.begin(), r.end());
  }
  return out;
}

// ------------------------------------------------------ RelationalStructure

RelationalStructure::RelationalStructure(std::size_t size) : labels_(size) {
  for (std::size_t i = 0; i < size; ++i) labels_[i] = std::to_string(i);
}

RelationalStructure::RelationalStructure(std::vector<std::string> labels) : labels_(std::move(labels)) {}

std::optional<Element> RelationalStructure::find_label(const std::string& label) const {
  auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) return std::nullopt;
  return static_cast<Element>(it - labels_.begin());
}

void RelationalStructure::add_relation(const std::string& symbol, Relation rel) {
  if (relations_.contains(symbol)) throw InvalidStructure("duplicate relation symbol " + symbol);
  for (Element e : rel.data()) {
    if (e >= size()) {
      throw InvalidStructure("id out of range: relation " + symbol + " references " + std::to_string(e) +
                             " but universe has " + std::to_string(size()) + " elements");
    }
  }
  relations_.emplace(symbol, std::move(rel));
}

const Relation& RelationalStructure::relation(const std::string& symbol) const {
  auto it = relations_.find(symbol);
  if (it == relations_.end()) throw InvalidStructure("no relation named " + symbol);
  return it->second;
}

Signature RelationalStructure::signature() const {
  Signature sig;
  for (const auto& [name, rel] : relations_) sig[name] = rel.arity();
  return sig;
}

const Relation& RelationalStructure::only_relation() const { return relations_.at(only_symbol()); }

const std::string& RelationalStructure::only_symbol() const {
  if (relations_.size() != 1) {
    throw InvalidStructure("expected exactly one relation, found " + std::to_string(relations_.size()));
  }
  return relations_.begin()->first;
}

// -------------------------------------------------------------- validation

ValidationResult validate(const RawStructure& raw) {
  std::set<std::string> seen_labels;
  for (const auto& l : raw.universe) {
    if (!seen_labels.insert(l).second) return {false, "duplicate label: " + l};
  }
  const std::size_t n = raw.universe.size();
  for (const auto& [symbol, rel] : raw.relations) {
    if (rel.arity == 0) return {false, "arity mismatch: relation " + symbol + " declares arity 0"};
    std::set<Tuple> seen;
    for (const auto& t : rel.tuples) {
      if (t.size() != rel.arity) {
        return {false, "arity mismatch: relation " + symbol + " declares arity " + std::to_string(rel.arity) +
                           " but tuple " + format_tuple(t) + " has " + std::to_string(t.size()) + " entries"};
      }
      for (Element e : t) {
        if (e >= n) {
          return {false, "id out of range: relation " + symbol + " tuple " + format_tuple(t) + " references " +
                             std::to_string(e) + " but universe has " + std::to_string(n) + " elements"};
        }
      }
      if (!seen.insert(t).second) {
        return {false, "duplicate tuple: relation " + symbol + " contains " + format_tuple(t) + " twice"};
      }
    }
  }
  return {};
}

RelationalStructure build_structure(const RawStructure& raw) {
  auto v = validate(raw);
  if (!v.ok) throw InvalidStructure(v.error);
  RelationalStructure s(raw.universe);
  for (const auto& [symbol, rel] : raw.relations) s.add_relation(symbol, Relation(rel.arity, rel.tuples));
  return s;
}

RawStructure to_raw(const RelationalStructure& s) {
  RawStructure raw;
  raw.universe = s.labels();
  for (const auto& [symbol, rel] : s.relations()) raw.relations[symbol] = {rel.arity(), rel.rows()};
  return raw;
}

// ------------------------------------------------------------ basic shapes

RelationalStructure semilattice_structure(const std::string& symbol) {
  RelationalStructure s(2);
  s.add_relation(symbol, Relation(3, std::vector<Element>{0, 0, 0, 0, 1, 0, 1, 0, 0, 1, 1, 1}));
  return s;
}

RelationalStructure point_structure(const std::string& symbol) {
  RelationalStructure s(1);
  s.add_relation(symbol, Relation(3, std::vector<Element>{0, 0, 0}));
  return s;
}

bool is_reflexive(const RelationalStructure& s) {
  for (const auto& [symbol, rel] : s.relations()) {
    Tuple t(rel.arity());
    for (Element e = 0; e < s.size(); ++e) {
      std::fill(t.begin(), t.end(), e);
      if (!rel.contains(t)) return false;
    }
  }
  return true;
}

RelationalStructure binary_projection(const RelationalStructure& s) {
  RelationalStructure out(s.labels());
  for (const auto& [symbol, rel] : s.relations()) {
    if (rel.arity() < 2) {
      throw InvalidStructure("binary projection undefined for relation " + symbol + " of arity " +
                             std::to_string(rel.arity()));
    }
    for (std::size_t i = 0; i < rel.arity(); ++i) {
      for (std::size_t j = i + 1; j < rel.arity(); ++j) {
        std::vector<Element> flat;
        flat.reserve(rel.size() * 2);
        for (std::size_t k = 0; k < rel.size(); ++k) {
          flat.push_back(rel[k][i]);
          flat.push_back(rel[k][j]);
        }
        out.add_relation(symbol + "[" + std::to_string(i + 1) + "," + std::to_string(j + 1) + "]",
                         Relation(2, std::move(flat)));
      }
    }
  }
  return out;
}

ComponentDecomposition connected_components(const RelationalStructure& s) {
  detail::UnionFind uf(s.size());
  for (const auto& [symbol, rel] : s.relations()) {
    if (rel.arity() < 2) {
      throw InvalidStructure("connectivity undefined for relation " + symbol + " of arity 1");
    }
    // every pair of coordinates is an edge of the binary projection, so one star per tuple suffices
    for (std::size_t k = 0; k < rel.size(); ++k) {
      auto t = rel[k];
      for (std::size_t i = 1; i < t.size(); ++i) uf.unite(t[0], t[i]);
    }
  }
  ComponentDecomposition d;
  d.block_of.assign(s.size(), 0);
  for (auto& cls : uf.classes()) {
    std::vector<Element> block(cls.begin(), cls.end());
    for (Element e : block) d.block_of[e] = d.blocks.size();
    d.induced.push_back(induced_substructure(s, block));
    d.blocks.push_back(std::move(block));
  }
  return d;
}

bool is_connected(const RelationalStructure& s) { return connected_components(s).blocks.size() <= 1; }

void require_same_signature(const RelationalStructure& a, const RelationalStructure& b) {
  auto sa = a.signature();
  auto sb = b.signature();
  if (sa == sb) return;
  std::string msg = "signature mismatch:";
  for (const auto& [k, v] : sa) {
    auto it = sb.find(k);
    if (it == sb.end()) throw SignatureMismatch(msg + " symbol " + k + " missing on one side");
    if (it->second != v) throw SignatureMismatch(msg + " symbol " + k + " has arities " + std::to_string(v) +
                                                 " and " + std::to_string(it->second));
  }
  throw SignatureMismatch(msg + " extra symbols on one side");
}

std::size_t lex_rank(std::span<const Element> coords, std::span<const std::size_t> radices) {
  std::size_t r = 0;
  for (std::size_t i = 0; i < coords.size(); ++i) r = r * radices[i] + coords[i];
  return r;
}

void lex_unrank(std::size_t rank, std::span<const std::size_t> radices, std::span<Element> out) {
  for (std::size_t i = radices.size(); i-- > 0;) {
    out[i] = static_cast<Element>(rank % radices[i]);
    rank /= radices[i];
  }
}

// -------------------------------------------------------------- combinators

namespace {

std::size_t checked_product(std::size_t acc, std::size_t factor, const Limits& limits, const char* what) {
  if (factor != 0 && acc > limits.max_tuples / factor) {
    throw SizeBoundExceeded(std::string(what) + " exceeds the size bound of " + std::to_string(limits.max_tuples));
  }
  return acc * factor;
}

}  // namespace

RelationalStructure product(std::span<const RelationalStructure> factors, const Limits& limits) {
  if (factors.empty()) throw InvalidStructure("product of an empty list");
  for (const auto& f : factors) require_same_signature(factors[0], f);

  const std::size_t k = factors.size();
  std::vector<std::size_t> radices(k);
  std::size_t universe = 1;
  for (std::size_t i = 0; i < k; ++i) {
    radices[i] = factors[i].size();
    universe = checked_product(universe, radices[i], limits, "product universe");
  }

  std::vector<std::string> labels(universe);
  {
    std::vector<Element> coords(k);
    for (std::size_t r = 0; r < universe; ++r) {
      lex_unrank(r, radices, coords);
      std::string l = "(";
      for (std::size_t i = 0; i < k; ++i) {
        if (i) l += ',';
        l += factors[i].label(coords[i]);
      }
      labels[r] = l + ")";
    }
  }
  RelationalStructure out(std::move(labels));

  for (const auto& [symbol, rel0] : factors[0].relations()) {
    const std::size_t arity = rel0.arity();
    std::vector<const Relation*> rels(k);
    std::vector<std::size_t> counts(k);
    std::size_t combos = 1;
    for (std::size_t i = 0; i < k; ++i) {
      rels[i] = &factors[i].relation(symbol);
      counts[i] = rels[i]->size();
      combos = checked_product(combos, counts[i], limits, "product relation");
    }
    std::vector<Element> flat(combos * arity);
    const auto n_combos = static_cast<std::int64_t>(combos);
#pragma omp parallel for schedule(static) if (combos > 4096)
    for (std::int64_t c = 0; c < n_combos; ++c) {
      std::vector<Element> pick(k);
      std::vector<Element> coords(k);
      lex_unrank(static_cast<std::size_t>(c), counts, pick);
      for (std::size_t p = 0; p < arity; ++p) {
        for (std::size_t i = 0; i < k; ++i) coords[i] = (*rels[i])[pick[i]][p];
        flat[static_cast<std::size_t>(c) * arity + p] = static_cast<Element>(lex_rank(coords, radices));
      }
    }
    out.add_relation(symbol, Relation(arity, std::move(flat)));
  }
  return out;
}

RelationalStructure power(const RelationalStructure& s, std::size_t n, const Limits& limits) {
  if (n == 0) throw InvalidStructure("power exponent must be positive");
  std::vector<RelationalStructure> copies(n, s);
  return product(copies, limits);
}

RelationalStructure disjoint_union(std::span<const RelationalStructure> parts) {
  if (parts.empty()) throw InvalidStructure("disjoint union of an empty list");
  for (const auto& p : parts) require_same_signature(parts[0], p);
  std::vector<std::string> labels;
  std::vector<Element> offset;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    offset.push_back(static_cast<Element>(labels.size()));
    for (const auto& l : parts[i].labels()) labels.push_back(std::to_string(i) + ":" + l);
  }
  RelationalStructure out(std::move(labels));
  for (const auto& [symbol, rel0] : parts[0].relations()) {
    std::vector<Element> flat;
    for (std::size_t i = 0; i < parts.size(); ++i) {
      for (Element e : parts[i].relation(symbol).data()) flat.push_back(e + offset[i]);
    }
    out.add_relation(symbol, Relation(rel0.arity(), std::move(flat)));
  }
  return out;
}

RelationalStructure induced_substructure(const RelationalStructure& s, std::span<const Element> subset) {
  std::vector<Element> ids(subset.begin(), subset.end());
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  constexpr Element kAbsent = ~Element{0};
  std::vector<Element> rank(s.size(), kAbsent);
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (ids[i] >= s.size()) throw InvalidStructure("id not in universe: " + std::to_string(ids[i]));
    rank[ids[i]] = static_cast<Element>(i);
    labels.push_back(s.label(ids[i]));
  }
  RelationalStructure out(std::move(labels));
  for (const auto& [symbol, rel] : s.relations()) {
    std::vector<Element> flat;
    for (std::size_t k = 0; k < rel.size(); ++k) {
      auto t = rel[k];
      if (std::ranges::all_of(t, [&](Element e) { return rank[e] != kAbsent; })) {
        for (Element e : t) flat.push_back(rank[e]);
      }
    }
    out.add_relation(symbol, Relation(rel.arity(), std::move(flat)));
  }
  return out;
}

bool is_weak_substructure(const RelationalStructure& h, const RelationalStructure& g) {
  if (h.signature() != g.signature()) return false;
  ElementMap into(h.size());
  for (Element e = 0; e < h.size(); ++e) {
    auto found = g.find_label(h.label(e));
    if (!found) return false;
    into[e] = *found;
  }
  for (const auto& [symbol, rel] : h.relations()) {
    const Relation& target = g.relation(symbol);
    Tuple img(rel.arity());
    for (std::size_t k = 0; k < rel.size(); ++k) {
      auto t = rel[k];
      for (std::size_t i = 0; i < t.size(); ++i) img[i] = into[t[i]];
      if (!target.contains(img)) return false;
    }
  }
  return true;
}

RelationalStructure image_structure(const RelationalStructure& source, const RelationalStructure& target,
                                    const ElementMap& map) {
  if (map.size() != source.size()) throw InvalidStructure("map is not total on the source universe");
  std::vector<Element> image(map.begin(), map.end());
  std::sort(image.begin(), image.end());
  image.erase(std::unique(image.begin(), image.end()), image.end());
  std::vector<Element> rank(target.size(), 0);
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < image.size(); ++i) {
    if (image[i] >= target.size()) throw InvalidStructure("map value outside the target universe");
    rank[image[i]] = static_cast<Element>(i);
    labels.push_back(target.label(image[i]));
  }
  RelationalStructure out(std::move(labels));
  for (const auto& [symbol, rel] : source.relations()) {
    std::vector<Element> flat;
    flat.reserve(rel.data().size());
    for (Element e : rel.data()) flat.push_back(rank[map[e]]);
    out.add_relation(symbol, Relation(rel.arity(), std::move(flat)));
  }
  return out;
}

RelationalStructure image_structure(const Homomorphism& phi) {
  return image_structure(*phi.source, *phi.target, phi.map);
}

Partition kernel(const ElementMap& map) {
  std::map<Element, std::size_t> slot;
  Partition blocks;
  for (Element e = 0; e < map.size(); ++e) {
    auto [it, fresh] = slot.try_emplace(map[e], blocks.size());
    if (fresh) blocks.emplace_back();
    blocks[it->second].push_back(e);
  }
  return blocks;
}

Partition kernel(const Homomorphism& phi) { return kernel(phi.map); }

}  // namespace relcalc
