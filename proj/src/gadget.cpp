#include "relcalc/gadget.hpp"

#include <algorithm>
#include <bit>

#include "relcalc/homsearch.hpp"

namespace relcalc {

namespace {

constexpr Element kD = 0, kA = 1, kB = 2, kC = 3;

RelationalStructure semilattice_with_symbol(const std::string& symbol) {
  RelationalStructure s({"0", "1"});
  s.add_relation(symbol, semilattice_structure().only_relation());
  return s;
}

}  // namespace

RelationalStructure y_structure(const std::string& symbol) {
  // meet[u][v] for the order d < c < a, d < c < b
  static constexpr Element meet[4][4] = {
      {kD, kD, kD, kD},
      {kD, kA, kC, kC},
      {kD, kC, kB, kC},
      {kD, kC, kC, kC},
  };
  std::vector<Tuple> triples;
  for (Element u = 0; u < 4; ++u) {
    for (Element v = 0; v < 4; ++v) triples.push_back({u, v, meet[u][v]});
  }
  RelationalStructure y({"d", "a", "b", "c"});
  y.add_relation(symbol, Relation(3, triples));
  return y;
}

RelationalStructure gadget_transform(const RelationalStructure& d) {
  if (d.relations().size() != 1 || d.only_relation().arity() != 3) {
    throw SignatureMismatch("gadget transform needs a single ternary relation");
  }
  const std::string& symbol = d.only_symbol();
  const auto homs = find_homs(semilattice_with_symbol(symbol), d);
  const RelationalStructure y = y_structure(symbol);

  std::vector<std::string> labels;
  for (const auto& f : homs) labels.push_back("(" + d.label(f[0]) + "," + d.label(f[1]) + ")");

  // Homs sharing f(0) are contiguous because the list is sorted by f(0).
  std::vector<Element> flat;
  ElementMap ymap(4);
  for (std::size_t i = 0; i < homs.size(); ++i) {
    for (std::size_t j = 0; j < homs.size(); ++j) {
      if (homs[j][0] != homs[i][0]) continue;
      for (std::size_t k = 0; k < homs.size(); ++k) {
        if (homs[k][0] != homs[i][0]) continue;
        ymap[kD] = homs[i][0];
        ymap[kA] = homs[i][1];
        ymap[kB] = homs[j][1];
        ymap[kC] = homs[k][1];
        if (is_homomorphism(y, d, ymap).ok) {
          flat.insert(flat.end(), {static_cast<Element>(i), static_cast<Element>(j), static_cast<Element>(k)});
        }
      }
    }
  }
  RelationalStructure out(std::move(labels));
  out.add_relation(symbol, Relation(3, std::move(flat)));
  return out;
}

bool y_reconstruction_self_test() {
  const RelationalStructure e0 = gadget_transform(semilattice_structure());
  if (e0.labels() != std::vector<std::string>{"(0,0)", "(0,1)", "(1,1)"}) return false;
  // ids: (0,0)=0, (0,1)=1, (1,1)=2
  const std::vector<Tuple> expected = {{0, 0, 0}, {0, 1, 0}, {1, 0, 0}, {1, 1, 1}, {2, 2, 2}};
  return e0.only_relation() == Relation(3, expected);
}

RelationalStructure diagonal_structure(std::size_t n, const std::string& symbol) {
  if (n == 0) throw InvalidStructure("diagonal structure needs at least one element");
  std::vector<Tuple> triples;
  for (Element a = 0; a < n; ++a) triples.push_back({a, a, a});
  RelationalStructure s(n);
  s.add_relation(symbol, Relation(3, triples));
  return s;
}

PowerProfile power_profile(const RelationalStructure& s) {
  PowerProfile p;
  const auto comps = connected_components(s);
  for (std::size_t i = 0; i < comps.blocks.size(); ++i) {
    const RelationalStructure& c = comps.induced[i];
    MatchedComponent m{comps.blocks[i], std::nullopt};
    const std::size_t size = c.size();
    if (std::has_single_bit(size) && c.relations().size() == 1 && c.only_relation().arity() == 3) {
      const auto k = static_cast<std::size_t>(std::countr_zero(size));
      const std::string& symbol = c.only_symbol();
      const RelationalStructure target =
          k == 0 ? point_structure(symbol) : power(semilattice_with_symbol(symbol), k);
      if (find_isomorphism(c, target)) m.power = k;
    }
    if (m.power) {
      ++p.multiplicity[*m.power];
    } else {
      ++p.unmatched;
    }
    p.components.push_back(std::move(m));
  }
  return p;
}

GadgetAnalysis analyze_gadget_components(const RelationalStructure& d) {
  GadgetAnalysis a;
  a.input = power_profile(d);
  if (!a.input.all_matched()) {
    throw Error(std::to_string(a.input.unmatched) + " component(s) of the input are not powers of 𝕊");
  }
  a.transformed = gadget_transform(d);
  a.output = power_profile(a.transformed);
  return a;
}

}  // namespace relcalc
