#include "relcalc/freecons.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <set>

#include "relcalc/semilat.hpp"

namespace relcalc {

namespace {

using Triple = std::array<Element, 3>;

std::string join_labels(const RelationalStructure& s, std::span<const Element> ids) {
  std::string out = "(";
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i) out += ",";
    out += s.label(ids[i]);
  }
  return out + ")";
}

std::size_t checked_pow(std::size_t base, std::size_t exp, const Limits& limits, const std::string& what) {
  std::size_t r = 1;
  for (std::size_t i = 0; i < exp; ++i) {
    if (base != 0 && r > limits.max_tuples / base) throw SizeBoundExceeded(what + " exceeds the size bound");
    r *= base;
  }
  return r;
}

bool next_tuple(std::vector<Element>& idx, std::size_t bound) {
  for (std::size_t i = idx.size(); i-- > 0;) {
    if (++idx[i] < bound) return true;
    idx[i] = 0;
  }
  return false;
}

Partition sorted_blocks(Partition p) {
  for (auto& b : p) std::ranges::sort(b);
  std::ranges::sort(p);
  return p;
}

std::size_t position_of(const std::vector<Element>& sorted, Element e) {
  auto it = std::ranges::lower_bound(sorted, e);
  if (it == sorted.end() || *it != e) throw VerificationFailure("element missing from its component");
  return static_cast<std::size_t>(it - sorted.begin());
}

}  // namespace

Element FreeBundle::apply_unary(std::size_t u, bool at_y) const {
  const std::size_t base = free.base_size;
  const auto& fn = unary.functions.at(u);
  std::vector<Element> binary(base * base);
  for (std::size_t a = 0; a < base; ++a) {
    for (std::size_t b = 0; b < base; ++b) binary[a * base + b] = fn[at_y ? b : a];
  }
  auto id = free.find(binary);
  if (!id) throw VerificationFailure("unary term operation not found among binary ones");
  return *id;
}

bool FreeBundle::g_bit(std::size_t u, Element g, std::size_t s) const {
  const std::size_t h = H_size(u);
  const std::size_t local = g - G_offset.at(u);
  return ((local >> (h - 1 - s)) & 1u) != 0;
}

Homomorphism FreeBundle::psi_homomorphism() const {
  return make_homomorphism(std::make_shared<const RelationalStructure>(Fstruct),
                           std::make_shared<const RelationalStructure>(G), psi);
}

FreeBundle free_structure(const FiniteAlgebra& a, const Limits& limits) {
  FreeBundle b;
  b.free = free_algebra(a, 2, limits);
  const FiniteAlgebra& F = b.free.algebra;
  const Element x = b.x(), y = b.y();

  std::vector<Triple> rel = {Triple{x, x, x}, Triple{x, y, x}, Triple{y, x, x}, Triple{y, y, y}};
  std::set<Triple> seen(rel.begin(), rel.end());
  rel.assign(seen.begin(), seen.end());
  std::size_t frontier_begin = 0;
  for (std::size_t round = 1; frontier_begin < rel.size(); ++round) {
    const std::size_t known = rel.size();
    for (const auto& [symbol, op] : F.operations) {
      const std::size_t n = op.arity();
      if (n == 0) {
        if (round == 1) {
          const Element c = op.at_rank(0);
          if (seen.insert({c, c, c}).second) rel.push_back({c, c, c});
        }
        continue;
      }
      checked_pow(known, n, limits, "relation closure");
      std::vector<Element> idx(n, 0), args(n);
      do {
        if (std::ranges::none_of(idx, [&](Element e) { return e >= frontier_begin; })) continue;
        Triple out;
        for (std::size_t p = 0; p < 3; ++p) {
          for (std::size_t i = 0; i < n; ++i) args[i] = rel[idx[i]][p];
          out[p] = op(args);
        }
        if (seen.insert(out).second) rel.push_back(out);
      } while (next_tuple(idx, known));
    }
    frontier_begin = known;
  }
  std::vector<Element> flat;
  for (const auto& t : rel) flat.insert(flat.end(), t.begin(), t.end());
  b.Fstruct = RelationalStructure(F.labels);
  b.Fstruct.add_relation("R", Relation(3, std::move(flat)));

  b.unary = free_algebra(a, 1, limits);
  b.identity_component = b.unary.generators.at(0);
  const std::size_t base = b.free.base_size;
  b.component_of.resize(F.size());
  b.component_members.assign(b.unary.size(), {});
  std::vector<Element> diagonal(base);
  for (Element t = 0; t < F.size(); ++t) {
    for (std::size_t v = 0; v < base; ++v) diagonal[v] = b.free.functions[t][v * base + v];
    auto u = b.unary.find(diagonal);
    if (!u) throw VerificationFailure("t(x,x) is not a unary term operation for t = " + F.labels[t]);
    b.component_of[t] = *u;
    b.component_members[*u].push_back(t);
  }
  for (const auto& members : b.component_members) {
    b.components.push_back(induced_substructure(b.Fstruct, members));
  }
  return b;
}

FreeBundle compute_H(FreeBundle b) {
  const RelationalStructure s = semilattice_structure();
  std::vector<std::vector<ElementMap>> H(b.components.size());
  SearchOptions opts;
  opts.nonconstant_only = true;
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t u = 0; u < static_cast<std::int64_t>(H.size()); ++u) {
    H[static_cast<std::size_t>(u)] = find_homs_serial(b.components[static_cast<std::size_t>(u)], s, opts);
  }
  b.H = std::move(H);
  return b;
}

FreeBundle collapse(FreeBundle b, const Limits& limits) {
  if (!b.H) throw Error("collapse needs the hom-sets H_u");
  const FiniteAlgebra& F = b.free.algebra;
  const std::size_t U = b.components.size();

  std::vector<RelationalStructure> parts;
  for (std::size_t u = 0; u < U; ++u) {
    const std::size_t h = b.H_size(u);
    if (h >= 8 * sizeof(std::size_t) - 1) throw SizeBoundExceeded("too many homomorphisms in one component");
    parts.push_back(h == 0 ? point_structure() : power(semilattice_structure(), h, limits));
  }
  b.G = disjoint_union(parts);
  b.G_offset.clear();
  Element offset = 0;
  for (const auto& p : parts) {
    b.G_offset.push_back(offset);
    offset += static_cast<Element>(p.size());
  }

  b.psi.assign(F.size(), 0);
  for (std::size_t u = 0; u < U; ++u) {
    const auto& members = b.component_members[u];
    const auto& homs = b.H->at(u);
    for (std::size_t i = 0; i < members.size(); ++i) {
      std::size_t r = 0;
      for (const auto& phi : homs) r = r * 2 + phi[i];
      b.psi[members[i]] = b.G_offset[u] + static_cast<Element>(r);
    }
  }
  if (auto check = is_homomorphism(b.Fstruct, b.G, b.psi); !check.ok) {
    throw VerificationFailure("psi does not preserve relation " + check.symbol);
  }

  b.K = image_structure(b.Fstruct, b.G, b.psi);
  b.K_to_G = b.psi;
  std::ranges::sort(b.K_to_G);
  b.K_to_G.erase(std::unique(b.K_to_G.begin(), b.K_to_G.end()), b.K_to_G.end());
  b.psi_K.resize(F.size());
  for (Element t = 0; t < F.size(); ++t) b.psi_K[t] = static_cast<Element>(position_of(b.K_to_G, b.psi[t]));
  b.K_members.assign(U, {});
  for (Element k = 0; k < b.K.size(); ++k) {
    const Element g = b.K_to_G[k];
    const auto u = static_cast<std::size_t>(std::ranges::upper_bound(b.G_offset, g) - b.G_offset.begin()) - 1;
    b.K_members[u].push_back(k);
  }
  b.K_components.clear();
  for (const auto& members : b.K_members) b.K_components.push_back(induced_substructure(b.K, members));
  b.kernel = kernel(b.psi);

  // Quotient algebra: t_K([a1],...,[an]) = [t_F(a1,...,an)].
  constexpr Element kUnset = static_cast<Element>(-1);
  const std::size_t k = b.K.size();
  b.Kalg = FiniteAlgebra{b.K.labels(), {}};
  for (const auto& [symbol, op] : F.operations) {
    const std::size_t n = op.arity();
    const std::size_t len = checked_pow(k, n, limits, "quotient operation table");
    std::vector<Element> values(len, kUnset);
    std::vector<std::size_t> source(len);
    std::vector<Element> args(n);
    for (std::size_t r = 0; r < op.values().size(); ++r) {
      OperationTable::unrank_args(r, n, F.size(), args);
      std::size_t kr = 0;
      for (Element e : args) kr = kr * k + b.psi_K[e];
      const Element v = b.psi_K[op.at_rank(r)];
      if (values[kr] == kUnset) {
        values[kr] = v;
        source[kr] = r;
      } else if (values[kr] != v) {
        std::vector<Element> first(n);
        OperationTable::unrank_args(source[kr], n, F.size(), first);
        throw VerificationFailure("operation " + symbol + " is not well defined modulo ker(psi): " + symbol +
                                  join_labels(b.Fstruct, first) + " and " + symbol + join_labels(b.Fstruct, args) +
                                  " have related arguments but unrelated values");
      }
    }
    b.Kalg.operations.emplace(symbol, OperationTable(n, k, std::move(values)));
  }
  b.collapsed = true;
  return b;
}

FreeBundle build_free_bundle(const FiniteAlgebra& a, const Limits& limits) {
  return collapse(compute_H(free_structure(a, limits)), limits);
}

Report verify_lemma21(const FreeBundle& b) {
  Report r;
  const auto blocks = sorted_blocks(connected_components(b.Fstruct).blocks);
  r.add("components", blocks == sorted_blocks(b.component_members),
        std::to_string(blocks.size()) + " components, " + std::to_string(b.component_members.size()) +
            " unary term operations");
  if (!b.H) throw Error("lemma checks need the hom-sets H_u");
  const std::size_t id = b.identity_component;
  if (b.H->at(id).empty()) {
    r.refuse("retract", "hypothesis absent: H_id = ∅");
  } else {
    const auto& members = b.component_members[id];
    const ElementMap beta = {static_cast<Element>(position_of(members, b.x())),
                             static_cast<Element>(position_of(members, b.y()))};
    const bool ok = find_retraction(b.components[id], semilattice_structure(), beta).has_value();
    r.add("retract", ok, ok ? "retraction of F_id onto {x, y} found" : "no retraction fixing x and y");
  }
  return r;
}

Report verify_lemma22(const FreeBundle& b, const Limits& limits) {
  if (!b.collapsed) throw Error("lemma checks need a collapsed bundle");
  Report r;
  const std::size_t U = b.K_components.size();
  const FiniteAlgebra& F = b.free.algebra;

  {
    bool ok = is_reflexive(b.K);
    for (const auto& ku : b.K_components) ok = ok && is_reflexive(ku);
    r.add("item1", ok, "K and every K_u reflexive");
  }
  {
    Partition images(U);
    for (std::size_t u = 0; u < U; ++u) {
      for (Element t : b.component_members[u]) images[u].push_back(b.psi_K[t]);
      std::ranges::sort(images[u]);
      images[u].erase(std::unique(images[u].begin(), images[u].end()), images[u].end());
    }
    const bool ok = sorted_blocks(connected_components(b.K).blocks) == sorted_blocks(images) &&
                    sorted_blocks(images) == sorted_blocks(b.K_members);
    r.add("item2", ok, std::to_string(U) + " components");
  }
  {
    const std::size_t id = b.identity_component;
    if (b.H->at(id).empty()) {
      r.refuse("item3", "hypothesis absent: H_id = ∅");
    } else {
      const auto& members = b.K_members[id];
      const ElementMap beta = {static_cast<Element>(position_of(members, b.psi_K[b.x()])),
                               static_cast<Element>(position_of(members, b.psi_K[b.y()]))};
      const bool ok = find_retraction(b.K_components[id], semilattice_structure(), beta).has_value();
      r.add("item3", ok, ok ? "retraction of K_id onto {[x], [y]} found" : "no retraction fixing [x] and [y]");
    }
  }
  {
    bool ok = true;
    std::size_t maps = 0;
    std::string detail;
    for (std::size_t u = 0; u < U && ok; ++u) {
      const auto& members = b.K_members[u];
      for (const auto& phi : find_homs(b.K_components[u], semilattice_structure())) {
        ++maps;
        if (is_constant_map(phi)) continue;
        std::size_t witnesses = 0;
        for (std::size_t s = 0; s < b.H_size(u); ++s) {
          bool match = true;
          for (std::size_t i = 0; i < members.size() && match; ++i) {
            match = (phi[i] != 0) == b.g_bit(u, b.K_to_G[members[i]], s);
          }
          witnesses += match;
        }
        if (witnesses != 1) {
          ok = false;
          detail = "component " + std::to_string(u) + ": nonconstant map with " + std::to_string(witnesses) +
                   " witnessing coordinates";
          break;
        }
      }
    }
    r.add("item4", ok, ok ? std::to_string(maps) + " maps K_u -> 𝕊 are constants or unique projections" : detail);
  }
  {
    // Basic translations x -> f(p1,..,x at i,..,pn) must map each kernel class into one class.
    bool ok = true;
    std::string detail;
    for (const auto& [symbol, op] : F.operations) {
      const std::size_t n = op.arity();
      if (n == 0) continue;
      const std::size_t params = checked_pow(F.size(), n - 1, limits, "translation parameters");
      std::vector<Element> p(n - 1), args(n);
      for (std::size_t i = 0; i < n && ok; ++i) {
        for (std::size_t pr = 0; pr < params && ok; ++pr) {
          OperationTable::unrank_args(pr, n - 1, F.size(), p);
          auto translate = [&](Element x) {
            for (std::size_t j = 0, q = 0; j < n; ++j) args[j] = j == i ? x : p[q++];
            return op(args);
          };
          for (const auto& cls : b.kernel) {
            const Element first = b.psi[translate(cls[0])];
            for (std::size_t c = 1; c < cls.size() && ok; ++c) {
              if (b.psi[translate(cls[c])] != first) {
                ok = false;
                detail = "translation of " + symbol + " at position " + std::to_string(i + 1) + " separates " +
                         F.labels[cls[0]] + " and " + F.labels[cls[c]];
              }
            }
          }
        }
      }
    }
    r.add("item5", ok, ok ? "ker(psi) is preserved by every basic translation" : detail);
  }
  {
    bool ok = true;
    std::string detail;
    for (const auto& [symbol, op] : F.operations) {
      const OperationTable& kop = b.Kalg.operations.at(symbol);
      std::vector<Element> args(op.arity()), kargs(op.arity());
      for (std::size_t rank = 0; rank < op.values().size() && ok; ++rank) {
        OperationTable::unrank_args(rank, op.arity(), F.size(), args);
        for (std::size_t i = 0; i < args.size(); ++i) kargs[i] = b.psi_K[args[i]];
        if (kop(kargs) != b.psi_K[op.at_rank(rank)]) {
          ok = false;
          detail = symbol + " is not induced at " + join_labels(b.Fstruct, args);
        }
      }
      if (ok && !is_polymorphism(b.K, kop, limits)) {
        ok = false;
        detail = symbol + " of K does not preserve the relation of K";
      }
    }
    r.add("item6", ok, ok ? "operations of K are well defined and compatible with K" : detail);
  }
  return r;
}

namespace {

// A coordinate of a polymorphism restricted to one component of K^n:
// a constant, or the meet of bit j_l of argument l over the listed pairs.
struct CoordinateForm {
  std::optional<Element> constant;
  std::vector<std::pair<std::size_t, std::size_t>> meet;  // (argument position, coordinate)

  bool operator==(const CoordinateForm&) const = default;
};

Element evaluate(const CoordinateForm& form, const std::function<bool(std::size_t, std::size_t)>& bit) {
  if (form.constant) return *form.constant;
  for (const auto& [l, j] : form.meet) {
    if (!bit(l, j)) return 0;
  }
  return 1;
}

struct ClaimContext {
  const FreeBundle& b;
  std::vector<std::size_t> comp_of_k;   // K id -> U id
  std::vector<std::size_t> local_of_k;  // K id -> index in its component
  std::vector<std::size_t> comp_of_g;   // G id -> U id

  explicit ClaimContext(const FreeBundle& bundle) : b(bundle) {
    comp_of_k.resize(b.K.size());
    local_of_k.resize(b.K.size());
    for (std::size_t u = 0; u < b.K_members.size(); ++u) {
      for (std::size_t i = 0; i < b.K_members[u].size(); ++i) {
        comp_of_k[b.K_members[u][i]] = u;
        local_of_k[b.K_members[u][i]] = i;
      }
    }
    comp_of_g.resize(b.G.size());
    for (Element g = 0; g < b.G.size(); ++g) {
      comp_of_g[g] = static_cast<std::size_t>(std::ranges::upper_bound(b.G_offset, g) - b.G_offset.begin()) - 1;
    }
  }
};

// All operations of the declared clone for one coordinate: constants 0 and 1,
// then meets choosing at most one coordinate per argument position.
std::vector<CoordinateForm> clone_candidates(const FreeBundle& b, std::span<const std::size_t> comps) {
  std::vector<CoordinateForm> out;
  out.push_back({Element{0}, {}});
  out.push_back({Element{1}, {}});
  std::vector<std::size_t> radices;
  for (std::size_t u : comps) radices.push_back(b.H_size(u) + 1);  // 0 = position unused
  std::size_t total = 1;
  for (std::size_t r : radices) total *= r;
  std::vector<Element> pick(radices.size());
  for (std::size_t c = 1; c < total; ++c) {
    lex_unrank(c, radices, pick);
    CoordinateForm f;
    for (std::size_t l = 0; l < pick.size(); ++l) {
      if (pick[l] != 0) f.meet.emplace_back(l, pick[l] - 1);
    }
    out.push_back(std::move(f));
  }
  return out;
}

}  // namespace

Report verify_claims(const FreeBundle& b, std::size_t n, const Limits& limits) {
  if (!b.collapsed) throw Error("claim checks need a collapsed bundle");
  if (n == 0) throw Error("polymorphism arity must be positive");
  Report r;
  const std::size_t U = b.K_components.size();
  const ClaimContext ctx(b);
  const RelationalStructure s = semilattice_structure();

  {
    bool ok = true;
    std::string detail;
    for (std::size_t u = 0; u < U && ok; ++u) {
      const auto psl = is_partial_semilattice(b.K_components[u]);
      const auto top = largest_element(b.K_components[u]);
      const std::size_t uy = ctx.local_of_k[b.psi_K[b.apply_unary(u, true)]];
      if (!psl.accepted()) {
        ok = false;
        detail = "K_" + std::to_string(u) + " is not a partial semilattice: " + psl.reason;
      } else if (!top || *top != uy) {
        ok = false;
        detail = "largest element of K_" + std::to_string(u) + " is not [u(y)]";
      }
    }
    r.add("claim1", ok, ok ? "every K_u is a partial semilattice with largest element [u(y)]" : detail);
  }
  {
    bool ok = true;
    std::string detail;
    for (std::size_t u = 0; u < U && ok; ++u) {
      const Element ux = b.psi_K[b.apply_unary(u, false)];
      const Element uy = b.psi_K[b.apply_unary(u, true)];
      const bool point = b.K_members[u].size() == 1;
      if (point != (ux == uy)) {
        ok = false;
        detail = "K_" + std::to_string(u) + ": |K_u| = 1 and [u(x)] = [u(y)] disagree";
      } else if (!point) {
        const std::vector<Element> pair = {std::min(ux, uy), std::max(ux, uy)};
        if (!find_isomorphism(induced_substructure(b.K, pair), s)) {
          ok = false;
          detail = "K_" + std::to_string(u) + ": {[u(x)], [u(y)]} is not a copy of 𝕊";
        }
      }
    }
    r.add("claim2", ok, ok ? "|K_u| = 1 exactly when [u(x)] = [u(y)]" : detail);
  }

  const std::size_t kn = checked_pow(b.K.size(), n, limits, "K^n");
  const std::size_t gn = checked_pow(b.G.size(), n, limits, "G^n");
  (void)kn;
  const auto pols = polymorphisms(b.K, n, limits);

  bool ok3 = true, ok4 = true;
  std::string detail3, detail4;
  std::size_t component_tuples = checked_pow(U, n, limits, "component tuples");
  std::vector<std::size_t> radices_u(n, U);

  for (std::size_t fi = 0; fi < pols.size() && ok3 && ok4; ++fi) {
    const OperationTable& f = pols[fi];
    // forms[component tuple][s]
    std::vector<std::size_t> target(component_tuples);
    std::vector<std::vector<CoordinateForm>> forms(component_tuples);
    std::vector<Element> comps_e(n);
    for (std::size_t ct = 0; ct < component_tuples && ok3 && ok4; ++ct) {
      lex_unrank(ct, radices_u, comps_e);
      std::vector<std::size_t> comps(comps_e.begin(), comps_e.end());
      std::vector<RelationalStructure> factors;
      std::vector<std::size_t> sizes;
      for (std::size_t u : comps) {
        factors.push_back(b.K_components[u]);
        sizes.push_back(b.K_members[u].size());
      }
      const RelationalStructure D = product(factors, limits);
      std::vector<Element> local(n), kargs(n);
      auto k_args = [&](std::size_t d) {
        lex_unrank(d, sizes, local);
        for (std::size_t l = 0; l < n; ++l) kargs[l] = b.K_members[comps[l]][local[l]];
      };

      // Claim 3: f maps D into one K_u and each coordinate has a meet form.
      std::set<std::size_t> hit;
      std::vector<Element> fd(D.size());
      for (std::size_t d = 0; d < D.size(); ++d) {
        k_args(d);
        fd[d] = b.K_to_G[f(kargs)];
        hit.insert(ctx.comp_of_g[fd[d]]);
      }
      if (hit.size() != 1) {
        ok3 = false;
        detail3 = "polymorphism " + std::to_string(fi) + " spreads one component over several";
        break;
      }
      const std::size_t ut = *hit.begin();
      target[ct] = ut;
      auto bit_of_arg = [&](std::size_t l, std::size_t j) {
        return b.g_bit(comps[l], b.K_to_G[kargs[l]], j);
      };
      for (std::size_t sidx = 0; sidx < b.H_size(ut) && ok3; ++sidx) {
        ElementMap fs(D.size());
        for (std::size_t d = 0; d < D.size(); ++d) fs[d] = b.g_bit(ut, fd[d], sidx) ? 1 : 0;
        CoordinateForm form;
        try {
          const auto dec = decompose_product_hom(factors, s, fs);
          if (dec.constant) {
            form.constant = *dec.constant;
          } else {
            for (std::size_t l = 0; l < n && ok3; ++l) {
              const ElementMap& fl = dec.unary[l];
              if (is_constant_map(fl)) {
                if (fl[0] == 1) continue;
                ok3 = false;
                detail3 = "nonconstant coordinate with a factor constantly 0";
                break;
              }
              std::vector<std::size_t> witnesses;
              for (std::size_t j = 0; j < b.H_size(comps[l]); ++j) {
                bool match = true;
                for (std::size_t i = 0; i < fl.size() && match; ++i) {
                  match = (fl[i] != 0) == b.g_bit(comps[l], b.K_to_G[b.K_members[comps[l]][i]], j);
                }
                if (match) witnesses.push_back(j);
              }
              if (witnesses.size() != 1) {
                ok3 = false;
                detail3 = "factor map is neither constant nor a unique projection";
                break;
              }
              form.meet.emplace_back(l, witnesses[0]);
            }
          }
        } catch (const VerificationFailure& e) {
          ok3 = false;
          detail3 = std::string("decomposition failed: ") + e.what();
        }
        if (!ok3) break;
        for (std::size_t d = 0; d < D.size(); ++d) {
          k_args(d);
          if (evaluate(form, bit_of_arg) != fs[d]) {
            ok3 = false;
            detail3 = "meet form disagrees with the polymorphism";
            break;
          }
        }
        if (!ok3) break;

        // Claim 4 uniqueness: exactly one clone candidate agrees on D, and
        // every candidate agreeing on the two-element images has the same shape.
        std::size_t agree_d = 0;
        bool same_shape = true;
        for (const auto& cand : clone_candidates(b, comps)) {
          bool on_d = true, on_p = true;
          for (std::size_t d = 0; d < D.size() && (on_d || on_p); ++d) {
            k_args(d);
            const bool matches = evaluate(cand, bit_of_arg) == fs[d];
            on_d = on_d && matches;
            bool in_p = true;
            for (std::size_t l = 0; l < n; ++l) {
              const Element ux = b.psi_K[b.apply_unary(comps[l], false)];
              const Element uy = b.psi_K[b.apply_unary(comps[l], true)];
              in_p = in_p && (kargs[l] == ux || kargs[l] == uy);
            }
            if (in_p) on_p = on_p && matches;
          }
          agree_d += on_d;
          if (on_p) {
            const bool shape = cand.constant == form.constant &&
                               std::ranges::equal(cand.meet, form.meet, {}, &std::pair<std::size_t, std::size_t>::first,
                                                  &std::pair<std::size_t, std::size_t>::first);
            same_shape = same_shape && shape;
          }
        }
        if (agree_d != 1 || !same_shape) {
          ok4 = false;
          detail4 = agree_d != 1 ? std::to_string(agree_d) + " clone operations agree with a coordinate"
                                 : "clone operations agreeing on two-element images differ in shape";
          break;
        }
        forms[ct].push_back(std::move(form));
      }
    }
    if (!ok3 || !ok4) break;

    // Claim 4: the extension f* on G built from the forms.
    std::vector<Element> star(gn);
    std::vector<Element> gargs(n), comps_of(n);
    for (std::size_t rank = 0; rank < gn; ++rank) {
      OperationTable::unrank_args(rank, n, b.G.size(), gargs);
      for (std::size_t l = 0; l < n; ++l) comps_of[l] = static_cast<Element>(ctx.comp_of_g[gargs[l]]);
      const std::size_t ct = lex_rank(comps_of, radices_u);
      const std::size_t ut = target[ct];
      std::size_t local = 0;
      for (const auto& form : forms[ct]) {
        local = local * 2 + evaluate(form, [&](std::size_t l, std::size_t j) {
                  return b.g_bit(comps_of[l], gargs[l], j);
                });
      }
      star[rank] = b.G_offset[ut] + static_cast<Element>(local);
    }
    const OperationTable fstar(n, b.G.size(), std::move(star));
    std::vector<Element> kargs(n), ga(n);
    for (std::size_t rank = 0; rank < f.values().size() && ok4; ++rank) {
      OperationTable::unrank_args(rank, n, b.K.size(), kargs);
      for (std::size_t l = 0; l < n; ++l) ga[l] = b.K_to_G[kargs[l]];
      if (fstar(ga) != b.K_to_G[f.at_rank(rank)]) {
        ok4 = false;
        detail4 = "extension of polymorphism " + std::to_string(fi) + " does not agree with it on K";
      }
    }
    if (ok4 && !is_polymorphism(b.G, fstar, limits)) {
      ok4 = false;
      detail4 = "extension of polymorphism " + std::to_string(fi) + " does not preserve G";
    }
  }
  const std::string summary = std::to_string(pols.size()) + " polymorphisms of arity " + std::to_string(n) +
                              " over " + std::to_string(component_tuples) + " component products";
  r.add("claim3", ok3, ok3 ? summary : detail3);
  if (!ok3) {
    r.refuse("claim4", "skipped: claim 3 failed");
  } else {
    r.add("claim4", ok4, ok4 ? summary : detail4);
  }
  return r;
}

HmEvidence hm_evidence(const FiniteAlgebra& a, std::optional<std::size_t> m, bool parallel, const Limits& limits) {
  a.validate();
  for (const auto& [symbol, op] : a.operations) {
    if (!op.is_idempotent()) throw Error("algebra is not idempotent: operation " + symbol);
  }
  HmEvidence ev;
  ev.m = m.value_or(std::max<std::size_t>(2, a.max_arity()));
  if (ev.m == 0 || ev.m > 63) throw Error("arity bound must be between 1 and 63");

  std::map<std::string, std::size_t> decls;
  for (const auto& [symbol, op] : a.operations) decls.emplace(symbol, op.arity());
  const ident::LabelingSpace space(decls);
  ev.labelings = space.size();
  if (space.size() > 1'000'000) throw SizeBoundExceeded("too many labelings");

  std::vector<FreeAlgebra> frees;
  for (std::size_t j = 1; j <= ev.m; ++j) frees.push_back(free_algebra(a, j, limits));

  const auto& symbols = space.symbols();
  auto symbol_index = [&](const std::string& name) {
    return static_cast<std::size_t>(std::ranges::find(symbols, name) - symbols.begin());
  };
  // Per free algebra: symbol index of every derivation and coincidence step.
  std::vector<std::vector<std::size_t>> deriv_sym(frees.size()), coin_sym(frees.size());
  for (std::size_t j = 0; j < frees.size(); ++j) {
    for (const auto& st : frees[j].derivation) deriv_sym[j].push_back(symbol_index(st.symbol));
    for (const auto& st : frees[j].coincidences) coin_sym[j].push_back(symbol_index(st.symbol));
  }

  struct Hit {
    std::size_t free = 0;
    std::size_t step = 0;
  };
  std::vector<std::optional<Hit>> hits(space.size());
#pragma omp parallel for schedule(dynamic, 8) if (parallel)
  for (std::int64_t idx = 0; idx < static_cast<std::int64_t>(space.size()); ++idx) {
    const auto choice = space.choice(static_cast<std::size_t>(idx));
    std::vector<std::uint64_t> mask_of(symbols.size(), 0);
    for (std::size_t si = 0; si < symbols.size(); ++si) {
      for (std::size_t pos : space.subsets(si)[choice[si]]) mask_of[si] |= std::uint64_t{1} << (pos - 1);
    }
    auto fold = [&](std::size_t sym, const std::vector<Element>& args, const std::vector<std::uint64_t>& vs) {
      std::uint64_t out = 0;
      for (std::size_t i = 0; i < args.size(); ++i) {
        if ((mask_of[sym] >> i) & 1u) out |= vs[args[i]];
      }
      return out;
    };
    for (std::size_t j = 0; j < frees.size(); ++j) {
      const FreeAlgebra& fa = frees[j];
      std::vector<std::uint64_t> varset(fa.size(), 0);
      for (std::size_t g = 0; g < fa.generators.size(); ++g) varset[fa.generators[g]] |= std::uint64_t{1} << g;
      for (std::size_t d = 0; d < fa.derivation.size(); ++d) {
        varset[fa.derivation[d].result] = fold(deriv_sym[j][d], fa.derivation[d].args, varset);
      }
      bool found = false;
      for (std::size_t c = 0; c < fa.coincidences.size(); ++c) {
        const TermStep& st = fa.coincidences[c];
        if (fold(coin_sym[j][c], st.args, varset) != varset[st.result]) {
          hits[static_cast<std::size_t>(idx)] = Hit{j, c};
          found = true;
          break;
        }
      }
      if (found) break;
    }
  }

  for (std::size_t idx = 0; idx < space.size(); ++idx) {
    if (!hits[idx]) {
      ev.kind = HmEvidence::Kind::ConsistentLabelingFound;
      ev.labeling = space.at(idx);
      return ev;
    }
  }
  ev.kind = HmEvidence::Kind::CertifiedHM;
  for (std::size_t idx = 0; idx < space.size(); ++idx) {
    const FreeAlgebra& fa = frees[hits[idx]->free];
    ev.log.push_back({space.at(idx), hits[idx]->free + 1, fa.identity(fa.coincidences[hits[idx]->step])});
  }
  return ev;
}

Report replay_hm_evidence(const FiniteAlgebra& a, const HmEvidence& ev) {
  Report r;
  if (ev.kind != HmEvidence::Kind::CertifiedHM) {
    r.refuse("certificate", "no certificate: a labeling survived every identity up to arity " +
                                std::to_string(ev.m));
    return r;
  }
  std::map<std::string, std::size_t> decls;
  for (const auto& [symbol, op] : a.operations) decls.emplace(symbol, op.arity());
  const ident::LabelingSpace space(decls);
  bool covers = ev.log.size() == space.size();
  for (std::size_t i = 0; covers && i < space.size(); ++i) covers = ev.log[i].labeling == space.at(i);
  r.add("covers every labeling", covers, std::to_string(ev.log.size()) + " of " + std::to_string(space.size()));

  bool hold = true, separate = true, bounded = true;
  std::string detail;
  for (const auto& entry : ev.log) {
    bounded = bounded && entry.arity <= ev.m && ident::variables(entry.identity).size() <= entry.arity;
    const auto h = ident::holds_in(a, entry.identity, a.operations);
    if (!h.holds && hold) {
      hold = false;
      detail = ident::to_string(entry.identity);
    }
    separate = separate && !ident::satisfied_by(entry.identity, entry.labeling);
  }
  r.add("identities hold in the algebra", hold, hold ? "" : "fails: " + detail);
  r.add("labelings violate their identities", separate);
  r.add("identities within the arity bound", bounded);
  return r;
}

}  // namespace relcalc
