// Runs each acceptance criterion and prints one [PASS]/[FAIL] line per criterion.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <sstream>
#include <string>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "relcalc/freecons.hpp"
#include "relcalc/gadget.hpp"
#include "relcalc/identlang.hpp"
#include "relcalc/json_io.hpp"
#include "relcalc/semilat.hpp"

using namespace relcalc;

namespace {

/// Collects the reasons a criterion failed; empty means pass.
struct Outcome {
  std::vector<std::string> problems;
  std::string summary;

  void require(bool ok, const std::string& what) {
    if (!ok) problems.push_back(what);
  }
};

bool all_pass(const Report& r, const std::set<std::string>& refused = {}) {
  for (const auto& c : r.checks) {
    const Verdict want = refused.count(c.name) ? Verdict::Refused : Verdict::Pass;
    if (c.verdict != want) return false;
  }
  return true;
}

std::vector<std::string> kernel_names(const FreeBundle& b) {
  std::vector<std::string> out;
  for (const auto& cls : b.kernel) {
    std::string s = "{";
    for (std::size_t i = 0; i < cls.size(); ++i) s += (i ? "," : "") + b.F().labels[cls[i]];
    out.push_back(s + "}");
  }
  return out;
}

Outcome polymorphism_counts() {
  Outcome o;
  const std::size_t expected[] = {3, 5, 9};
  std::size_t refusals = 0;
  for (std::size_t n = 1; n <= 3; ++n) {
    const auto tables = polymorphisms(semilattice_structure(), n);
    o.require(tables.size() == expected[n - 1], "arity " + std::to_string(n) + " gives " +
                                                    std::to_string(tables.size()) + " operations");
    for (const auto& t : tables) refusals += classify_meet_operation(t).kind == MeetClassification::Kind::Refused;
  }
  o.require(refusals == 0, std::to_string(refusals) + " refusals");
  o.summary = "3, 5, 9 polymorphisms of S, all Constant or Meet";
  return o;
}

Outcome e0_golden() {
  Outcome o;
  const auto e0 = gadget_transform(semilattice_structure());
  RelationalStructure golden(std::vector<std::string>{"(0,0)", "(0,1)", "(1,1)"});
  golden.add_relation("R", Relation(3, std::vector<Tuple>{{0, 0, 0}, {0, 1, 0}, {1, 0, 0}, {1, 1, 1}, {2, 2, 2}}));
  o.require(e0 == golden, "transform of S differs from the five listed triples");
  o.require(e0 == read_structure(fixtures::data("structures/E0.json")), "transform of S differs from E0.json");
  const std::vector<RelationalStructure> parts = {semilattice_structure(), point_structure()};
  o.require(find_isomorphism(e0, disjoint_union(parts)).has_value(), "not isomorphic to S + I");
  o.summary = "E0 = {(0,0),(0,1),(1,1)} with 5 triples, isomorphic to S + I";
  return o;
}

Outcome gadget_components() {
  Outcome o;
  const std::map<std::size_t, std::size_t> expected[] = {{{0, 1}, {1, 1}}, {{0, 1}, {1, 2}, {2, 1}}};
  for (std::size_t n = 1; n <= 2; ++n) {
    const auto g = analyze_gadget_components(power(semilattice_structure(), n));
    o.require(g.output.all_matched() && g.output.multiplicity == expected[n - 1],
              "wrong multiplicities for n=" + std::to_string(n));
    const std::vector<RelationalStructure> factors = {g.transformed, diagonal_structure(2)};
    const auto doubled = power_profile(product(factors));
    std::map<std::size_t, std::size_t> twice;
    for (const auto& [k, m] : expected[n - 1]) twice[k] = 2 * m;
    o.require(doubled.all_matched() && doubled.multiplicity == twice,
              "diagonal product does not double for n=" + std::to_string(n));
  }
  o.summary = "components binomial(n,k) for n=1,2; diagonal product doubles them";
  return o;
}

Outcome free_semilattice() {
  Outcome o;
  const auto b = build_free_bundle(fixtures::semilattice());
  o.require(b.F().size() == 3, "|F| != 3");
  o.require(b.unary.size() == 1, "|U| != 1");
  o.require(b.Fstruct.only_relation().size() == 10, "relation size != 10");
  o.require(b.H_size(b.identity_component) == 1, "|H_id| != 1");
  o.require(find_isomorphism(b.K, semilattice_structure()).has_value(), "K not isomorphic to S");
  o.require(kernel_names(b) == std::vector<std::string>{"{x,meet(x,y)}", "{y}"}, "unexpected kernel");
  o.require(all_pass(verify_lemma22(b)), "collapse items fail");
  o.require(all_pass(verify_claims(b, 2)), "claims fail");
  o.summary = "|F|=3, |U|=1, |R|=10, |H_id|=1, K = S, kernel {x, x meet y},{y}; items and claims pass";
  return o;
}

Outcome free_empty() {
  Outcome o;
  const auto b = build_free_bundle(fixtures::empty_signature());
  o.require(find_isomorphism(b.Fstruct, semilattice_structure()).has_value(), "F not isomorphic to S");
  o.require(find_isomorphism(b.K, semilattice_structure()).has_value(), "K not isomorphic to S");
  o.require(all_pass(verify_lemma22(b)), "collapse items fail");
  o.require(all_pass(verify_claims(b, 2)), "claims fail");
  o.summary = "F = S, K = S, items and claims pass";
  return o;
}

Outcome free_lattice() {
  Outcome o;
  const auto b = build_free_bundle(fixtures::lattice());
  o.require(b.H_size(b.identity_component) == 0, "H_id not empty");
  o.require(b.K_members[b.identity_component].size() == 1, "K_id not a point");
  const auto r = verify_lemma22(b);
  o.require(r.checks.size() == 6 && all_pass(r, {"item3"}), "items 1,2,4,5,6 pass / item 3 refused not met");
  const auto* item3 = r.find("item3");
  o.require(item3 && item3->detail.find("hypothesis absent") != std::string::npos, "item 3 not hypothesis-absent");
  o.summary = "H_id empty, K_id a point, items 1,2,4,5,6 pass, item 3 hypothesis-absent";
  return o;
}

Outcome product_suite() {
  Outcome o;
  const auto suite = run_product_decomposition_suite(1, 200);
  o.require(suite.instances >= 200, "fewer than 200 instances");
  o.require(suite.failures == 0, std::to_string(suite.failures) + " failures: " + suite.first_failure);
  o.summary = std::to_string(suite.instances) + " instances, " + std::to_string(suite.homomorphisms) +
              " homomorphisms decomposed, 0 failures";
  return o;
}

Outcome identity_side() {
  Outcome o;
  auto load = [](const std::string& name) {
    return ident::parse(read_text_file(fixtures::data("systems/" + name)));
  };
  o.require(!ident::sl_interp_search(load("majority.txt")).satisfiable(), "majority satisfiable");
  o.require(!ident::sl_interp_search(load("maltsev.txt")).satisfiable(), "Maltsev satisfiable");
  const auto sl = ident::sl_interp_search(load("semilattice.txt"));
  o.require(sl.satisfiable() && sl.labeling->sigma.at("f") == std::vector<std::size_t>{1, 2},
            "semilattice labeling is not f={1,2}");
  o.require(ident::hm_term_check(load("majority.txt"), "t").pass, "majority fails the subset condition");
  o.require(ident::hm_term_check(load("maltsev.txt"), "p").pass, "Maltsev fails the subset condition");
  o.require(!ident::hm_term_check(load("semilattice.txt"), "f").pass, "semilattice passes the subset condition");
  std::size_t checked = 0;
  for (const auto& e : std::filesystem::directory_iterator(RELCALC_DATA_DIR "/systems")) {
    const auto sys = ident::parse(read_text_file(e.path()));
    const bool unsat = !ident::sl_interp_search(ident::saturate(ident::linear_fragment(sys))).satisfiable();
    for (const auto& [t, arity] : sys.declarations) {
      ident::HmCheckResult r;
      try {
        r = ident::hm_term_check(sys, t);
      } catch (const Error&) {
        continue;
      }
      if (!r.pass) continue;
      ++checked;
      o.require(unsat && ident::hm_witnesses_refute_all_labelings(sys, t, r),
                "pass without UNSAT in " + e.path().filename().string());
    }
  }
  o.summary = "UNSAT for majority/Maltsev, f={1,2} for semilattice; subset condition => UNSAT on " +
              std::to_string(checked) + " corpus terms";
  return o;
}

Outcome algebra_side() {
  Outcome o;
  const auto maj = fixtures::majority_algebra();
  const auto ev = hm_evidence(maj, 3);
  o.require(ev.kind == HmEvidence::Kind::CertifiedHM, "majority not certified");
  o.require(ev.log.size() == 7, "log does not have 7 entries");
  o.require(all_pass(replay_hm_evidence(maj, ev)), "replay fails");
  const auto sl = hm_evidence(fixtures::semilattice());
  o.require(sl.kind == HmEvidence::Kind::ConsistentLabelingFound && sl.labeling &&
                sl.labeling->sigma.at("meet") == std::vector<std::size_t>{1, 2},
            "semilattice survivor is not meet={1,2}");
  o.summary = "majority certified at m=3 with 7 replayable refutations; semilattice keeps meet={1,2}";
  return o;
}

Outcome engine_cross_validation() {
  Outcome o;
  std::vector<RelationalStructure> small;
  for (const auto& e : std::filesystem::directory_iterator(RELCALC_DATA_DIR "/structures")) {
    try {
      auto s = read_structure(e.path());
      if (s.size() <= 3) small.push_back(std::move(s));
    } catch (const InvalidStructure&) {
    }
  }
  std::size_t pairs = 0;
  for (const auto& g : small) {
    for (const auto& h : small) {
      if (g.signature() != h.signature()) continue;
      ++pairs;
      const auto expected = oracle::all_homs(g, h);
      o.require(find_homs(g, h) == expected && find_homs_serial(g, h) == expected, "engine disagrees");
    }
  }
  const auto s = semilattice_structure();
  for (std::size_t n = 1; n <= 3; ++n) {
    const auto tables = polymorphisms(s, n);
    const auto homs = find_homs(power(s, n), s);
    bool same = tables.size() == homs.size();
    for (std::size_t i = 0; same && i < homs.size(); ++i) same = tables[i].values() == homs[i];
    o.require(same, "polymorphisms differ from homomorphisms of the power at n=" + std::to_string(n));
  }
  o.summary = std::to_string(pairs) + " corpus pairs match brute force; polymorphisms(S,n) match for n<=3";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"polymorphism counts of S", polymorphism_counts},
      {"E0 golden", e0_golden},
      {"gadget component law", gadget_components},
      {"free pipeline, semilattice", free_semilattice},
      {"free pipeline, empty signature", free_empty},
      {"free pipeline, lattice", free_lattice},
      {"product decomposition suite", product_suite},
      {"identity-side HM tests", identity_side},
      {"algebra-side HM evidence", algebra_side},
      {"engine cross-validation", engine_cross_validation},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.problems.push_back(std::string("exception: ") + e.what());
    }
    const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    const bool ok = o.problems.empty();
    failed += !ok;
    std::printf("[%s] %2zu %s: %s (%.0f ms)\n", ok ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                ok ? o.summary.c_str() : o.problems.front().c_str(), ms);
  }
  return failed == 0 ? 0 : 1;
}
