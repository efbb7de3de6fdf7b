#include "relcalc/cli.hpp"

#include <chrono>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "relcalc/freecons.hpp"
#include "relcalc/gadget.hpp"
#include "relcalc/identlang.hpp"
#include "relcalc/json_io.hpp"
#include "relcalc/semilat.hpp"

namespace relcalc {

namespace {

using nlohmann::json;

struct CliCheck {
  std::string name;
  Verdict verdict = Verdict::Pass;
  std::string detail;
  json witness;
};

struct RunReport {
  explicit RunReport(std::string cmd = {}) : command(std::move(cmd)) {}

  std::string command;
  std::vector<CliCheck> checks;
  std::optional<std::uint64_t> seed;
  /// Refusals that answer the question asked negatively (as opposed to an
  /// absent hypothesis) make the exit code 1.
  bool refusal_is_negative = false;

  void add(std::string name, bool ok, std::string detail = {}, json witness = nullptr) {
    checks.push_back({std::move(name), ok ? Verdict::Pass : Verdict::Fail, std::move(detail), std::move(witness)});
  }
  void refuse(std::string name, std::string detail, json witness = nullptr) {
    checks.push_back({std::move(name), Verdict::Refused, std::move(detail), std::move(witness)});
  }
  void add_all(const Report& r, const std::string& prefix) {
    for (const auto& c : r.checks) checks.push_back({prefix + c.name, c.verdict, c.detail, nullptr});
  }
  int exit_code() const {
    for (const auto& c : checks) {
      if (c.verdict == Verdict::Fail) return 1;
      if (c.verdict == Verdict::Refused && refusal_is_negative) return 1;
    }
    return 0;
  }
};

struct Globals {
  std::string output = "text";
  std::size_t limit = 0;
  std::optional<std::uint64_t> seed;
  std::size_t max_tuples = Limits{}.max_tuples;

  Limits limits() const { return Limits{max_tuples}; }
};

bool is_flat(const json& j) {
  return std::ranges::none_of(j, [](const json& e) { return e.is_structured(); });
}

// Like dump(2), but containers of scalars stay on one line.
void render(const json& j, std::size_t indent, std::string& out) {
  if (!j.is_structured() || is_flat(j)) {
    out += j.dump();
    return;
  }
  const std::string pad(indent + 2, ' ');
  const bool obj = j.is_object();
  out += obj ? "{\n" : "[\n";
  std::size_t i = 0;
  for (auto it = j.begin(); it != j.end(); ++it, ++i) {
    out += pad;
    if (obj) out += json(it.key()).dump() + ": ";
    render(*it, indent + 2, out);
    out += i + 1 < j.size() ? ",\n" : "\n";
  }
  out += std::string(indent, ' ') + (obj ? "}" : "]");
}

void emit(const RunReport& r, double ms, const Globals& g, std::ostream& out) {
  if (g.output == "json") {
    json checks = json::array();
    for (const auto& c : r.checks) {
      json entry = {{"name", c.name}, {"verdict", to_string(c.verdict)}, {"witness", c.witness}};
      if (!c.detail.empty()) entry["detail"] = c.detail;
      checks.push_back(std::move(entry));
    }
    json j = {{"command", r.command}, {"checks", checks}, {"timing", {{"ms", ms}}}};
    j["seed"] = r.seed ? json(*r.seed) : json(nullptr);
    out << j.dump(2) << "\n";
    return;
  }
  out << r.command << "\n";
  for (const auto& c : r.checks) {
    out << "  " << c.name << ": " << to_string(c.verdict);
    if (!c.detail.empty()) out << " (" << c.detail << ")";
    out << "\n";
    if (c.witness.is_null()) continue;
    std::string body;
    if (c.witness.is_string()) {
      body = c.witness.get<std::string>();
    } else {
      render(c.witness, 0, body);
    }
    std::size_t start = 0;
    while (start <= body.size()) {
      const std::size_t end = body.find('\n', start);
      out << "    " << body.substr(start, end - start) << "\n";
      if (end == std::string::npos) break;
      start = end + 1;
    }
  }
  if (r.seed) out << "  seed: " << *r.seed << "\n";
}

json labels_of(const RelationalStructure& s, std::span<const Element> ids) {
  json a = json::array();
  for (Element e : ids) a.push_back(s.label(e));
  return a;
}

json map_json(const RelationalStructure& source, const RelationalStructure& target, const ElementMap& m) {
  json j = json::object();
  for (Element x = 0; x < m.size(); ++x) j[source.label(x)] = target.label(m[x]);
  return j;
}

json partition_json(const RelationalStructure& s, const Partition& p) {
  json out = json::array();
  for (const auto& block : p) out.push_back(labels_of(s, block));
  return out;
}

json identity_json(const ident::Identity& i) { return ident::to_string(i); }

json labeling_json(const ident::SLLabeling& l) {
  json j = json::object();
  for (const auto& [symbol, subset] : l.sigma) j[symbol] = subset;
  return j;
}

ident::TermSystem read_system(const std::string& path) { return ident::parse(read_text_file(path)); }

// ---------------------------------------------------------------- commands

RunReport structure_validate(const std::string& file) {
  RunReport r{"structure validate"};
  const RawStructure raw = raw_structure_from_json(parse_json(read_text_file(file)));
  const ValidationResult v = validate(raw);
  r.add("valid", v.ok, v.error);
  return r;
}

RunReport structure_components(const std::string& file) {
  RunReport r{"structure components"};
  const RelationalStructure s = read_structure(file);
  const auto comps = connected_components(s);
  r.add("components", true, std::to_string(comps.blocks.size()) + " components", partition_json(s, comps.blocks));
  return r;
}

RunReport structure_combine(const std::string& what, const std::vector<std::string>& files, const Globals& g) {
  RunReport r{"structure " + what};
  std::vector<RelationalStructure> parts;
  for (const auto& f : files) parts.push_back(read_structure(f));
  const RelationalStructure s = what == "product" ? product(parts, g.limits()) : disjoint_union(parts);
  r.add(what, true, std::to_string(s.size()) + " elements", structure_to_json(s));
  return r;
}

RunReport structure_power(const std::string& file, std::size_t n, const Globals& g) {
  RunReport r{"structure power"};
  const RelationalStructure s = power(read_structure(file), n, g.limits());
  r.add("power", true, std::to_string(s.size()) + " elements", structure_to_json(s));
  return r;
}

RunReport structure_induced(const std::string& file, const std::vector<Element>& subset) {
  RunReport r{"structure induced"};
  const RelationalStructure base = read_structure(file);
  for (Element e : subset) {
    if (e >= base.size()) throw InvalidStructure("element " + std::to_string(e) + " out of range");
  }
  const RelationalStructure s = induced_substructure(base, subset);
  r.add("induced", true, std::to_string(s.size()) + " elements", structure_to_json(s));
  return r;
}

RunReport structure_iso(const std::string& a, const std::string& b) {
  RunReport r{"structure iso"};
  const RelationalStructure sa = read_structure(a), sb = read_structure(b);
  const auto iso = find_isomorphism(sa, sb);
  r.add("isomorphic", iso.has_value(), {}, iso ? map_json(sa, sb, *iso) : json(nullptr));
  return r;
}

RunReport hom_find(const std::string& a, const std::string& b, bool nonconstant, bool count_only, const Globals& g) {
  RunReport r{count_only ? "hom count" : "hom find"};
  const RelationalStructure sa = read_structure(a), sb = read_structure(b);
  SearchOptions opts;
  opts.limit = g.limit;
  opts.nonconstant_only = nonconstant;
  if (count_only) {
    const std::size_t n = count_homs(sa, sb, opts);
    r.add("count", true, std::to_string(n) + " homomorphisms", n);
    return r;
  }
  json maps = json::array();
  const auto homs = find_homs(sa, sb, opts);
  for (const auto& m : homs) maps.push_back(map_json(sa, sb, m));
  r.add("homomorphisms", true, std::to_string(homs.size()) + " found", maps);
  return r;
}

RunReport hom_retract(const std::string& a, const std::string& b) {
  RunReport r{"hom retract"};
  const RelationalStructure sa = read_structure(a), sb = read_structure(b);
  const auto ret = find_retraction(sa, sb);
  r.add("retract", ret.has_value(), {},
        ret ? json{{"retraction", map_json(sa, sb, ret->retraction)}, {"coretraction", map_json(sb, sa, ret->coretraction)}}
            : json(nullptr));
  return r;
}

RunReport hom_check(const std::string& a, const std::string& b, const std::vector<Element>& map) {
  RunReport r{"hom check"};
  const RelationalStructure sa = read_structure(a), sb = read_structure(b);
  if (map.size() != sa.size()) throw InvalidStructure("map must list one image per source element");
  for (Element e : map) {
    if (e >= sb.size()) throw InvalidStructure("map value " + std::to_string(e) + " out of range");
  }
  const HomCheck c = is_homomorphism(sa, sb, map);
  json w = nullptr;
  if (!c.ok) w = {{"relation", c.symbol}, {"tuple", labels_of(sa, c.tuple)}, {"image", labels_of(sb, c.image)}};
  r.add("homomorphism", c.ok, {}, w);
  return r;
}

RunReport pol_enumerate(const std::optional<std::string>& file, std::size_t arity, bool classify, const Globals& g) {
  RunReport r{"pol enumerate"};
  const RelationalStructure s = file ? read_structure(*file) : semilattice_structure();
  const auto pols = polymorphisms(s, arity, g.limits());
  json tables = json::array();
  for (const auto& t : pols) tables.push_back(t.values());
  r.add("polymorphisms", true, std::to_string(pols.size()) + " operations of arity " + std::to_string(arity), tables);
  if (classify) {
    if (s.size() != 2) throw InvalidStructure("classification needs a two-element structure");
    json labels = json::array();
    std::size_t refused = 0;
    for (const auto& t : pols) {
      const auto c = classify_meet_operation(t);
      refused += c.kind == MeetClassification::Kind::Refused;
      labels.push_back(to_string(c));
    }
    r.add("classification", refused == 0, std::to_string(refused) + " refusals", labels);
  }
  return r;
}

RunReport psl_check(const std::string& file) {
  RunReport r{"psl check"};
  r.refusal_is_negative = true;
  const RelationalStructure s = read_structure(file);
  const auto res = is_partial_semilattice(s);
  if (res.accepted()) {
    const bool verified = verify_witness(s, *res.witness);
    r.add("partial semilattice", verified, "ambient semilattice of " + std::to_string(res.witness->ambient.base_size()) +
                                               " elements",
          json{{"ambient", table_to_json(res.witness->ambient)}, {"embedding", res.witness->embedding}});
  } else {
    json w = nullptr;
    if (res.merged) w = labels_of(s, std::vector<Element>{res.merged->first, res.merged->second});
    r.refuse("partial semilattice", res.reason, w);
  }
  return r;
}

RunReport psl_largest(const std::string& file) {
  RunReport r{"psl largest"};
  r.refusal_is_negative = true;
  const RelationalStructure s = read_structure(file);
  if (const auto top = largest_element(s)) {
    r.add("largest", true, {}, s.label(*top));
  } else {
    r.refuse("largest", "no largest element");
  }
  return r;
}

RunReport psl_meet(const std::string& file, const std::vector<Element>& elements) {
  RunReport r{"psl meet"};
  r.refusal_is_negative = true;
  const RelationalStructure s = read_structure(file);
  for (Element e : elements) {
    if (e >= s.size()) throw InvalidStructure("element " + std::to_string(e) + " out of range");
  }
  if (const auto m = iterated_meet(s, elements)) {
    r.add("meet", true, {}, s.label(*m));
  } else {
    r.refuse("meet", "meet undefined");
  }
  return r;
}

RunReport psl_decompose(const std::vector<std::string>& factor_files, const std::optional<std::string>& target_file,
                        const std::vector<Element>& map, const Globals& g) {
  RunReport r{"psl decompose"};
  std::vector<RelationalStructure> factors;
  for (const auto& f : factor_files) factors.push_back(read_structure(f));
  const RelationalStructure target = target_file ? read_structure(*target_file) : semilattice_structure();
  const RelationalStructure prod = product(factors, g.limits());
  if (map.size() != prod.size()) throw InvalidStructure("map must list one image per product element");
  for (Element e : map) {
    if (e >= target.size()) throw InvalidStructure("map value " + std::to_string(e) + " out of range");
  }
  try {
    const auto d = decompose_product_hom(factors, target, map);
    if (d.constant) {
      r.add("decomposition", true, "constant", target.label(*d.constant));
    } else {
      json parts = json::array();
      for (std::size_t i = 0; i < d.unary.size(); ++i) parts.push_back(map_json(factors[i], target, d.unary[i]));
      r.add("decomposition", true, "meet of " + std::to_string(d.unary.size()) + " unary maps", parts);
    }
  } catch (const VerificationFailure& e) {
    r.add("decomposition", false, e.what());
  }
  return r;
}

RunReport psl_random_suite(std::uint64_t seed, std::size_t count) {
  RunReport r{"psl random-suite"};
  r.seed = seed;
  const auto s = run_product_decomposition_suite(seed, count);
  r.add("product decomposition", s.failures == 0,
        std::to_string(s.instances) + " instances, " + std::to_string(s.homomorphisms) + " homomorphisms, " +
            std::to_string(s.failures) + " failures",
        s.first_failure.empty() ? json(nullptr) : json(s.first_failure));
  return r;
}

RunReport free_build(const std::string& file, bool lemma22, std::optional<std::size_t> claims,
                     const std::optional<std::string>& export_dir, const Globals& g) {
  RunReport r{"free build"};
  const FiniteAlgebra a = read_algebra(file);
  const FreeBundle b = build_free_bundle(a, g.limits());
  r.add("bundle", true,
        "|F| = " + std::to_string(b.F().size()) + ", |U| = " + std::to_string(b.unary.size()) + ", |K| = " +
            std::to_string(b.K.size()),
        bundle_manifest(b));
  r.add_all(verify_lemma21(b), "lemma21.");
  if (lemma22) r.add_all(verify_lemma22(b, g.limits()), "lemma22.");
  if (claims) r.add_all(verify_claims(b, *claims, g.limits()), "claims.");
  if (export_dir) {
    export_bundle(b, *export_dir);
    r.add("export", true, *export_dir);
  }
  return r;
}

RunReport gadget_apply(const std::string& file) {
  RunReport r{"gadget apply"};
  r.add("Y self-test", y_reconstruction_self_test());
  const RelationalStructure e = gadget_transform(read_structure(file));
  r.add("transform", true,
        std::to_string(e.size()) + " elements, " + std::to_string(e.only_relation().size()) + " triples",
        structure_to_json(e));
  return r;
}

json profile_json(const PowerProfile& p) {
  json m = json::object();
  for (const auto& [k, count] : p.multiplicity) m["S^" + std::to_string(k)] = count;
  if (p.unmatched) m["unmatched"] = p.unmatched;
  return m;
}

RunReport gadget_analyze(const std::string& file, std::optional<std::size_t> diagonal) {
  RunReport r{"gadget analyze"};
  r.add("Y self-test", y_reconstruction_self_test());
  const GadgetAnalysis a = analyze_gadget_components(read_structure(file));
  r.add("input", a.input.all_matched(), "components of the input", profile_json(a.input));
  r.add("output", a.output.all_matched(), "components of the transform", profile_json(a.output));
  if (diagonal) {
    const std::vector<RelationalStructure> factors = {a.transformed,
                                                      diagonal_structure(*diagonal, a.transformed.only_symbol())};
    const PowerProfile p = power_profile(product(factors));
    r.add("diagonal product", p.all_matched(), "components after the product with the diagonal structure",
          profile_json(p));
  }
  return r;
}

RunReport ident_parse(const std::string& file) {
  RunReport r{"ident parse"};
  const auto sys = read_system(file);
  r.add("parse", true, std::to_string(sys.identities.size()) + " identities", ident::print(sys));
  return r;
}

RunReport ident_linear(const std::string& file) {
  RunReport r{"ident linear"};
  const auto sys = read_system(file);
  json linear = json::array(), other = json::array();
  for (const auto& id : sys.identities) (ident::is_linear(id) ? linear : other).push_back(identity_json(id));
  r.add("linear", other.empty(), std::to_string(other.size()) + " non-linear identities",
        json{{"linear", linear}, {"nonlinear", other}});
  return r;
}

RunReport ident_saturate(const std::string& file) {
  RunReport r{"ident saturate"};
  const auto sys = read_system(file);
  const auto fragment = ident::linear_fragment(sys);
  const auto sat = ident::saturate(fragment);
  r.add("saturate", true,
        std::to_string(sat.identities.size()) + " identities; " +
            std::to_string(sys.identities.size() - fragment.identities.size()) +
            " outside the two-variable linear fragment ignored",
        ident::print(sat));
  return r;
}

RunReport ident_hm_check(const std::string& file, const std::string& term) {
  RunReport r{"ident hm-check"};
  const auto sys = read_system(file);
  const auto res = ident::hm_term_check(sys, term);
  json w = json::object();
  for (const auto& [subset, id] : res.witnesses) {
    std::string key = "{";
    for (std::size_t i = 0; i < subset.size(); ++i) key += (i ? "," : "") + std::to_string(subset[i]);
    w[key + "}"] = identity_json(id);
  }
  std::string detail;
  if (res.missing) {
    detail = "no identity for I = {";
    for (std::size_t i = 0; i < res.missing->size(); ++i) detail += (i ? "," : "") + std::to_string((*res.missing)[i]);
    detail += "}";
  }
  r.add("subset condition", res.pass, detail, w);
  if (res.pass) {
    r.add("witnesses refute every labeling", ident::hm_witnesses_refute_all_labelings(sys, term, res));
  }
  return r;
}

RunReport ident_sl_interp(const std::string& file) {
  RunReport r{"ident sl-interp"};
  const auto sys = read_system(file);
  const auto res = ident::sl_interp_search(sys);
  if (res.satisfiable()) {
    r.add("interpretation", true, "labeling found", labeling_json(*res.labeling));
  } else {
    json refs = json::array();
    for (const auto& ref : res.refutations) {
      refs.push_back({{"labeling", labeling_json(ref.labeling)}, {"violated", identity_json(ref.violated)}});
    }
    std::string detail = "UNSAT, " + std::to_string(res.refutations.size()) + " refutations";
    if (!res.note.empty()) detail += "; " + res.note;
    r.add("interpretation", false, detail, refs);
  }
  return r;
}

RunReport alg_hm_evidence(const std::string& file, std::optional<std::size_t> m, const Globals& g) {
  RunReport r{"alg hm-evidence"};
  const FiniteAlgebra a = read_algebra(file);
  const HmEvidence ev = hm_evidence(a, m, true, g.limits());
  if (ev.kind == HmEvidence::Kind::CertifiedHM) {
    json log = json::array();
    for (const auto& e : ev.log) {
      log.push_back({{"labeling", labeling_json(e.labeling)},
                     {"generators", e.arity},
                     {"identity", identity_json(e.identity)}});
    }
    r.add("certified", true, "all " + std::to_string(ev.labelings) + " labelings refuted up to arity " +
                                 std::to_string(ev.m), log);
    r.add_all(replay_hm_evidence(a, ev), "replay: ");
  } else {
    r.add("certified", false,
          "consistent labeling survives every identity up to arity " + std::to_string(ev.m) +
              " (bounded evidence only)",
          labeling_json(*ev.labeling));
  }
  return r;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Finite relational structures, partial semilattices and free constructions", "relcalc"};
  app.require_subcommand(1);
  Globals g;
  std::uint64_t seed_value = 0;
  app.add_option("--output", g.output, "Report format")->check(CLI::IsMember({"text", "json"}));
  app.add_option("--limit", g.limit, "Maximum number of results (0 = all)");
  auto* seed_opt = app.add_option("--seed", seed_value, "Seed for randomized suites");
  app.add_option("--max-tuples", g.max_tuples, "Size bound for constructed objects");

  auto sub = [](CLI::App* parent, const std::string& name, const std::string& desc) {
    auto* s = parent->add_subcommand(name, desc);
    s->fallthrough();
    return s;
  };

  std::string file, file2, term, system_file, algebra_file;
  std::vector<std::string> files;
  std::optional<std::string> opt_file, export_dir;
  std::size_t n = 1, count = 200;
  std::vector<Element> elements;
  bool nonconstant = false, classify = false, lemma22 = false;
  std::optional<std::size_t> claims, max_arity, diagonal;

  auto* structure = sub(&app, "structure", "Relational structures");
  structure->require_subcommand(1);
  auto* s_validate = sub(structure, "validate", "Check the structural invariants of a file");
  s_validate->add_option("file", file)->required();
  auto* s_components = sub(structure, "components", "Connected components");
  s_components->add_option("file", file)->required();
  auto* s_product = sub(structure, "product", "Direct product");
  s_product->add_option("files", files)->required();
  auto* s_power = sub(structure, "power", "Direct power");
  s_power->add_option("file", file)->required();
  s_power->add_option("--n", n, "Exponent")->required();
  auto* s_union = sub(structure, "union", "Disjoint union");
  s_union->add_option("files", files)->required();
  auto* s_induced = sub(structure, "induced", "Induced substructure");
  s_induced->add_option("file", file)->required();
  s_induced->add_option("--elements", elements, "Element ids")->delimiter(',')->required();
  auto* s_iso = sub(structure, "iso", "Isomorphism search");
  s_iso->add_option("a", file)->required();
  s_iso->add_option("b", file2)->required();

  auto* hom = sub(&app, "hom", "Homomorphisms");
  hom->require_subcommand(1);
  auto* h_find = sub(hom, "find", "Enumerate homomorphisms");
  auto* h_count = sub(hom, "count", "Count homomorphisms");
  for (auto* c : {h_find, h_count}) {
    c->add_option("source", file)->required();
    c->add_option("target", file2)->required();
    c->add_flag("--nonconstant", nonconstant, "Only nonconstant maps");
  }
  auto* h_retract = sub(hom, "retract", "Find a retraction onto the target");
  h_retract->add_option("source", file)->required();
  h_retract->add_option("target", file2)->required();
  auto* h_check = sub(hom, "check", "Check a map");
  h_check->add_option("source", file)->required();
  h_check->add_option("target", file2)->required();
  h_check->add_option("--map", elements, "Target ids, one per source element")->delimiter(',')->required();

  auto* pol = sub(&app, "pol", "Polymorphisms");
  pol->require_subcommand(1);
  auto* p_enum = sub(pol, "enumerate", "Enumerate polymorphisms (default structure: the two-element semilattice)");
  p_enum->add_option("structure", opt_file);
  p_enum->add_option("--arity", n, "Arity")->required();
  p_enum->add_flag("--classify", classify, "Classify as constant or meet");

  auto* psl = sub(&app, "psl", "Partial semilattices");
  psl->require_subcommand(1);
  auto* ps_check = sub(psl, "check", "Decide partial semilattice");
  ps_check->add_option("file", file)->required();
  auto* ps_largest = sub(psl, "largest", "Largest element");
  ps_largest->add_option("file", file)->required();
  auto* ps_meet = sub(psl, "meet", "Left-associated meet of elements");
  ps_meet->add_option("file", file)->required();
  ps_meet->add_option("--elements", elements, "Element ids")->delimiter(',')->required();
  auto* ps_decompose = sub(psl, "decompose", "Decompose a homomorphism from a product");
  ps_decompose->add_option("--factors", files, "Factor structures")->required();
  ps_decompose->add_option("--target", opt_file, "Target (default: the two-element semilattice)");
  ps_decompose->add_option("--map", elements, "Target ids in product order")->delimiter(',')->required();
  auto* ps_suite = sub(psl, "random-suite", "Seeded product decomposition suite");
  ps_suite->add_option("--count", count, "Number of random instances");

  auto* free = sub(&app, "free", "Free constructions");
  free->require_subcommand(1);
  auto* f_build = sub(free, "build", "Build the free structure and its collapse");
  f_build->add_option("--algebra", algebra_file)->required();
  f_build->add_flag("--verify-lemma22", lemma22, "Check the collapse items");
  f_build->add_option("--verify-claims", claims, "Check the claims with polymorphisms of this arity");
  f_build->add_option("--export", export_dir, "Write structure files and a manifest here");

  auto* gadget = sub(&app, "gadget", "The Y-gadget transform");
  gadget->require_subcommand(1);
  auto* g_apply = sub(gadget, "apply", "Transform a structure");
  g_apply->add_option("--input", file)->required();
  auto* g_analyze = sub(gadget, "analyze", "Match components of the transform to powers");
  g_analyze->add_option("--input", file)->required();
  g_analyze->add_option("--diagonal", diagonal, "Also multiply by the diagonal structure of this size");

  auto* identc = sub(&app, "ident", "Identity systems");
  identc->require_subcommand(1);
  auto* i_parse = sub(identc, "parse", "Parse and print");
  auto* i_linear = sub(identc, "linear", "Report linear identities");
  auto* i_saturate = sub(identc, "saturate", "Saturate the linear two-variable fragment");
  auto* i_hm = sub(identc, "hm-check", "Subset condition for a term");
  i_hm->add_option("--term", term)->required();
  auto* i_sl = sub(identc, "sl-interp", "Search semilattice interpretations");
  for (auto* c : {i_parse, i_linear, i_saturate, i_hm, i_sl}) c->add_option("--system", system_file)->required();

  auto* alg = sub(&app, "alg", "Finite algebras");
  alg->require_subcommand(1);
  auto* a_hm = sub(alg, "hm-evidence", "Bounded search for a certificate against semilattice interpretations");
  a_hm->add_option("--algebra", algebra_file)->required();
  a_hm->add_option("--max-arity", max_arity, "Largest number of generators");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }
  if (*seed_opt) g.seed = seed_value;

  const auto started = std::chrono::steady_clock::now();
  RunReport report;
  try {
    if (*s_validate) report = structure_validate(file);
    else if (*s_components) report = structure_components(file);
    else if (*s_product) report = structure_combine("product", files, g);
    else if (*s_union) report = structure_combine("union", files, g);
    else if (*s_power) report = structure_power(file, n, g);
    else if (*s_induced) report = structure_induced(file, elements);
    else if (*s_iso) report = structure_iso(file, file2);
    else if (*h_find) report = hom_find(file, file2, nonconstant, false, g);
    else if (*h_count) report = hom_find(file, file2, nonconstant, true, g);
    else if (*h_retract) report = hom_retract(file, file2);
    else if (*h_check) report = hom_check(file, file2, elements);
    else if (*p_enum) report = pol_enumerate(opt_file, n, classify, g);
    else if (*ps_check) report = psl_check(file);
    else if (*ps_largest) report = psl_largest(file);
    else if (*ps_meet) report = psl_meet(file, elements);
    else if (*ps_decompose) report = psl_decompose(files, opt_file, elements, g);
    else if (*ps_suite) report = psl_random_suite(g.seed.value_or(1), count);
    else if (*f_build) report = free_build(algebra_file, lemma22, claims, export_dir, g);
    else if (*g_apply) report = gadget_apply(file);
    else if (*g_analyze) report = gadget_analyze(file, diagonal);
    else if (*i_parse) report = ident_parse(system_file);
    else if (*i_linear) report = ident_linear(system_file);
    else if (*i_saturate) report = ident_saturate(system_file);
    else if (*i_hm) report = ident_hm_check(system_file, term);
    else if (*i_sl) report = ident_sl_interp(system_file);
    else if (*a_hm) report = alg_hm_evidence(algebra_file, max_arity, g);
    else {
      err << app.help();
      return 2;
    }
  } catch (const VerificationFailure& e) {
    err << "verification failed: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  if (g.seed && !report.seed) report.seed = g.seed;
  const double ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
  emit(report, ms, g, out);
  return report.exit_code();
}

}  // namespace relcalc
