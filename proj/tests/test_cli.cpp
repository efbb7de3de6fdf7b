#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "fixtures.hpp"
#include "relcalc/cli.hpp"
#include "relcalc/freecons.hpp"
#include "relcalc/gadget.hpp"
#include "relcalc/identlang.hpp"
#include "relcalc/json_io.hpp"
#include "relcalc/semilat.hpp"

using namespace relcalc;
using nlohmann::json;

namespace {

struct Run {
  int code = 0;
  std::string out;
  std::string err;
  json report() const { return json::parse(out); }
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "relcalc");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Run r;
  r.code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

Run run_json(std::vector<std::string> args) {
  args.push_back("--output");
  args.push_back("json");
  return run(std::move(args));
}

std::string data(const std::string& rel) { return fixtures::data(rel); }

json check(const json& report, const std::string& name) {
  for (const auto& c : report.at("checks")) {
    if (c.at("name") == name) return c;
  }
  throw std::runtime_error("no check " + name);
}

}  // namespace

TEST(Cli, PolEnumerateOnS) {
  for (std::size_t n = 1; n <= 3; ++n) {
    const auto r = run_json({"pol", "enumerate", data("structures/S.json"), "--arity", std::to_string(n), "--classify"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = r.report();
    const auto tables = check(j, "polymorphisms").at("witness");
    const auto expected = polymorphisms(semilattice_structure(), n);
    ASSERT_EQ(tables.size(), expected.size());
    for (std::size_t i = 0; i < expected.size(); ++i) {
      EXPECT_EQ(tables[i].get<std::vector<Element>>(), expected[i].values());
      EXPECT_EQ(check(j, "classification").at("witness")[i], to_string(classify_meet_operation(expected[i])));
    }
  }
}

TEST(Cli, GadgetApplyMatchesLibrary) {
  const auto r = run_json({"gadget", "apply", "--input", data("structures/S.json")});
  ASSERT_EQ(r.code, 0);
  const auto w = check(r.report(), "transform").at("witness");
  EXPECT_EQ(structure_from_json(w), gadget_transform(semilattice_structure()));
}

TEST(Cli, SlInterpMajorityIsUnsat) {
  const auto r = run_json({"ident", "sl-interp", "--system", data("systems/majority.txt")});
  EXPECT_EQ(r.code, 1);
  const auto c = check(r.report(), "interpretation");
  EXPECT_EQ(c.at("verdict"), "fail");
  EXPECT_EQ(c.at("witness").size(), 7u);
  const auto lib = ident::sl_interp_search(ident::parse(read_text_file(data("systems/majority.txt"))));
  for (std::size_t i = 0; i < lib.refutations.size(); ++i) {
    EXPECT_EQ(c.at("witness")[i].at("violated"), ident::to_string(lib.refutations[i].violated));
  }
  const auto text = run({"ident", "sl-interp", "--system", data("systems/majority.txt")});
  EXPECT_NE(text.out.find("UNSAT"), std::string::npos);
}

TEST(Cli, SlInterpSemilatticeFindsLabeling) {
  const auto r = run_json({"ident", "sl-interp", "--system", data("systems/semilattice.txt")});
  EXPECT_EQ(r.code, 0);
}

TEST(Cli, HmCheckVerdicts) {
  EXPECT_EQ(run({"ident", "hm-check", "--system", data("systems/majority.txt"), "--term", "t"}).code, 0);
  EXPECT_EQ(run({"ident", "hm-check", "--system", data("systems/maltsev.txt"), "--term", "p"}).code, 0);
  EXPECT_EQ(run({"ident", "hm-check", "--system", data("systems/semilattice.txt"), "--term", "f"}).code, 1);
  EXPECT_EQ(run({"ident", "hm-check", "--system", data("systems/majority.txt"), "--term", "q"}).code, 2);
}

TEST(Cli, IdentParseAndSaturate) {
  EXPECT_EQ(run({"ident", "parse", "--system", data("systems/majority.txt")}).code, 0);
  EXPECT_EQ(run({"ident", "linear", "--system", data("systems/majority.txt")}).code, 0);
  // associativity is nested
  EXPECT_EQ(run({"ident", "linear", "--system", data("systems/semilattice.txt")}).code, 1);
  EXPECT_EQ(run({"ident", "saturate", "--system", data("systems/majority.txt")}).code, 0);
  const auto sat = run_json({"ident", "saturate", "--system", data("systems/semilattice.txt")});
  EXPECT_EQ(sat.code, 0);
  EXPECT_NE(check(sat.report(), "saturate").at("detail").get<std::string>().find("ignored"), std::string::npos);
  EXPECT_EQ(run({"ident", "parse", "--system", data("structures/S.json")}).code, 2);
}

TEST(Cli, HomCommands) {
  const auto found = run_json({"hom", "find", data("structures/S.json"), data("structures/S.json")});
  EXPECT_EQ(found.code, 0);
  EXPECT_EQ(check(found.report(), "homomorphisms").at("witness").size(), 3u);
  EXPECT_EQ(run({"hom", "count", data("structures/S.json"), data("structures/S.json"), "--nonconstant"}).code, 0);
  EXPECT_EQ(run({"hom", "check", data("structures/S.json"), data("structures/S.json"), "--map", "0,1"}).code, 0);
  EXPECT_EQ(run({"hom", "check", data("structures/S.json"), data("structures/S.json"), "--map", "1,0"}).code, 1);
  EXPECT_EQ(run({"hom", "retract", data("structures/S_plus_I.json"), data("structures/S.json")}).code, 0);
  EXPECT_EQ(run({"hom", "retract", data("structures/I.json"), data("structures/S.json")}).code, 1);
}

TEST(Cli, StructureCommands) {
  EXPECT_EQ(run({"structure", "validate", data("structures/S.json")}).code, 0);
  const auto bad = run({"structure", "validate", data("structures/bad_id.json")});
  EXPECT_EQ(bad.code, 1);
  EXPECT_NE(bad.out.find("(0,2,0)"), std::string::npos) << bad.out;
  EXPECT_EQ(run({"structure", "components", data("structures/S_plus_I.json")}).code, 0);
  EXPECT_EQ(run({"structure", "power", data("structures/S.json"), "--n", "2"}).code, 0);
  EXPECT_EQ(run({"structure", "product", data("structures/S.json"), data("structures/I.json")}).code, 0);
  EXPECT_EQ(run({"structure", "union", data("structures/S.json"), data("structures/I.json")}).code, 0);
  EXPECT_EQ(run({"structure", "induced", data("structures/S_plus_I.json"), "--elements", "0,1"}).code, 0);
  EXPECT_EQ(run({"structure", "iso", data("structures/E0.json"), data("structures/S_plus_I.json")}).code, 0);
  EXPECT_EQ(run({"structure", "iso", data("structures/S.json"), data("structures/I.json")}).code, 1);
}

TEST(Cli, PowerSizeBound) {
  EXPECT_EQ(run({"structure", "power", data("structures/S.json"), "--n", "30", "--max-tuples", "1000"}).code, 2);
}

TEST(Cli, PslCommands) {
  EXPECT_EQ(run({"psl", "check", data("structures/S.json")}).code, 0);
  EXPECT_EQ(run({"psl", "check", data("structures/not_psl.json")}).code, 1);
  EXPECT_EQ(run({"psl", "largest", data("structures/S.json")}).code, 0);
  EXPECT_EQ(run({"psl", "meet", data("structures/S.json"), "--elements", "1,0,1"}).code, 0);
  EXPECT_EQ(run({"psl", "decompose", "--factors", data("structures/S.json"), data("structures/S.json"), "--map",
                 "0,0,0,1"})
                .code,
            0);
  EXPECT_EQ(run({"psl", "decompose", "--factors", data("structures/S.json"), data("structures/S.json"), "--map",
                 "0,1,1,1"})
                .code,
            1);
}

TEST(Cli, RandomSuiteEchoesSeed) {
  const auto r = run_json({"psl", "random-suite", "--count", "30", "--seed", "99"});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.report().at("seed"), 99);
  const auto lib = run_product_decomposition_suite(99, 30);
  EXPECT_NE(check(r.report(), "product decomposition").at("detail").get<std::string>().find(
                std::to_string(lib.homomorphisms) + " homomorphisms"),
            std::string::npos);
}

TEST(Cli, FreeBuild) {
  const auto r = run_json({"free", "build", "--algebra", data("algebras/semilattice.json"), "--verify-lemma22",
                           "--verify-claims", "2"});
  ASSERT_EQ(r.code, 0) << r.out;
  const auto j = r.report();
  for (const auto& c : j.at("checks")) EXPECT_EQ(c.at("verdict"), "pass") << c.at("name");
  const auto lattice = run_json({"free", "build", "--algebra", data("algebras/lattice.json"), "--verify-lemma22"});
  EXPECT_EQ(lattice.code, 0);
  EXPECT_EQ(check(lattice.report(), "lemma22.item3").at("verdict"), "refused");
}

TEST(Cli, FreeBuildExport) {
  const auto dir = std::filesystem::temp_directory_path() / "relcalc_cli_export";
  std::filesystem::remove_all(dir);
  ASSERT_EQ(run({"free", "build", "--algebra", data("algebras/semilattice.json"), "--export", dir.string()}).code, 0);
  const auto k = read_structure(dir / "K.json");
  EXPECT_TRUE(find_isomorphism(k, semilattice_structure()).has_value());
  const auto manifest = parse_json(read_text_file(dir / "manifest.json"));
  EXPECT_EQ(manifest.at("F_size"), 3);
  EXPECT_EQ(manifest, bundle_manifest(build_free_bundle(fixtures::semilattice())));
  std::filesystem::remove_all(dir);
}

TEST(Cli, HmEvidence) {
  const auto r = run_json({"alg", "hm-evidence", "--algebra", data("algebras/majority.json"), "--max-arity", "3"});
  EXPECT_EQ(r.code, 0) << r.out;
  const auto s = run_json({"alg", "hm-evidence", "--algebra", data("algebras/semilattice.json")});
  EXPECT_EQ(s.code, 1);
  EXPECT_EQ(check(s.report(), "certified").at("witness"), (json{{"meet", {1, 2}}}));
  EXPECT_EQ(run({"alg", "hm-evidence", "--algebra", data("algebras/negation.json")}).code, 2);
}

TEST(Cli, GadgetAnalyze) {
  const auto dir = std::filesystem::temp_directory_path() / "relcalc_cli_s2.json";
  std::ofstream(dir) << structure_to_json(power(semilattice_structure(), 2)).dump();
  const auto r = run_json({"gadget", "analyze", "--input", dir.string(), "--diagonal", "2"});
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_EQ(run({"gadget", "analyze", "--input", data("structures/chain3.json")}).code, 2);
  std::filesystem::remove(dir);
}

TEST(Cli, UsageErrors) {
  const auto unknown = run({"frobnicate"});
  EXPECT_EQ(unknown.code, 2);
  EXPECT_FALSE(unknown.err.empty());
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"pol", "enumerate"}).code, 2);
  EXPECT_EQ(run({"hom", "find", data("structures/S.json"), "/nonexistent.json"}).code, 2);
  EXPECT_EQ(run({"structure", "validate", data("structures/S.json"), "--output", "xml"}).code, 2);
}

TEST(Cli, JsonIsDeterministicModuloTiming) {
  const std::vector<std::vector<std::string>> commands = {
      {"pol", "enumerate", data("structures/S.json"), "--arity", "3", "--classify"},
      {"free", "build", "--algebra", data("algebras/lattice.json"), "--verify-lemma22", "--verify-claims", "2"},
      {"ident", "sl-interp", "--system", data("systems/majority.txt")},
      {"alg", "hm-evidence", "--algebra", data("algebras/majority.json")},
      {"psl", "random-suite", "--count", "10", "--seed", "5"},
  };
  for (const auto& cmd : commands) {
    auto a = run_json(cmd).report();
    auto b = run_json(cmd).report();
    ASSERT_TRUE(a.contains("timing"));
    a.erase("timing");
    b.erase("timing");
    EXPECT_EQ(a.dump(), b.dump()) << cmd[0] << " " << cmd[1];
    EXPECT_TRUE(a.contains("command") && a.contains("checks") && a.contains("seed"));
  }
}

TEST(Cli, ExternalBinaryRuns) {
  const std::string cmd = std::string(RELCALC_CLI_PATH) + " pol enumerate " + data("structures/S.json") +
                          " --arity 3 --classify > /dev/null";
  EXPECT_EQ(std::system(cmd.c_str()), 0);
  const std::string bad = std::string(RELCALC_CLI_PATH) + " nope > /dev/null 2>&1";
  EXPECT_EQ(WEXITSTATUS(std::system(bad.c_str())), 2);
}
