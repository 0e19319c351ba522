#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include <nilsplit/cli.hpp>

#include "support.hpp"

using namespace nilsplit;
using Json = nlohmann::json;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

Json run_machine(std::vector<std::string> args, int expected_code = 0) {
  args.push_back("--format");
  args.push_back("machine");
  auto r = run_cli(args);
  EXPECT_EQ(r.code, expected_code) << r.err;
  return Json::parse(r.out);
}

std::string parse_error(const std::string& text) {
  try {
    parse_document(text);
  } catch (const ParseError& e) {
    return e.what();
  }
  return "";
}

class TempFile {
 public:
  explicit TempFile(const std::string& contents) {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("nilsplit-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++) + ".json");
    std::ofstream(path_) << contents;
  }
  ~TempFile() { std::filesystem::remove(path_); }
  std::string path() const { return path_.string(); }

 private:
  std::filesystem::path path_;
};

}  // namespace

TEST(Rational, StrictGrammar) {
  EXPECT_EQ(parse_rational("3"), 3);
  EXPECT_EQ(parse_rational("-1/2"), Rational(-1, 2));
  EXPECT_EQ(parse_rational("4/6"), Rational(2, 3));
  for (const char* bad : {"1/0", "", "+1", "1.5", " 1", "1/", "/2", "1/-2", "a", "1e3"})
    EXPECT_THROW(parse_rational(bad), ParseError) << bad;
}

TEST(Document, ParsesMinimal) {
  auto doc = parse_document(R"({"dim": 3, "brackets": [{"i": 1, "j": 2, "k": 3, "c": "-1/2"}]})");
  EXPECT_EQ(doc.spec.dim, 3);
  ASSERT_EQ(doc.spec.brackets.size(), 1u);
  EXPECT_EQ(doc.spec.brackets[0].c, Rational(-1, 2));
  EXPECT_FALSE(doc.omega);
}

TEST(Document, ErrorsNameTheField) {
  EXPECT_NE(parse_error(R"({"dim": 3, "brackets": [{"i": 1, "j": 2, "k": 3, "c": "1/0"}]})").find("brackets[0].c"),
            std::string::npos);
  EXPECT_NE(parse_error(R"({"dim": 3, "brackets": [{"i": 1, "j": 2, "k": 3, "c": 1}]})").find("expected a rational"),
            std::string::npos);
  EXPECT_NE(parse_error(R"({"dim": 3, "brackets": [], "extra": 1})").find("unknown field \"extra\""),
            std::string::npos);
  EXPECT_NE(parse_error(R"({"brackets": []})").find("missing field \"dim\""), std::string::npos);
  EXPECT_NE(parse_error(R"({"dim": 4, "brackets": [], "omega": [{"i": 2, "j": 1, "c": "1"}]})").find("omega[0]"),
            std::string::npos);
  EXPECT_NE(parse_error(R"({"dim": 3, "brackets": [{"i": 2, "j": 1, "k": 3, "c": "1"}]})").find("brackets"),
            std::string::npos);
}

TEST(Document, SyntaxErrorsReportLineAndColumn) {
  const auto msg = parse_error("{\n  \"dim\": 3,\n  \"brackets\": [,]\n}");
  EXPECT_NE(msg.find("line 3"), std::string::npos) << msg;
}

TEST(Document, CatalogRoundTripIsByteStable) {
  for (const auto& entry : catalog()) {
    const auto text = emit_document(entry.document);
    const auto back = parse_document(text);
    EXPECT_EQ(back, entry.document) << entry.document.spec.name;
    EXPECT_EQ(emit_document(back), text);
    EXPECT_EQ(document_digest(back), document_digest(entry.document));
  }
}

TEST(Document, DigestSeparatesDocuments) {
  std::set<std::string> digests;
  for (const auto& entry : catalog()) digests.insert(document_digest(entry.document));
  EXPECT_EQ(digests.size(), catalog().size());
  EXPECT_EQ(document_digest(catalog().front().document).size(), 16u);
}

TEST(Catalog, ContractAndValidity) {
  EXPECT_GE(catalog().size(), 7u);
  for (const auto& entry : catalog()) EXPECT_TRUE(validate(entry.document.spec).ok()) << entry.document.spec.name;
  int six_dim_symplectic = 0;
  for (const auto& entry : catalog())
    if (entry.document.spec.dim == 6 && !entry.document.spec.brackets.empty() && entry.document.omega)
      ++six_dim_symplectic;
  EXPECT_GE(six_dim_symplectic, 2);
}

TEST(Cli, ValidateExamples) {
  auto torus = run_machine({"validate", "torus4"});
  EXPECT_EQ(torus["validation"]["valid"], true);
  EXPECT_EQ(torus["validation"]["nilpotency_class"], 1);
  auto kt = run_machine({"validate", "kodaira-thurston"});
  EXPECT_EQ(kt["validation"]["nilpotency_class"], 2);
  EXPECT_EQ(kt["validation"]["lower_central_series"], Json::parse("[4, 1, 0]"));
  EXPECT_EQ(kt["tool"], "nilsplit");
  EXPECT_EQ(kt["input"]["name"], "kodaira-thurston");
}

TEST(Cli, ValidateInvalidAlgebraExitsTwo) {
  TempFile f(R"({"dim": 2, "brackets": [{"i": 1, "j": 2, "k": 1, "c": "1"}]})");
  auto report = run_machine({"validate", f.path()}, 2);
  EXPECT_EQ(report["validation"]["nilpotent"], false);
}

TEST(Cli, MalformedRationalExitsTwo) {
  TempFile f(R"({"dim": 3, "brackets": [{"i": 1, "j": 2, "k": 3, "c": "1/0"}]})");
  auto r = run_cli({"validate", f.path()});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("brackets[0].c"), std::string::npos) << r.err;
}

TEST(Cli, UnknownInputAndBadFlagsExitTwo) {
  EXPECT_EQ(run_cli({"validate", "no-such-thing"}).code, 2);
  EXPECT_EQ(run_cli({"validate", "catalog:nope"}).code, 2);
  EXPECT_EQ(run_cli({"validate", "torus2", "--format", "xml"}).code, 2);
  EXPECT_EQ(run_cli({"cohomology", "torus2", "--max-degree", "999"}).code, 2);
  EXPECT_EQ(run_cli({"csplit", "torus2", "--base", "s3"}).code, 2);
  EXPECT_EQ(run_cli({"csplit", "torus2", "--alpha", "1,0,0"}).code, 2);
  EXPECT_EQ(run_cli({"catalog", "--emit", "nope"}).code, 2);
  EXPECT_EQ(run_cli({}).code, 2);
}

TEST(Cli, CohomologyExamples) {
  auto torus = run_machine({"cohomology", "torus4"});
  EXPECT_EQ(torus["cohomology"]["betti"], Json::parse("[1, 4, 6, 4, 1]"));
  EXPECT_EQ(torus["cohomology"]["poincare_duality"], true);
  EXPECT_EQ(torus["cohomology"]["euler_characteristic"], 0);
  EXPECT_EQ(run_machine({"cohomology", "kodaira-thurston"})["cohomology"]["betti"], Json::parse("[1, 3, 4, 3, 1]"));
  EXPECT_EQ(run_machine({"cohomology", "heisenberg3"})["cohomology"]["betti"], Json::parse("[1, 2, 2, 1]"));
  EXPECT_EQ(run_machine({"cohomology", "heisenberg3", "--max-degree", "5"})["cohomology"]["betti"],
            Json::parse("[1, 2, 2, 1, 0, 0]"));
}

TEST(Cli, SymplecticExamples) {
  auto kt = run_machine({"symplectic", "kodaira-thurston"});
  EXPECT_EQ(kt["symplectic"]["outcome"], "found");
  EXPECT_EQ(kt["hard_lefschetz"]["holds"], false);
  EXPECT_EQ(kt["hard_lefschetz"]["steps"][1]["isomorphism"], false);
  auto torus = run_machine({"symplectic", "torus4"});
  EXPECT_EQ(torus["hard_lefschetz"]["holds"], true);
  auto h3 = run_machine({"symplectic", "heisenberg3"}, 3);
  EXPECT_EQ(h3["symplectic"]["outcome"], "none");
  EXPECT_EQ(run_machine({"symplectic", "heisenberg5-r"}, 3)["symplectic"]["outcome"], "none");
}

TEST(Cli, SymplecticFromFile) {
  auto kt = run_machine({"symplectic", "kodaira-thurston", "--omega-from-file"});
  EXPECT_EQ(kt["symplectic"]["source"], "document");
  EXPECT_EQ(kt["symplectic"]["certificate"]["symplectic"], true);
  TempFile bad(R"({"dim": 4, "brackets": [{"i": 1, "j": 2, "k": 3, "c": "1"}],
                   "omega": [{"i": 1, "j": 2, "c": "1"}, {"i": 3, "j": 4, "c": "1"}]})");
  auto r = run_machine({"symplectic", bad.path(), "--omega-from-file"}, 3);
  EXPECT_EQ(r["symplectic"]["certificate"]["closed"], false);
  EXPECT_EQ(run_cli({"symplectic", "heisenberg3", "--omega-from-file"}).code, 2);
}

TEST(Cli, CsplitSolveOnKodairaThurston) {
  auto r = run_machine({"csplit", "kodaira-thurston", "--base", "s2", "--alpha", "solve"});
  EXPECT_EQ(r["forcing"]["forced_zero"], true);
  EXPECT_EQ(r["forcing"]["solution_dim"], 0);
  EXPECT_EQ(r["csplit"]["c_splits"], true);
  EXPECT_EQ(r["csplit"]["ring_level"], true);
  EXPECT_EQ(r["csplit"]["total_betti"], Json::parse("[1, 3, 5, 6, 5, 3, 1]"));
}

TEST(Cli, CsplitTwistedTorus) {
  auto r = run_machine({"csplit", "torus2", "--base", "s2", "--alpha", "1,0"});
  EXPECT_EQ(r["model"]["d_squared_zero"], true);
  EXPECT_EQ(r["hamiltonian"]["hamiltonian"], false);
  EXPECT_EQ(r["hamiltonian"]["obstruction"], "a*x2");
  EXPECT_EQ(r["csplit"]["total_betti"], Json::parse("[1, 1, 0, 1, 1]"));
  EXPECT_EQ(r["csplit"]["c_splits"], false);
}

TEST(Cli, CsplitUntwistedTorus) {
  auto r = run_machine({"csplit", "torus2", "--base", "s2", "--alpha", "0,0"});
  EXPECT_EQ(r["hamiltonian"]["hamiltonian"], true);
  EXPECT_EQ(r["csplit"]["total_betti"], Json::parse("[1, 2, 2, 2, 1]"));
  EXPECT_EQ(r["csplit"]["c_splits"], true);
}

TEST(Cli, CsplitInvalidTwistExitsFour) {
  auto r = run_machine({"csplit", "kodaira-thurston", "--alpha", "1,0,0,0"}, 4);
  EXPECT_EQ(r["model"]["d_squared_zero"], false);
  EXPECT_EQ(r["model"]["witness_generator"], "x3");
  EXPECT_EQ(r["model"]["witness"], "-a*x2");
}

TEST(Cli, CsplitNonSymplecticExitsThree) {
  EXPECT_EQ(run_cli({"csplit", "heisenberg3"}).code, 3);
  EXPECT_EQ(run_cli({"csplit", "heisenberg5-r"}).code, 3);
}

TEST(Cli, CsplitFormalBase) {
  auto r = run_machine({"csplit", "filiform6", "--base", "formal:2", "--omega-from-file"});
  EXPECT_EQ(r["forcing"]["unknowns"], 12);
  EXPECT_EQ(r["forcing"]["forced_zero"], true);
  EXPECT_EQ(r["model"]["base"], "formal:2");
  auto explicit_alpha = run_machine({"csplit", "torus2", "--base", "formal:2", "--alpha", "0,1;0,0"});
  EXPECT_EQ(explicit_alpha["hamiltonian"]["a_coefficients"], Json::parse(R"(["-x1", "0"])"));
}

TEST(Cli, CatalogListAndEmit) {
  auto list = run_machine({"catalog", "--list"});
  EXPECT_GE(list.size(), 7u);
  auto torus = run_cli({"catalog", "--emit", "torus4"});
  ASSERT_EQ(torus.code, 0);
  auto doc = parse_document(torus.out);
  EXPECT_EQ(doc.spec.dim, 4);
  EXPECT_TRUE(doc.spec.brackets.empty());
  auto kt = Json::parse(run_cli({"catalog", "--emit", "kodaira-thurston"}).out);
  EXPECT_EQ(kt["dim"], 4);
  EXPECT_EQ(kt["brackets"], Json::parse(R"([{"i": 1, "j": 2, "k": 3, "c": "1"}])"));
  EXPECT_EQ(run_cli({"catalog", "--list"}).out.find("torus2"), 0u);
}

TEST(Cli, EmittedDocumentReingests) {
  const auto text = run_cli({"catalog", "--emit", "nil6-12-13-23"}).out;
  TempFile f(text);
  auto from_file = run_machine({"cohomology", f.path()});
  auto from_catalog = run_machine({"cohomology", "nil6-12-13-23"});
  EXPECT_EQ(from_file["input"]["digest"], from_catalog["input"]["digest"]);
  EXPECT_EQ(from_file["cohomology"], from_catalog["cohomology"]);
}

TEST(Cli, OutputIsByteStable) {
  for (const auto& format : {"human", "machine"}) {
    const std::vector<std::string> args{"csplit", "nil6-12-13", "--alpha", "solve", "--format", format};
    EXPECT_EQ(run_cli(args).out, run_cli(args).out);
  }
}

TEST(Cli, HumanFormat) {
  auto r = run_cli({"cohomology", "torus2"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("betti: (1, 2, 1)"), std::string::npos) << r.out;
}

TEST(Cli, SeedFlagAndEnvironment) {
  EXPECT_EQ(run_machine({"symplectic", "torus4"})["seed"], 1);
  EXPECT_EQ(run_machine({"symplectic", "torus4", "--seed", "9"})["seed"], 9);
  ::setenv("NILSPLIT_SEED", "42", 1);
  auto from_env = run_machine({"symplectic", "torus4"});
  auto flag_wins = run_machine({"symplectic", "torus4", "--seed", "3"});
  ::unsetenv("NILSPLIT_SEED");
  EXPECT_EQ(from_env["seed"], 42);
  EXPECT_EQ(flag_wins["seed"], 3);
}

TEST(Cli, VersionFlag) {
  auto r = run_cli({"--version"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find(cli::kVersion), std::string::npos);
}
