#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "schutzkit/cli.hpp"
#include "support.hpp"

using namespace schutzkit;

namespace {

struct CliRun {
  int code;
  std::string out, err;
};

CliRun run(std::vector<std::string> args) {
  args.insert(args.begin(), "schutzkit");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string corpus(const std::string& name) { return (schutzkit::testing::corpus_dir() / (name + ".json")).string(); }

std::string temp_file(const std::string& name, const std::string& text) {
  const auto path = std::filesystem::temp_directory_path() / ("schutzkit_test_" + name);
  std::ofstream(path) << text;
  return path.string();
}

}  // namespace

TEST(Cli, SchutzenbergerReportsCarrierSizes) {
  const CliRun r = run({"schutzenberger", "--left", corpus("set_z2"), "--right", corpus("set_z2")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["size"], 64);
  EXPECT_EQ(j["middle_size"], 16);
  EXPECT_EQ(j["valid"], true);
}

TEST(Cli, SchutzenbergerExportParsesBack) {
  const CliRun r = run({"schutzenberger", "--left", corpus("set_trivial"), "--right", corpus("set_z2"), "--export"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  const DMonoid m = parse_monoid_spec(j["monoid"].dump());
  EXPECT_EQ(m.size(), 1u * 4u * 2u);
  EXPECT_TRUE(m.find("(1,00,1)").has_value());
}

TEST(Cli, ReutenauerOnTrivialPasses) {
  const CliRun r = run({"verify", "reutenauer", "--left", corpus("set_trivial"), "--right", corpus("set_trivial")});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("\"verdict\": \"pass\""), std::string::npos);
}

TEST(Cli, StarVarietyMismatchExitsTwo) {
  const CliRun r = run({"star", "--left", corpus("set_z2"), "--right", corpus("jsl_boolean")});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("variety mismatch"), std::string::npos);
}

TEST(Cli, InputErrorsExitTwo) {
  EXPECT_EQ(run({"star", "--left", "/nonexistent.json", "--right", corpus("set_z2")}).code, 2);
  EXPECT_EQ(run({"verify", "nonsense", "--left", corpus("set_z2"), "--right", corpus("set_z2")}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  const std::string bad = temp_file("bad_modulus.json",
                                    R"({"variety":"vect","field_modulus":4,"dimension":1,)"
                                    R"("structure_constants":[[[1]]],"unit":[1]})");
  const CliRun r = run({"validate", "--left", bad});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("modulus must be prime"), std::string::npos);
}

TEST(Cli, SizeGuardExitsThree) {
  // 3 * 2^9 * 3 elements cannot be exported as a table.
  const CliRun r = run({"schutzenberger", "--left", corpus("set_flipflop"), "--right", corpus("set_flipflop"), "--export"});
  EXPECT_EQ(r.code, 3);
}

TEST(Cli, UniversalTrivialEIsPreconditionViolation) {
  const CliRun r = run({"verify", "universal", "--left", corpus("set_z2"), "--right", corpus("set_z2"), "--images",
                     "a=g,b=1;a=1,b=g", "--mark", "a", "--e", "trivial"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.out.find("precondition_violated"), std::string::npos);
}

TEST(Cli, VerifyCommandsPass) {
  for (const char* theorem : {"schurec", "reutenauer", "decompose", "closure"}) {
    const CliRun r = run({"verify", theorem, "--left", corpus("set_z2"), "--right", corpus("set_b2"), "--images",
                       "a=g,b=g;a=1,b=0", "--mark", "a", "--max-len", "6"});
    EXPECT_EQ(r.code, 0) << theorem << "\n" << r.out << r.err;
  }
  // One letter, marked: every K a L is recognized, so the hypothesis holds.
  const CliRun u = run({"verify", "universal", "--left", corpus("set_z2"), "--right", corpus("set_b2"), "--alphabet",
                     "a", "--images", "a=g;a=0", "--mark", "a", "--max-len", "6"});
  EXPECT_EQ(u.code, 0) << u.out << u.err;
  // With two letters only the a-marked products are recognized.
  const CliRun u2 = run({"verify", "universal", "--left", corpus("set_z2"), "--right", corpus("set_b2"), "--images",
                      "a=g,b=g;a=1,b=0", "--mark", "a", "--max-len", "6"});
  EXPECT_EQ(u2.code, 2) << u2.out << u2.err;
  EXPECT_NE(u2.out.find("(K1 b L"), std::string::npos) << u2.out;
  EXPECT_NE(u2.out.find("h o e = f holds"), std::string::npos) << u2.out;
  const CliRun d = run({"verify", "closure", "--left", corpus("jsl_chain3"), "--right", corpus("jsl_boolean"),
                     "--mode", "with-derivatives", "--seed", "5", "--format", "table"});
  EXPECT_EQ(d.code, 0) << d.out << d.err;
  EXPECT_NE(d.out.find("with derivatives"), std::string::npos);
}

TEST(Cli, SameSeedSameBytes) {
  const std::vector<std::string> args{"verify", "decompose", "--left", corpus("pos_chain2"), "--right",
                                      corpus("pos_chain2"), "--seed", "9"};
  const CliRun a = run(args), b = run(args);
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  auto other = args;
  other.back() = "10";
  EXPECT_EQ(run(other).code, 0);
}

TEST(Cli, RecognizeAndMarkedProduct) {
  const std::string target = temp_file("contains_a.json", R"({"words":{"a":1,"aa":1,"ab":1,"ba":1}})");
  const CliRun r = run({"recognize", "--left", corpus("set_b2"), "--images", "a=0,b=1", "--target", target,
                     "--max-len", "2"});
  EXPECT_EQ(r.code, 0) << r.out << r.err;
  EXPECT_NE(r.out.find("0->1"), std::string::npos);
  const CliRun miss = run({"recognize", "--left", corpus("set_z2"), "--images", "a=g,b=g", "--target", target,
                        "--max-len", "2"});
  EXPECT_EQ(miss.code, 1);

  const std::string k = temp_file("k.json", R"({"words":{"":1}})");
  const std::string l = temp_file("l.json", R"({"words":{"b":1}})");
  const CliRun m = run({"marked-product", k, l, "--mark", "a", "--max-len", "3"});
  ASSERT_EQ(m.code, 0) << m.err;
  const auto j = nlohmann::json::parse(m.out);
  EXPECT_EQ(j["words"].size(), 1u);
  EXPECT_EQ(j["words"]["ab"], 1);
}

TEST(Cli, ValidateCorpus) {
  for (const auto& e : schutzkit::testing::corpus()) {
    const CliRun r = run({"validate", "--left", corpus(e.name), "--format", "table"});
    EXPECT_EQ(r.code, 0) << e.name << r.err;
  }
}
