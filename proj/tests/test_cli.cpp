#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <string>
#include <sys/wait.h>

#include "rigid/io.hpp"

namespace {

struct CliRun {
  int code;
  std::string out;
};

CliRun run(const std::string& args) {
  std::string cmd = std::string(RIGIDCLI_PATH) + " " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return {-1, ""};
  std::string out;
  std::array<char, 4096> buf{};
  std::size_t k;
  while ((k = fread(buf.data(), 1, buf.size(), p)) > 0) out.append(buf.data(), k);
  int status = pclose(p);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string data(const std::string& f) { return std::string(RIGID_DATA_DIR) + "/" + f; }

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string temp_file(const std::string& name, const std::string& body) {
  std::string path = ::testing::TempDir() + name;
  std::ofstream(path) << body;
  return path;
}

}  // namespace

TEST(Cli, ExamplesPass) {
  for (const char* f : {"sign_z.json", "norm_one_torus.json", "sl2.json", "sl2_strongform.json", "q8.json",
                        "real_level.json"}) {
    CliRun r = run("verify --input " + data(f));
    EXPECT_EQ(r.code, 0) << f << "\n" << r.out;
  }
}

TEST(Cli, Subcommands) {
  EXPECT_EQ(run("sl2demo").code, 0);
  EXPECT_EQ(run("gerb --n-list 2 3 4 5 6").code, 0);
  EXPECT_EQ(run("tate --input " + data("sign_z.json") + " --degree 1").code, 0);
  EXPECT_EQ(run("yplustor --input " + data("sl2.json") + " --mode fixed").code, 0);
  EXPECT_EQ(run("yplustor --input " + data("norm_one_torus.json")).code, 0);
  EXPECT_EQ(run("cocycle --input " + data("norm_one_torus.json") + " --level 8").code, 0);
  EXPECT_EQ(run("strongform --input " + data("sl2_strongform.json")).code, 0);
  EXPECT_EQ(run("verify --seed 3").code, 0);
  EXPECT_EQ(run("verify --module cochain --seed 11").code, 0);
}

TEST(Cli, MachineOutputIsDeterministicJson) {
  CliRun a = run("yplustor --input " + data("sl2.json") + " --format machine");
  CliRun b = run("yplustor --input " + data("sl2.json") + " --format machine");
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  auto j = nlohmann::json::parse(a.out);
  EXPECT_EQ(j["command"], "yplustor");
  EXPECT_EQ(j["result"], "pass");
  EXPECT_EQ(j["input_digest"].get<std::string>().size(), 16u);
  for (const auto& c : j["checks"]) EXPECT_NE(c["status"], "fail") << c.dump();

  CliRun s1 = run("verify --seed 5 --format machine");
  CliRun s2 = run("verify --seed 5 --format machine");
  EXPECT_EQ(s1.out, s2.out);
}

TEST(Cli, ExpectationMismatchFails) {
  CliRun r = run("verify --input " + data("bad/wrong_expect.json"));
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("[fail] expect H^1: Z/2"), std::string::npos) << r.out;
}

TEST(Cli, SchemaErrorsExitTwo) {
  EXPECT_EQ(run("verify --input " + data("bad/unknown_key.json")).code, 2);
  EXPECT_EQ(run("verify --input /nonexistent/file.json").code, 2);
  EXPECT_EQ(run("tate").code, 2);
  EXPECT_EQ(run("strongform --input " + data("sign_z.json")).code, 2);
  EXPECT_EQ(run("verify --module nosuch").code, 2);
  EXPECT_EQ(run("yplustor --input " + data("sl2.json") + " --mode other").code, 2);
  EXPECT_EQ(run("").code, 2);
  EXPECT_EQ(run("verify --input " + temp_file("broken.json", "{\"kind\": ")).code, 2);
  // an inconsistent action: the generator does not have order 2
  EXPECT_EQ(run("tate --input " + temp_file("bad_action.json", R"({"kind": "gamma-module", "group": {"cyclic": 2},
      "invariants": [0], "actions": [{"rows": 1, "cols": 1, "entries": [2]}]})"))
                .code,
            2);
}

TEST(Cli, UnsupportedShapeExitsThree) {
  // cocycles are only implemented for the real gerb
  std::string f = temp_file("z3torus.json", R"({"kind": "torus", "group": {"cyclic": 3},
      "actions": [{"rows": 2, "cols": 2, "entries": [0, -1, 1, -1]}]})");
  EXPECT_EQ(run("cocycle --input " + f).code, 3);
}

TEST(Cli, BatchModeReportsWorstExit) {
  CliRun good = run("verify --input " + std::string(RIGID_DATA_DIR));
  EXPECT_EQ(good.code, 0) << good.out;
  EXPECT_NE(good.out.find("== q8.json"), std::string::npos);
  EXPECT_NE(good.out.find("== sl2.json"), std::string::npos);
  CliRun bad = run("verify --input " + data("bad"));
  EXPECT_EQ(bad.code, 2);
  EXPECT_NE(bad.out.find("== wrong_expect.json"), std::string::npos);
}

TEST(Io, RoundTrip) {
  for (const char* f : {"sign_z.json", "norm_one_torus.json", "sl2.json", "sl2_strongform.json", "q8.json",
                        "real_level.json"}) {
    rigid::io::Document d = rigid::io::parse_document_text(slurp(data(f)));
    nlohmann::json j = rigid::io::document_json(d);
    rigid::io::Document e = rigid::io::parse_document(j);
    EXPECT_TRUE(d == e) << f;
    EXPECT_EQ(rigid::io::digest(d), rigid::io::digest(e)) << f;
    EXPECT_EQ(rigid::io::document_json(e).dump(), j.dump()) << f;
  }
}

TEST(Io, DigestSeparatesDocuments) {
  auto a = rigid::io::parse_document_text(slurp(data("sign_z.json")));
  auto b = rigid::io::parse_document_text(slurp(data("bad/wrong_expect.json")));
  EXPECT_NE(rigid::io::digest(a), rigid::io::digest(b));
  EXPECT_EQ(rigid::io::fnv1a(""), "cbf29ce484222325");
}

TEST(Io, Rejections) {
  using rigid::io::SchemaError;
  using rigid::io::parse_document_text;
  EXPECT_THROW(parse_document_text("[1,2]"), SchemaError);
  EXPECT_THROW(parse_document_text(R"({"kind": "nosuch"})"), SchemaError);
  EXPECT_THROW(parse_document_text(R"({"kind": "group", "cyclic": 2, "permutations": [[1,0]]})"), SchemaError);
  EXPECT_THROW(parse_document_text(R"({"kind": "group", "cyclic": 0})"), SchemaError);
  EXPECT_THROW(parse_document_text(R"({"kind": "strong-form", "target": "sl2", "g": [1, 0, 0]})"), SchemaError);
  EXPECT_THROW(parse_document_text(R"({"kind": "strong-form", "target": "sl2", "g": [1, 0, 0, "1/0"]})"),
               SchemaError);
  EXPECT_THROW(parse_document_text(R"({"kind": "level", "group": {"cyclic": 2}, "units": [1, 1]})"), SchemaError);
  EXPECT_NO_THROW(parse_document_text(R"({"kind": "group", "permutations": [[1,0,2],[0,2,1]]})"));
}
