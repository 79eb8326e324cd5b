#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "gather/cli.hpp"

namespace fs = std::filesystem;
using namespace gather;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run cli_run(std::vector<std::string> args) {
  args.insert(args.begin(), "gather");
  std::vector<const char*> argv;
  for (auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = cli::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir = fs::temp_directory_path() / ("gather_cli_" + std::to_string(::getpid()));
    fs::create_directories(dir);
  }
  void TearDown() override { fs::remove_all(dir); }

  std::string file(const std::string& name, const std::string& text) {
    auto p = dir / name;
    std::ofstream(p) << text;
    return p.string();
  }

  fs::path dir;
};

const char* i1 = "# unique Weber node\nM 5 5\nM 6 4\nR 0 3\nR 4 0\nR 10 5\nR 6 10\nR 3 4\nR 7 7\nR 2 6\n";
const char* u = "M 0 1\nM 2 1\nM 1 0\nM 1 2\nR 0 0\nR 2 2\nR 0 2\nR 2 0\nR -1 1\nR 3 1\nR 1 -1\nR 1 3\n";
const char* u_prime = "M 1 0\nM 3 0\nM 2 4\nR 0 0\nR 4 0\nR 0 2\nR 4 2\nR 1 3\nR 3 3\nR 1 1\nR 3 1\n";

}  // namespace

TEST_F(Cli, UsageErrors) {
  EXPECT_EQ(cli_run({}).code, 1);
  EXPECT_EQ(cli_run({"frobnicate"}).code, 1);
  auto f = file("a.txt", i1);
  EXPECT_EQ(cli_run({"run", f, "--scheduler", "lazy"}).code, 1);
  EXPECT_EQ(cli_run({"run", f, "--assert", "maybe"}).code, 1);
  EXPECT_EQ(cli_run({"run", f, "--fairness", "0"}).code, 1);
  EXPECT_EQ(cli_run({"run"}).code, 1);
}

TEST_F(Cli, RunReportsOptimalGathering) {
  auto r = cli_run({"run", file("a.txt", i1), "--scheduler", "async", "--seed", "3"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.rfind("outcome=Gathered node=(5,5) moves=", 0), 0u) << r.out;
  EXPECT_NE(r.out.find(" optimal=true "), std::string::npos);
  EXPECT_NE(r.out.find(" optimal_cost="), std::string::npos);
}

TEST_F(Cli, RunUngatherableIsAVerdict) {
  auto r = cli_run({"run", file("u.txt", u)});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out.rfind("outcome=Ungatherable reason=\"", 0), 0u) << r.out;
  EXPECT_NE(r.out.find(" moves=0"), std::string::npos);
}

TEST_F(Cli, ParseAndPreconditionErrors) {
  auto bad = cli_run({"run", file("bad.txt", "M 0 0\nR 1 1\nQ 2 2\n")});
  EXPECT_EQ(bad.code, 2);
  EXPECT_NE(bad.err.find("line 3"), std::string::npos) << bad.err;
  auto few = cli_run({"run", file("few.txt", "M 0 0\nR 1 1\nR 2 2\nR 3 3\n")});
  EXPECT_EQ(few.code, 2);
  EXPECT_NE(few.err.find("7 robots"), std::string::npos) << few.err;
  EXPECT_EQ(cli_run({"run", (dir / "missing.txt").string()}).code, 2);
  EXPECT_EQ(cli_run({"classify", file("bad2.txt", "M 0 0 0\n")}).code, 2);
}

TEST_F(Cli, StepCapIsAFault) {
  auto r = cli_run({"run", file("a.txt", i1), "--max-steps", "1"});
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.out.find("outcome=CapExceeded"), std::string::npos) << r.out;
}

TEST_F(Cli, TraceToStdoutAndFile) {
  auto f = file("a.txt", i1);
  auto r = cli_run({"run", f, "--trace", "-"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out.rfind("step=1 r=1 ev=", 0), 0u) << r.out;
  EXPECT_NE(r.out.find("\noutcome=Gathered node=5,5 moves="), std::string::npos);

  auto t = (dir / "a.trace").string();
  EXPECT_EQ(cli_run({"run", f, "--scheduler", "ssync", "--trace", t}).code, 0);
  std::ifstream in(t);
  std::string first;
  std::getline(in, first);
  EXPECT_EQ(first.rfind("step=1 ", 0), 0u);
}

TEST_F(Cli, BatchRunKeepsInputOrder) {
  auto a = file("a.txt", i1), b = file("b.txt", u);
  auto tdir = dir / "traces";
  auto r = cli_run({"run", a, b, "--jobs", "2", "--trace", tdir.string()});
  EXPECT_EQ(r.code, 0);
  auto pa = r.out.find("file=" + a + " outcome=Gathered");
  auto pb = r.out.find("file=" + b + " outcome=Ungatherable");
  ASSERT_NE(pa, std::string::npos) << r.out;
  ASSERT_NE(pb, std::string::npos) << r.out;
  EXPECT_LT(pa, pb);
  EXPECT_TRUE(fs::exists(tdir / "a.trace"));
}

TEST_F(Cli, RepeatedRunsAreIdentical) {
  auto f = file("a.txt", u_prime);
  auto g = file("b.txt", i1);
  for (auto& p : {f, g}) {
    auto x = cli_run({"run", p, "--scheduler", "async", "--seed", "12", "--trace", "-"});
    auto y = cli_run({"run", p, "--scheduler", "async", "--seed", "12", "--trace", "-"});
    EXPECT_EQ(x.out, y.out);
  }
}

TEST_F(Cli, Classify) {
  auto r = cli_run({"classify", file("s.txt", "M 3 3\nR 0 0\nR 1 0\nR 2 0\nR 3 0\nR 4 0\nR 5 0\nR 6 0\n")});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out.rfind("class=I1 gatherable=true", 0), 0u) << r.out;
  EXPECT_NE(r.out.find("\ntarget=(3,3)"), std::string::npos);

  auto p = cli_run({"classify", file("p.txt", u_prime)});
  EXPECT_EQ(p.out.rfind("class=I3b3 gatherable=false u_prime=true", 0), 0u) << p.out;

  auto b1 = cli_run({"classify", std::string(GATHER_FIXTURES) + "/micro/i3b1_0.txt"});
  EXPECT_EQ(b1.out.rfind("class=I3b1 ", 0), 0u) << b1.out;
  EXPECT_NE(b1.out.find("\nweber="), std::string::npos);
}

TEST_F(Cli, Explore) {
  auto r = cli_run({"explore", std::string(GATHER_FIXTURES) + "/micro/i3b2_1.txt"});
  EXPECT_EQ(r.code, 0) << r.out << r.err;
  EXPECT_EQ(r.out.rfind("outcomes=1 ", 0), 0u) << r.out;
  auto capped = cli_run({"explore", std::string(GATHER_FIXTURES) + "/micro/i3b2_1.txt", "--max-states", "10"});
  EXPECT_EQ(capped.code, 3);
}

TEST_F(Cli, Gen) {
  auto r = cli_run({"gen", "--n", "9", "--meetings", "3", "--seed", "4"});
  EXPECT_EQ(r.code, 0) << r.err;
  auto c = parse_scenario(r.out);
  EXPECT_EQ(c.robot_count(), 9);
  EXPECT_EQ(c.meeting_nodes().size(), 3u);
  EXPECT_EQ(cli_run({"gen", "--n", "9", "--meetings", "3", "--seed", "4"}).out, r.out);

  auto k = cli_run({"gen", "--class", "I3b2", "--seed", "2", "--extent", "8"});
  EXPECT_EQ(k.code, 0) << k.err;
  EXPECT_EQ(to_string(classify(parse_scenario(k.out))), "I3b2");

  EXPECT_EQ(cli_run({"gen", "--n", "5"}).code, 1);
  EXPECT_EQ(cli_run({"gen", "--class", "I9"}).code, 1);
}
