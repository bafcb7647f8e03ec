#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <string>

namespace {

struct Result {
  int code;
  std::string out;
};

Result run(const std::string& args) {
  const std::string cmd = std::string(SEMILIN_CLI) + " " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  std::string out;
  std::array<char, 4096> buf;
  for (std::size_t n; (n = fread(buf.data(), 1, buf.size(), p)) > 0;) out.append(buf.data(), n);
  const int status = pclose(p);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string sample(const char* name) { return std::string(SEMILIN_SAMPLES) + "/" + name; }

std::string temp_file(const char* name, const std::string& content) {
  std::string path = ::testing::TempDir() + name;
  std::ofstream(path) << content;
  return path;
}

const char* kSemigroup = "0\n2\n4\n5\n6\n7\n8\n9\n10\n11\n12\n13\n14\n15\n16\n17\n18\n19\n20\n";

}  // namespace

TEST(Cli, Frobenius) {
  Result r = run("frobenius 3,5");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "7\n");
  EXPECT_EQ(run("frobenius 6,9,20").out, "43\n");
  EXPECT_EQ(run("frobenius 4,6").code, 1);
}

TEST(Cli, Eval) {
  Result r = run("eval \"E x : 2*x = 4\"");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "true\n");
  EXPECT_EQ(run("eval \"A x : x >= 0\"").out, "false\n");
  EXPECT_EQ(run("eval \"E x : x <=\"").code, 2);
}

TEST(Cli, ExampleGfExpandsToSemigroup) {
  Result text = run("gf --poly " + sample("ex12.json") + " --map \"1 0 0\"");
  EXPECT_EQ(text.code, 0);
  EXPECT_NE(text.out.find("t^2"), std::string::npos);
  Result js = run("gf --poly " + sample("ex12.json") + " --map \"1 0 0\" --format json");
  ASSERT_EQ(js.code, 0);
  std::string path = temp_file("ex12_gf.json", js.out);
  EXPECT_EQ(run("expand --gf " + path + " --box 0:20").out, kSemigroup);
  EXPECT_EQ(run("count --gf " + path + " --box 0:20").out, "19\n");
}

TEST(Cli, FormulaPipelines) {
  EXPECT_EQ(run("count --formula-file " + sample("semigroup_2_5.pres") + " --box 0:20").out, "19\n");
  Result g = run("gf --formula-file " + sample("semigroup_2_5.pres") + " --format json");
  ASSERT_EQ(g.code, 0);
  EXPECT_EQ(run("expand --gf " + temp_file("sg.json", g.out) + " --box 0:20").out, kSemigroup);
  Result d = run("decompose --formula-file " + sample("nonmultiples5.pres"));
  EXPECT_EQ(d.code, 0);
  EXPECT_NE(d.out.find("\"5\""), std::string::npos);
}

TEST(Cli, ProjectRoundTrip) {
  Result a = run("project --poly " + sample("ex12.json") + " --map \"1 0 0\"");
  ASSERT_EQ(a.code, 0);
  std::string path = temp_file("img.json", a.out);
  Result b = run("project --set " + path + " --map \"1\"");
  EXPECT_EQ(b.code, 0);
  EXPECT_EQ(a.out, b.out);
}

TEST(Cli, Kfeasible) {
  Result r = run("kfeasible --A \"3 5\" --k 2 --box 0:40");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out.substr(0, 9), "15\n18\n20\n");
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run("").code, 1);
  EXPECT_EQ(run("frobenius").code, 1);
  EXPECT_EQ(run("gf -f \"x = x\"").code, 5);
  EXPECT_EQ(run("gf -f \"x >= 1 & x <= 0\"").code, 3);
  EXPECT_EQ(run("decompose -f \"E y : x = 7*y\" --max-cosets 3").code, 4);
  EXPECT_EQ(run("project --poly " + temp_file("bad.json", "{\"dim\": ") + " --map 1").code, 2);
}

TEST(Cli, Deterministic) {
  const std::string args = "decompose --formula-file " + sample("two_ways_3_5.pres");
  Result a = run(args), b = run(args), c = run(args + " --jobs 3");
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(a.out, c.out);
}
