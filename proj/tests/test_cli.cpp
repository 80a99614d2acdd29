// SPDX-License-Identifier: MIT
#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

namespace {

struct CliRun {
  int exit_code = -1;
  std::string out;
};

CliRun run(const std::string& args) {
  std::string cmd = std::string("\"") + DQBF_CLI_PATH + "\" " + args + " 2>/dev/null";
  CliRun r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
  int st = pclose(p);
  r.exit_code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

std::string data(const std::string& name) { return std::string("\"") + DQBF_TEST_DATA + "/" + name + "\""; }

std::string temp_file(const std::string& name, const std::string& content) {
  auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path, std::ios::binary) << content;
  return path.string();
}

}  // namespace

TEST(Cli, TraceExampleIsTrue) {
  CliRun r = run(data("trace_example.dqdimacs"));
  EXPECT_EQ(r.exit_code, 10);
  EXPECT_NE(r.out.find("s cnf 1\n"), std::string::npos);
}

TEST(Cli, ParityCycleIsFalse) {
  CliRun r = run(data("parity_cycle.dqdimacs"));
  EXPECT_EQ(r.exit_code, 20);
  EXPECT_NE(r.out.find("s cnf 0\n"), std::string::npos);
}

TEST(Cli, ParityCycleWithoutStrongFexReportsCycle) {
  CliRun r = run("--no-strong-fex " + data("parity_cycle.dqdimacs"));
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_NE(r.out.find("c reason dependency cycle"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("s cnf -1\n"), std::string::npos);
}

TEST(Cli, OracleMode) {
  EXPECT_EQ(run("--oracle " + data("trace_example.dqdimacs")).exit_code, 10);
  EXPECT_EQ(run("--oracle " + data("parity_cycle.dqdimacs")).exit_code, 20);
}

TEST(Cli, StdinInput) {
  std::string path = temp_file("dqbf_cli_stdin.dqdimacs", "p cnf 2 2\na 1 0\nd 2 1 0\n1 2 0\n-1 -2 0\n");
  CliRun r = run("- < \"" + path + "\"");
  EXPECT_EQ(r.exit_code, 10);
  std::filesystem::remove(path);
}

TEST(Cli, ParseErrorExitsWithOne) {
  std::string path = temp_file("dqbf_cli_bad.dqdimacs", "p cnf 1 1\n2 0\n");
  CliRun r = run("\"" + path + "\"");
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_EQ(r.out.find("s cnf"), std::string::npos);
  std::filesystem::remove(path);
  EXPECT_EQ(run("/nonexistent/file.dqdimacs").exit_code, 1);
  EXPECT_EQ(run("--no-such-flag").exit_code, 1);
}

TEST(Cli, StatsAndStructure) {
  CliRun r = run("--stats --print-structure " + data("trace_example.dqdimacs"));
  EXPECT_EQ(r.exit_code, 10);
  EXPECT_NE(r.out.find("c stats conflicts"), std::string::npos);
  EXPECT_NE(r.out.find("c level 0 exists"), std::string::npos);
}

TEST(Cli, MultiLinearCheck) {
  EXPECT_NE(run("--check-multilinear " + data("trace_example.dqdimacs")).out.find("multi-linear"), std::string::npos);
  EXPECT_NE(run("--check-multilinear " + data("parity_cycle.dqdimacs")).out.find("not multi-linear"), std::string::npos);
}

TEST(Cli, SeededRunsAreReproducible) {
  for (const char* seed : {"0", "7"}) {
    CliRun a = run(std::string("--stats --seed ") + seed + " " + data("parity_cycle.dqdimacs"));
    CliRun b = run(std::string("--stats --seed ") + seed + " " + data("parity_cycle.dqdimacs"));
    EXPECT_EQ(a.out, b.out);
    EXPECT_EQ(a.exit_code, 20);
  }
}

TEST(Cli, ConflictLimit) {
  CliRun r = run("--max-conflicts 1 " + data("parity_cycle.dqdimacs"));
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_NE(r.out.find("c reason conflict limit"), std::string::npos);
}
