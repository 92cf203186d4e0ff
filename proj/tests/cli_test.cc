#include "pwdist/cli.h"

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace pwdist {
namespace {

namespace fs = std::filesystem;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::path(::testing::TempDir()) / (std::string("pwdist_cli_") + info->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }

  fs::path path(const std::string& name) const { return dir_ / name; }

  void write(const std::string& name, const std::string& text) const {
    std::ofstream(path(name), std::ios::binary) << text;
  }

  static std::string read(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  int run(const std::string& args) const {
    const std::string cmd = std::string(PWDIST_CLI_PATH) + " " + args + " 2>" +
                            path("stderr.txt").string() + " >" + path("stdout.txt").string();
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  fs::path dir_;
};

TEST_F(CliTest, FitReportsCollinearFixture) {
  write("table.tsv", "rank\tcount\tpassword\n1\t12\ta\n2\t6\tb\n3\t4\tc\n4\t3\td\n");
  ASSERT_EQ(run("fit --table " + path("table.tsv").string() + " --replicates 5 --out-dir " +
                path("out").string()),
            kExitOk)
      << read(path("stderr.txt"));
  const auto report = read(path("out/fit.tsv"));
  EXPECT_EQ(report.substr(0, report.find('\n')), "method\ts\tslope_m\tstderr\tp_value\tN");
  EXPECT_NE(report.find("\nls-raw\t1\tNA\tNA\tNA\t4\n"), std::string::npos) << report;
  // The count-of-counts fits are degenerate here and come back as warnings.
  EXPECT_NE(read(path("stderr.txt")).find("warning\t"), std::string::npos);
  EXPECT_TRUE(fs::exists(path("out/manifest.json")));
}

TEST_F(CliTest, EmptyCorpusIsAnInputError) {
  write("empty.txt", "");
  EXPECT_EQ(run("ingest --input " + path("empty.txt").string() + " --out-dir " +
                path("out").string()),
            kExitInput);
  EXPECT_EQ(read(path("stderr.txt")).substr(0, 12), "error\tinput\t");
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(run("ingest --no-such-flag"), kExitUsage);
  EXPECT_EQ(run("frobnicate"), kExitUsage);
  EXPECT_EQ(run(""), kExitUsage);
}

TEST_F(CliTest, CurveWithItsOwnReferenceMatchesTheSelfCurve) {
  write("corpus.txt", "a\nb\na\nc\na\nb\nd\n");
  ASSERT_EQ(run("ingest --format password-per-line --input " + path("corpus.txt").string() +
                " --out-dir " + path("t").string()),
            kExitOk)
      << read(path("stderr.txt"));
  const auto table = path("t/table.tsv").string();
  ASSERT_EQ(run("curve --target " + table + " --metric both --out-dir " + path("self").string()),
            kExitOk);
  ASSERT_EQ(run("curve --target " + table + " --reference " + table +
                " --metric both --out-dir " + path("cross").string()),
            kExitOk);
  for (const char* name : {"curve_users.tsv", "curve_distinct.tsv"}) {
    const auto self = read(path("self") / name);
    EXPECT_FALSE(self.empty());
    EXPECT_EQ(self, read(path("cross") / name)) << name;
  }
  EXPECT_EQ(read(path("self/curve_users.tsv")),
            "t\tcumulative\tfraction\n1\t3\t0.42857142857142855\n2\t5\t0.7142857142857143\n"
            "3\t6\t0.8571428571428571\n4\t7\t1\n");
}

TEST_F(CliTest, StatsAndCrackRunEndToEnd) {
  write("corpus.tsv", "u1\tpassword1\nu2\tpassword2\nu3\tqwerty\nu4\tqwerty\nu5\tletmein\n");
  ASSERT_EQ(run("ingest --input " + path("corpus.tsv").string() + " --out-dir " +
                path("t").string()),
            kExitOk);
  ASSERT_EQ(run("stats --table " + path("t/table.tsv").string() + " --s 0.5 --out-dir " +
                path("s").string()),
            kExitOk)
      << read(path("stderr.txt"));
  EXPECT_EQ(read(path("s/stats.tsv")).substr(0, 6), "model\t");

  ASSERT_EQ(run("crack --corpus " + path("corpus.tsv").string() + " --salt-count 4 --reference " +
                path("t/table.tsv").string() + " --out-dir " + path("c").string()),
            kExitOk)
      << read(path("stderr.txt"));
  const auto cracked = read(path("c/cracked.tsv"));
  EXPECT_EQ(std::count(cracked.begin(), cracked.end(), '\n'), 6);
  EXPECT_TRUE(fs::exists(path("c/hashes.tsv")));
}

TEST_F(CliTest, MhSimReadsConfigAndOverrides) {
  write("sim.conf", "# small run\nsource = zipf:0.9:50\nn_users = 200\nseed = 4\n");
  ASSERT_EQ(run("mh-sim --config " + path("sim.conf").string() + " --users 300 --out-dir " +
                path("m").string()),
            kExitOk)
      << read(path("stderr.txt"));
  const auto accepted = read(path("m/accepted.tsv"));
  EXPECT_GT(std::count(accepted.begin(), accepted.end(), '\n'), 1);
  write("bad.conf", "colour = blue\n");
  EXPECT_EQ(run("mh-sim --config " + path("bad.conf").string() + " --out-dir " +
                path("b").string()),
            kExitInput);
}

TEST_F(CliTest, BannedExhaustionExitsWithNumericCode) {
  write("words.txt", "only\n");
  write("table.tsv", "rank\tcount\tpassword\n1\t1\tonly\n");
  write("sim.conf", "source = table:table.tsv\nn_users = 1\nban_list = words.txt\nretry_cap = 3\n");
  EXPECT_EQ(run("mh-sim --config " + path("sim.conf").string() + " --out-dir " +
                path("m").string()),
            kExitNumeric);
}

}  // namespace
}  // namespace pwdist
