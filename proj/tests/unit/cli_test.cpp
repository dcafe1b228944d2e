#include <gtest/gtest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "support.hpp"

namespace {

namespace fs = std::filesystem;

const fs::path kData = ROADOCC_TEST_DATA;

struct CliRun {
  int code;
  std::string output;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("roadocc_cli_" + std::to_string(::getpid()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  CliRun run(const std::string& args) const {
    const fs::path log = dir_ / "cli.log";
    const std::string cmd = std::string("'") + ROADOCC_CLI + "' " + args + " > '" + log.string() + "' 2>&1";
    const int status = std::system(cmd.c_str());
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(log)};
  }

  fs::path dir_;
};

TEST_F(CliTest, HelpAndVersion) {
  EXPECT_EQ(run("--help").code, 0);
  const auto v = run("--version");
  EXPECT_EQ(v.code, 0);
  EXPECT_NE(v.output.find("0.1.0"), std::string::npos);
}

TEST_F(CliTest, MissingSubcommandIsFatal) { EXPECT_EQ(run("").code, 1); }

TEST_F(CliTest, BenchWritesTableAndCurves) {
  roadocc::testing::write_separable_dataset(dir_ / "data", 2);
  const auto r = run("bench --dataset '" + (dir_ / "data").string() + "' --out '" + (dir_ / "out").string() +
                     "' --reps S,R --classifiers G,PCA --seed 4 --quiet");
  ASSERT_EQ(r.code, 0) << r.output;
  EXPECT_EQ(slurp(dir_ / "out" / "auc_table.csv"), "classifier,S,R\nG,100.0,100.0\nPCA,,\n");
  EXPECT_TRUE(fs::exists(dir_ / "out" / "roc" / "S_G.csv"));
  EXPECT_FALSE(fs::exists(dir_ / "out" / "roc" / "S_PCA.csv"));
  EXPECT_TRUE(fs::exists(dir_ / "out" / "summary.csv"));
}

TEST_F(CliTest, BenchPartialSkipExitsTwo) {
  roadocc::testing::write_separable_dataset(dir_ / "data", 2);
  std::ofstream(dir_ / "data" / "annotations" / "lonely.xml") << "<annotation/>";
  const auto r = run("bench --dataset '" + (dir_ / "data").string() + "' --out '" + (dir_ / "out").string() +
                     "' --reps S --classifiers NN --quiet");
  EXPECT_EQ(r.code, 2) << r.output;
  EXPECT_NE(slurp(dir_ / "out" / "skipped.csv").find("lonely,no image"), std::string::npos);
}

TEST_F(CliTest, BenchBadInputsAreFatal) {
  EXPECT_EQ(run("bench --dataset /nonexistent --out '" + (dir_ / "o").string() + "'").code, 1);
  roadocc::testing::write_separable_dataset(dir_ / "data", 1);
  EXPECT_EQ(run("bench --dataset '" + (dir_ / "data").string() + "' --out '" + (dir_ / "o").string() +
                "' --reps XYZ").code,
            1);
  EXPECT_EQ(run("bench --dataset '" + (dir_ / "data").string() + "' --out '" + (dir_ / "o").string() +
                "' --classifiers Nope").code,
            1);
  EXPECT_EQ(run("bench --dataset '" + (dir_ / "data").string() + "' --out '" + (dir_ / "o").string() +
                "' --averaging median").code,
            1);
}

TEST_F(CliTest, ConfigFileMirrorsFlags) {
  roadocc::testing::write_separable_dataset(dir_ / "data", 2);
  std::ofstream(dir_ / "run.cfg") << "# bench settings\n"
                                  << "dataset = " << (dir_ / "data").string() << "\n"
                                  << "out = " << (dir_ / "from_cfg").string() << "\n"
                                  << "reps = S\nclassifiers = NN\nseed = 9\nquiet = true\n";
  auto r = run("bench --config '" + (dir_ / "run.cfg").string() + "'");
  ASSERT_EQ(r.code, 0) << r.output;
  EXPECT_EQ(slurp(dir_ / "from_cfg" / "auc_table.csv"), "classifier,S\nNN,100.0\n");

  // The command line overrides the file.
  r = run("bench --config '" + (dir_ / "run.cfg").string() + "' --classifiers km");
  ASSERT_EQ(r.code, 0) << r.output;
  EXPECT_EQ(slurp(dir_ / "from_cfg" / "auc_table.csv").substr(0, 15), "classifier,S\nkm");

  std::ofstream(dir_ / "bad.cfg") << "dataset = x\nfrobnicate = 1\n";
  r = run("bench --config '" + (dir_ / "bad.cfg").string() + "' --out x");
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.output.find("frobnicate"), std::string::npos);
}

TEST_F(CliTest, DetectWritesMaps) {
  roadocc::testing::write_separable_dataset(dir_ / "data", 1);
  const auto r = run("detect --image '" + (dir_ / "data" / "images" / "img_0.ppm").string() +
                     "' --rep HS --classifier RG --tau 0.5 --likelihood '" + (dir_ / "l.pgm").string() +
                     "' --mask '" + (dir_ / "m.pgm").string() + "'");
  ASSERT_EQ(r.code, 0) << r.output;
  EXPECT_NE(r.output.find("trained on 13266 rows"), std::string::npos) << r.output;
  EXPECT_EQ(slurp(dir_ / "l.pgm").substr(0, 11), "P5\n240 120\n");
  EXPECT_TRUE(fs::exists(dir_ / "m.pgm"));
}

TEST_F(CliTest, DetectRoiTooLargeIsFatal) {
  roadocc::testing::write_separable_dataset(dir_ / "data", 1);
  const auto r = run("detect --image '" + (dir_ / "data" / "images" / "img_0.ppm").string() +
                     "' --roi-width 500");
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.output.find("width"), std::string::npos);
}

TEST_F(CliTest, OccupancyCsv) {
  const auto r = run("occupancy --dataset '" + (kData / "synthetic").string() + "' --out '" +
                     (dir_ / "occ.csv").string() + "'");
  ASSERT_EQ(r.code, 0) << r.output;
  const auto csv = slurp(dir_ / "occ.csv");
  EXPECT_EQ(csv.rfind("bin_lo,bin_hi,count\n0,0.05,", 0), 0u) << csv;
  std::istringstream lines(csv);
  std::string line;
  std::getline(lines, line);
  int rows = 0, total = 0;
  while (std::getline(lines, line)) {
    ++rows;
    total += std::stoi(line.substr(line.rfind(',') + 1));
  }
  EXPECT_EQ(rows, 20);
  EXPECT_EQ(total, 5);
}

TEST_F(CliTest, ValidateAnnotations) {
  const std::string exports = (kData / "exports").string();
  auto r = run("validate-annotations --strict '" + exports + "/triangle.xml' '" + exports + "/labels.xml'");
  EXPECT_EQ(r.code, 0) << r.output;
  EXPECT_EQ(run("validate-annotations --dataset '" + (kData / "synthetic").string() + "'").code, 0);

  std::ofstream(dir_ / "warn.xml") << R"(<annotation><filename>a</filename><size width="4" height="4"/><extra/></annotation>)";
  std::ofstream(dir_ / "bad.xml") << "<annotation><filename>a</filename></annotation>";
  r = run("validate-annotations '" + (dir_ / "warn.xml").string() + "'");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.output.find("warning"), std::string::npos);
  EXPECT_EQ(run("validate-annotations --strict '" + (dir_ / "warn.xml").string() + "'").code, 1);
  r = run("validate-annotations '" + (dir_ / "bad.xml").string() + "'");
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.output.find("error"), std::string::npos);
}

}  // namespace
