// Copyright 2026 The roughfrac Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include <gtest/gtest.h>

#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "roughfrac/cli.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
  int code = 0;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "roughfrac");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Result r;
  r.code = roughfrac::cli::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string without_clock(const std::string& manifest) {
  std::istringstream in(manifest);
  std::string line, kept;
  while (std::getline(in, line))
    if (line.rfind("wall_clock_seconds", 0) != 0) kept += line + "\n";
  return kept;
}

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() / ("roughfrac_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter_++));
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  fs::path operator/(const std::string& name) const { return path_ / name; }

 private:
  static inline int counter_ = 0;
  fs::path path_;
};

const std::vector<std::string> kLimit = {"limit", "--dim", "1", "--alpha", "0.5", "--kernel", "pair:1,1",
                                         "--f", "indicator:0.5", "--rho", "1", "--t", "geo:0.2,0.5,4"};

}  // namespace

TEST(Cli, IdentityExample) {
  const auto r = run({"identity", "--dim", "2", "--alpha", "1", "--kernel", "const:1"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = csv_rows(r.out);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "closed_form,numeric,rel_err,config_hash");
  EXPECT_NEAR(std::stod(rows[1][0]), 1.7724539, 1e-7);
  EXPECT_LT(std::stod(rows[1][2]), 0.01);
}

TEST(Cli, LimitExample) {
  const auto r = run(kLimit);
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = csv_rows(r.out);
  ASSERT_EQ(rows.size(), 5u);
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "t,beta,D,bound,slope_so_far,tail_cert,config_hash");
  for (std::size_t i = 2; i < rows.size(); ++i) EXPECT_LT(std::stod(rows[i][2]), std::stod(rows[i - 1][2]));
  for (std::size_t i = 2; i < rows.size(); ++i) EXPECT_EQ(rows[i].back(), rows[1].back());
}

TEST(Cli, ScheduleValidation) {
  auto args = kLimit;
  args.back() = "geo:0.6,0.5,3";
  const auto r = run(args);
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("t_schedule: t must be < rho/2"), std::string::npos) << r.err;
}

TEST(Cli, UnknownSubcommand) {
  const auto r = run({"frobnicate"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("unknown subcommand"), std::string::npos);
  EXPECT_NE(r.err.find("Usage"), std::string::npos);
}

TEST(Cli, MissingSubcommand) { EXPECT_EQ(run({}).code, 2); }

TEST(Cli, ErrorsNameTheKey) {
  auto r = run({"identity", "--dim", "2", "--alpha", "1", "--kernel", "wobble:1"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("kernel"), std::string::npos);
  r = run({"identity", "--dim", "2", "--alpha", "3", "--kernel", "const:1"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("alpha"), std::string::npos) << r.err;
  r = run({"limit", "--dim", "1", "--alpha", "0.5", "--kernel", "pair:1,1", "--f", "cone:-1", "--t", "0.1"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("f:"), std::string::npos) << r.err;
  r = run({"norms", "--dim", "2", "--alpha", "1", "--kernel", "pair:1,1"});
  EXPECT_EQ(r.code, 2);
  r = run({"limit", "--dim", "1", "--alpha", "0.5", "--kernel", "pair:1,1", "--t", "0.1,abc"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("t_schedule"), std::string::npos) << r.err;
}

TEST(Cli, NumericFailureExitsOne) {
  TempDir dir;
  {
    std::ofstream table(dir / "huge.txt");
    for (int i = 0; i < 8; ++i) table << "1e308\n";
  }
  const auto out = dir / "run.csv";
  const auto r = run({"limit", "--dim", "2", "--alpha", "1", "--kernel", "table:" + (dir / "huge.txt").string(), "--f",
                      "indicator:0.5", "--t", "0.2", "--grid-res", "8", "--out", out.string()});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("point"), std::string::npos) << r.err;
  EXPECT_FALSE(fs::exists(out));
  EXPECT_FALSE(fs::exists(out.string() + ".manifest"));
}

TEST(Cli, NoPartialFilesOnValidationError) {
  TempDir dir;
  auto args = kLimit;
  args.back() = "geo:0.6,0.5,3";
  args.insert(args.end(), {"--out", (dir / "bad.csv").string()});
  EXPECT_EQ(run(args).code, 2);
  EXPECT_FALSE(fs::exists(dir / "bad.csv"));
  EXPECT_FALSE(fs::exists(dir / "bad.csv.manifest"));
}

TEST(Cli, OutWritesCsvAndManifest) {
  TempDir dir;
  auto args = kLimit;
  args.insert(args.end(), {"--out", (dir / "a.csv").string()});
  const auto r = run(args);
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(r.out.empty());
  const auto csv = slurp(dir / "a.csv");
  const auto manifest = slurp(dir / "a.csv.manifest");
  const auto hash = csv_rows(csv)[1].back();
  EXPECT_NE(manifest.find("config_hash = " + hash), std::string::npos) << manifest;
  for (const char* key : {"kernel", "alpha", "rho", "t_schedule", "grid_res", "version", "wall_clock_seconds"})
    EXPECT_NE(manifest.find(key), std::string::npos) << key;
}

TEST(Cli, DeterministicAcrossRepeatsAndWorkers) {
  TempDir dir;
  const std::vector<std::string> base = {"limit", "--dim", "2", "--alpha", "1", "--kernel", "cos:2,1,1",
                                         "--f", "cone:0.5", "--t", "0.2,0.1", "--grid-res", "8",
                                         "--angular-nodes", "64", "--radial-panels", "16"};
  std::vector<std::string> csv, man;
  for (const char* workers : {"1", "1", "3"}) {
    auto args = base;
    const auto path = dir / ("w" + std::to_string(csv.size()) + ".csv");
    args.insert(args.end(), {"--workers", workers, "--out", path.string()});
    ASSERT_EQ(run(args).code, 0);
    csv.push_back(slurp(path));
    man.push_back(without_clock(slurp(path.string() + ".manifest")));
  }
  EXPECT_EQ(csv[0], csv[1]);
  EXPECT_EQ(csv[0], csv[2]);
  EXPECT_EQ(man[0], man[1]);
  // The worker count is a resolved parameter but not part of the hash.
  EXPECT_EQ(csv_rows(csv[0])[1].back(), csv_rows(csv[2])[1].back());
}

TEST(Cli, ConfigFileAndFlagPrecedence) {
  TempDir dir;
  {
    std::ofstream cfg(dir / "run.ini");
    cfg << "[limit]\ndim = 1\nalpha = 0.5\nkernel = pair:1,1\nf = indicator:0.5\nrho = 1\nt = 0.2,0.1\ngrid_res = 64\n";
  }
  const auto a = run({"--config", (dir / "run.ini").string(), "limit"});
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(csv_rows(a.out).size(), 3u);
  const auto b = run({"--config", (dir / "run.ini").string(), "limit", "--t", "0.2,0.1,0.05"});
  ASSERT_EQ(b.code, 0) << b.err;
  EXPECT_EQ(csv_rows(b.out).size(), 4u);
  const auto c = run({"limit", "--dim", "1", "--alpha", "0.5", "--kernel", "pair:1,1", "--f", "indicator:0.5", "--rho",
                      "1", "--t", "0.2,0.1", "--grid-res", "64"});
  EXPECT_EQ(a.out, c.out);
}

TEST(Cli, ConfigUnknownKeyRejected) {
  TempDir dir;
  {
    std::ofstream cfg(dir / "bad.ini");
    cfg << "[limit]\ndim = 1\nbogus_key = 3\n";
  }
  EXPECT_EQ(run({"--config", (dir / "bad.ini").string(), "limit"}).code, 2);
}

TEST(Cli, VectorLimitWithConfigList) {
  TempDir dir;
  {
    std::ofstream cfg(dir / "v.ini");
    cfg << "[vector-limit]\ndim = 1\nalpha = 0.5\nkernel = pair:1,1\nf = [indicator:0.5 | cone:0.5 | gauss:0.2,0.5]\n"
           "r = 2\nt = 0.2,0.1,0.05\ngrid_res = 64\n";
  }
  const auto r = run({"--config", (dir / "v.ini").string(), "vector-limit"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = csv_rows(r.out);
  ASSERT_EQ(rows.size(), 4u);
  for (std::size_t i = 2; i < rows.size(); ++i) EXPECT_LT(std::stod(rows[i][2]), std::stod(rows[i - 1][2]));
}

TEST(Cli, NormsAndDini) {
  auto r = run({"norms", "--dim", "2", "--alpha", "1", "--kernel", "cos:0,1,1"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto rows = csv_rows(r.out);
  EXPECT_NEAR(std::stod(rows[1][1]), 1.7724539, 1e-7);
  r = run({"dini", "--dim", "2", "--alpha", "1", "--kernel", "const:1", "--s", "0.5"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "t,omega,partial_integral,verdict,config_hash");
  rows = csv_rows(r.out);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    EXPECT_EQ(std::stod(rows[i][1]), 0.0);
    EXPECT_EQ(rows[i][3], "satisfies");
  }
}

TEST(Cli, MonitorsSmoke) {
  auto r = run({"opnorm", "--dim", "1", "--alpha", "0.5", "--kernel", "const:1", "--f", "indicator:0.5", "--op", "M",
                "--grid-res", "64"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "t,ratio,max_so_far,config_hash");
  r = run({"young", "--dim", "1", "--alpha", "0.5", "--kernel", "pair:3,1", "--random", "3", "--seed", "5",
           "--grid-res", "64"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "index,ratio,max_so_far,config_hash");
  r = run({"types", "--family", "disjoint", "--lambda", "0.5", "--t", "0.2,0.1"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "t,lambda,type1,type2,type3,config_hash");
  r = run({"reduce", "--dim", "1", "--alpha", "0.5", "--kernel", "pair:3,1", "--f", "indicator:0.5", "--grid-res",
           "64"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "eps,lhs,d_eps,m_diff,field_diff,constant,kernel_gap,config_hash");
  r = run({"types", "--family", "sideways"});
  EXPECT_EQ(r.code, 2);
}

TEST(Cli, SeparateProcessesAreByteIdentical) {
  TempDir dir;
  std::vector<std::string> csv;
  for (int i = 0; i < 2; ++i) {
    const auto out = dir / ("p" + std::to_string(i) + ".csv");
    const std::string cmd = std::string(ROUGHFRAC_CLI_PATH) +
                            " identity --dim 1 --alpha 0.5 --kernel pair:3,1 --grid-res 256 --out " + out.string();
    ASSERT_EQ(std::system(cmd.c_str()), 0);
    csv.push_back(slurp(out));
    EXPECT_EQ(without_clock(slurp(out.string() + ".manifest")),
              without_clock(slurp(dir / "p0.csv.manifest")));
  }
  EXPECT_EQ(csv[0], csv[1]);
}
