// Copyright 2026 The nlbox Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// End-to-end checks against the built `nlbox` executable.

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "nlbox/io.hpp"

namespace {

struct CliRun {
  int exit_code = -1;
  std::string out;
};

CliRun run(const std::string& args) {
  const std::string cmd = std::string(NLBOX_CLI_PATH) + " " + args + " 2>/dev/null";
  CliRun r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  const int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::size_t start = 0;
  while (start < text.size()) {
    const auto end = text.find('\n', start);
    rows.push_back(nlbox::split(text.substr(start, end - start), ','));
    if (end == std::string::npos) break;
    start = end + 1;
  }
  return rows;
}

std::string temp_file(const std::string& name, const std::string& body) {
  const std::string path = std::string(NLBOX_TEST_TMPDIR) + "/" + name;
  std::ofstream(path) << body;
  return path;
}

TEST(CliTest, VerifyPrBox) {
  const CliRun r = run("verify --box pr");
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_NE(r.out.find("no-signaling: OK; CHSH = 4"), std::string::npos) << r.out;
}

TEST(CliTest, ChshAndLocal) {
  EXPECT_EQ(run("chsh --box uniform").out, "CHSH = 0\n");
  const CliRun pr = run("local --box pr");
  EXPECT_EQ(pr.exit_code, 0);
  EXPECT_NE(pr.out.find("local: false"), std::string::npos);
  EXPECT_NE(pr.out.find("distance: 0.125"), std::string::npos) << pr.out;
  EXPECT_NE(run("local --box pr-uniform-mix").out.find("local: true"),
            std::string::npos);
}

TEST(CliTest, ScanMatchesClosedForm) {
  const CliRun r = run("scan --theta-min 0 --theta-max 1.5707963 --steps 65");
  ASSERT_EQ(r.exit_code, 0);
  const auto rows = csv_rows(r.out);
  ASSERT_EQ(rows.size(), 66u);
  EXPECT_EQ(rows[0][3], "ab_violation");
  for (std::size_t i = 1; i < rows.size(); ++i) {
    ASSERT_EQ(rows[i].size(), 5u);
    const double t = nlbox::parse_double(rows[i][0]);
    EXPECT_NEAR(nlbox::parse_double(rows[i][3]), std::sin(2 * t) / 4, 1e-10);
  }
  EXPECT_NEAR(nlbox::parse_double(rows[33][3]), 0.25, 1e-10);
}

TEST(CliTest, RepeatAndDigits) {
  const CliRun r = run("repeat --theta 0.7853981633974483 --target 0.65");
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_EQ(r.out, "n = 2\n");
  EXPECT_EQ(run("repeat --degrees --theta 45 --target 0.65").out, "n = 2\n");
  EXPECT_EQ(run("signal --theta 0.7853981633974483 --digits 3").exit_code, 0);
}

TEST(CliTest, SimulateIndependentOfThreadsAndRerun) {
  const std::string args =
      "simulate --theta 0.7853981633974483 -n 16 --shots 20000 --seed 99";
  const CliRun one = run(args + " --threads 1");
  const CliRun four = run(args + " --threads 4");
  ASSERT_EQ(one.exit_code, 0);
  EXPECT_EQ(one.out, four.out);
  EXPECT_EQ(one.out, run(args + " --threads 1").out);
  EXPECT_NE(one.out, run("simulate --theta 0.7853981633974483 -n 16 "
                         "--shots 20000 --seed 100").out);
}

TEST(CliTest, AuditReportsSignalingButSucceeds) {
  const CliRun r = run("audit --theta 0.3");
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_NE(r.out.find("0.14116061834875"), std::string::npos) << r.out;
}

TEST(CliTest, ParseExpression) {
  const CliRun r = run("parse --expr '1/2(|00>(+)|11>)'");
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_NE(r.out.find("1/2 (|00> (+) |11>)"), std::string::npos) << r.out;
  EXPECT_EQ(run("parse --expr '|0> + |01>'").exit_code, 1);
}

TEST(CliTest, ExitCodes) {
  EXPECT_EQ(run("").exit_code, 1);
  EXPECT_EQ(run("frobnicate").exit_code, 1);
  EXPECT_EQ(run("signal").exit_code, 1);
  EXPECT_EQ(run("verify --box nosuchbox").exit_code, 1);
  EXPECT_EQ(run("repeat --theta 0.3 --target 1.5").exit_code, 1);

  const auto malformed = temp_file("malformed_box.csv", "A,B,a,b,p\n0,0,0\n");
  EXPECT_EQ(run("verify --box " + malformed).exit_code, 1);

  // Well formed but unnormalized.
  std::string bad = "A,B,a,b,p\n";
  for (int i = 0; i < 16; ++i) {
    bad += std::to_string(i >> 3) + "," + std::to_string((i >> 2) & 1) + "," +
           std::to_string((i >> 1) & 1) + "," + std::to_string(i & 1) + ",0.3\n";
  }
  EXPECT_EQ(run("verify --box " + temp_file("unnormalized_box.csv", bad)).exit_code, 2);

  // Alice's marginal depends on Bob's input.
  std::string sig = "A,B,a,b,p\n";
  for (int i = 0; i < 16; ++i) {
    const int x = i >> 3, y = (i >> 2) & 1, a = (i >> 1) & 1, b = i & 1;
    const double p = (a == y && b == 0) ? 1.0 : 0.0;
    sig += std::to_string(x) + "," + std::to_string(y) + "," + std::to_string(a) +
           "," + std::to_string(b) + "," + std::to_string(p) + "\n";
  }
  const CliRun s = run("verify --box " + temp_file("signaling_box.csv", sig));
  EXPECT_EQ(s.exit_code, 2);
}

TEST(CliTest, OutFileReceivesOutput) {
  const std::string path = std::string(NLBOX_TEST_TMPDIR) + "/chsh_out.txt";
  std::remove(path.c_str());
  const CliRun r = run("chsh --box pr --out " + path);
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_TRUE(r.out.empty());
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "CHSH = 4");
}

}  // namespace
