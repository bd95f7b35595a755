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

#include "nlbox/boxes.hpp"

#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "nlbox/errors.hpp"
#include "test_support.hpp"

namespace nlbox {
namespace {

TEST(PrBoxTest, EntriesFollowXorRule) {
  const auto box = pr_box();
  EXPECT_EQ(box(0, 0, 1, 1), 0.0);
  EXPECT_EQ(box(0, 1, 1, 1), 0.5);
  EXPECT_EQ(box(0, 0, 0, 0), 0.5);
  EXPECT_EQ(box(0, 1, 0, 0), 0.0);
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
          EXPECT_EQ(box(a, b, x, y), (a ^ b) == (x & y) ? 0.5 : 0.0);
}

TEST(PrBoxTest, MarginalsAreUniform) {
  const auto box = pr_box();
  for (int x = 0; x < 2; ++x) {
    for (int y = 0; y < 2; ++y) {
      EXPECT_EQ(box.alice_marginal(x, y)[0], 0.5);
      EXPECT_EQ(box.bob_marginal(x, y)[0], 0.5);
    }
  }
}

TEST(NoSignalingTest, PrAndUniformAreNonSignaling) {
  for (const auto& box : {pr_box(), uniform_box()}) {
    const auto r = check_no_signaling(box);
    EXPECT_EQ(r.a_to_b_violation, 0.0);
    EXPECT_EQ(r.b_to_a_violation, 0.0);
  }
}

TEST(NoSignalingTest, MaximalAliceToBobSignal) {
  // b = A regardless of B, a = 0.
  std::vector<double> t(16, 0.0);
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y) t[((x * 2 + y) * 2 + 0) * 2 + x] = 1.0;
  const auto r = check_no_signaling(ConditionalBox({}, t));
  EXPECT_EQ(r.a_to_b_violation, 1.0);
  EXPECT_EQ(r.b_to_a_violation, 0.0);
  EXPECT_EQ(r.a_to_b_worst.sender_input_0, 0);
  EXPECT_EQ(r.a_to_b_worst.sender_input_1, 1);
}

TEST(NoSignalingTest, MalformedTableIsRejected) {
  auto t = pr_box().table();
  t[0] = 0.7;
  EXPECT_THROW(check_no_signaling(ConditionalBox({}, t)), ValidationError);
  t = pr_box().table();
  t[0] = -0.1;
  t[3] = 0.6;
  EXPECT_THROW(check_no_signaling(ConditionalBox({}, t)), ValidationError);
}

TEST(NoSignalingTest, NonBinaryAlphabet) {
  // Three inputs for Alice; Bob's output copies whether A == 2.
  Alphabet s{3, 2, 2, 2};
  std::vector<double> t(s.table_size(), 0.0);
  ConditionalBox layout(s, t);
  for (int x = 0; x < 3; ++x)
    for (int y = 0; y < 2; ++y) t[layout.index(0, x == 2, x, y)] = 1.0;
  const auto r = check_no_signaling(ConditionalBox(s, t));
  EXPECT_EQ(r.a_to_b_violation, 1.0);
  EXPECT_EQ(r.a_to_b_worst.sender_input_1, 2);
}

TEST(ConditionalBoxTest, SizeMismatchThrows) {
  EXPECT_THROW(ConditionalBox({}, std::vector<double>(15, 0.0)),
               DimensionError);
  EXPECT_THROW(ConditionalBox(Alphabet{0, 2, 2, 2}, {}), DimensionError);
}

TEST(RelabelTest, IdentityIsNoOp) {
  EXPECT_EQ(relabel(pr_box(), Relabeling::identity({})), pr_box());
}

TEST(RelabelTest, FlipAliceOutputNegatesRule) {
  const auto flipped = relabel(pr_box(), Relabeling::flip_alice_output());
  // Direct table transform: P'(a,b|x,y) = P(1-a, b|x,y).
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
          EXPECT_EQ(flipped(a, b, x, y), pr_box()(1 - a, b, x, y));
          EXPECT_EQ(flipped(a, b, x, y),
                    (a ^ b) == ((x & y) ^ 1) ? 0.5 : 0.0);
        }
  EXPECT_EQ(chsh_value(flipped), -4.0);
}

TEST(RelabelTest, DimensionMismatchThrows) {
  Relabeling r = Relabeling::identity({});
  r.alice_inputs = {0, 0};
  EXPECT_THROW(relabel(pr_box(), r), DimensionError);
  EXPECT_THROW(relabel(uniform_box({3, 2, 2, 2}), Relabeling::identity({})),
               DimensionError);
}

Relabeling random_relabeling(std::mt19937_64& rng, const Alphabet& s) {
  Relabeling r = Relabeling::identity(s);
  std::shuffle(r.alice_inputs.begin(), r.alice_inputs.end(), rng);
  std::shuffle(r.bob_inputs.begin(), r.bob_inputs.end(), rng);
  for (auto& p : r.alice_outputs) std::shuffle(p.begin(), p.end(), rng);
  for (auto& p : r.bob_outputs) std::shuffle(p.begin(), p.end(), rng);
  return r;
}

ConditionalBox random_box(std::mt19937_64& rng, const Alphabet& s) {
  std::exponential_distribution<double> expo;
  std::vector<double> t(s.table_size());
  for (auto& p : t) p = expo(rng);
  ConditionalBox layout(s, t);
  for (int x = 0; x < s.alice_inputs; ++x)
    for (int y = 0; y < s.bob_inputs; ++y) {
      double total = 0.0;
      for (int a = 0; a < s.alice_outputs; ++a)
        for (int b = 0; b < s.bob_outputs; ++b) total += t[layout.index(a, b, x, y)];
      for (int a = 0; a < s.alice_outputs; ++a)
        for (int b = 0; b < s.bob_outputs; ++b) t[layout.index(a, b, x, y)] /= total;
    }
  return ConditionalBox(s, t);
}

TEST(RelabelTest, PropertyInverseAndSymmetry) {
  std::mt19937_64 rng(11);
  const Alphabet alphabets[] = {{}, {3, 2, 2, 3}, {2, 4, 3, 2}};
  for (int trial = 0; trial < 200; ++trial) {
    const Alphabet& s = alphabets[trial % 3];
    const auto box = random_box(rng, s);
    const auto r = random_relabeling(rng, s);
    const auto moved = relabel(box, r);
    EXPECT_EQ(relabel(moved, r.inverse()), box);
    const auto before = check_no_signaling(box);
    const auto after = check_no_signaling(moved);
    EXPECT_NEAR(before.a_to_b_violation, after.a_to_b_violation, 1e-15);
    EXPECT_NEAR(before.b_to_a_violation, after.b_to_a_violation, 1e-15);
  }
}

TEST(RelabelTest, PrOrbitKeepsExtremeChsh) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 64; ++trial) {
    const auto moved = relabel(pr_box(), random_relabeling(rng, {}));
    for (double p : moved.table()) EXPECT_TRUE(p == 0.0 || p == 0.5);
    EXPECT_EQ(moved.max_normalization_error(), 0.0);
    // One of the eight CHSH expressions reaches the algebraic maximum.
    const auto values = testing_support::all_chsh_values(moved);
    EXPECT_EQ(*std::max_element(values.begin(), values.end()), 4.0);
    EXPECT_LE(std::abs(chsh_value(moved)), 4.0);
  }
}

TEST(ChshTest, KnownValues) {
  EXPECT_EQ(chsh_value(pr_box()), 4.0);
  EXPECT_EQ(chsh_value(uniform_box()), 0.0);
  // a = b = 0 always: every correlator is +1, so 1 + 1 + 1 - 1.
  EXPECT_EQ(chsh_value(deterministic_box(0)), 2.0);
  EXPECT_THROW(chsh_value(uniform_box({3, 2, 2, 2})), DimensionError);
}

TEST(BoxCsvTest, WritesHeaderAndLexicographicRows) {
  std::ostringstream out;
  write_box_csv(out, pr_box());
  const std::string text = out.str();
  EXPECT_EQ(text.substr(0, text.find('\n')), "A,B,a,b,p");
  EXPECT_NE(text.find("\n0,0,0,0,0.5\n0,0,0,1,0\n"), std::string::npos);
  EXPECT_NE(text.find("\n1,1,1,1,0\n"), std::string::npos);
}

TEST(BoxCsvTest, RoundTripPreservesTable) {
  std::mt19937_64 rng(3);
  for (const Alphabet& s : {Alphabet{}, Alphabet{3, 2, 2, 4}}) {
    const auto box = random_box(rng, s);
    std::stringstream io;
    write_box_csv(io, box);
    EXPECT_EQ(read_box_csv(io), box);
  }
}

TEST(BoxCsvTest, MalformedInputs) {
  auto read = [](const std::string& text) {
    std::istringstream in(text);
    return read_box_csv(in);
  };
  EXPECT_THROW(read("A,B,a,b\n"), ValidationError);
  EXPECT_THROW(read("A,B,a,b,p\n0,0,0,0\n"), ValidationError);
  EXPECT_THROW(read("A,B,a,b,p\n0,0,0,0,x\n"), ValidationError);
  EXPECT_THROW(read("A,B,a,b,p\n0,0,0,1,0.5\n0,0,0,0,0.5\n"), ValidationError);
  EXPECT_THROW(read("A,B,a,b,p\n0,0,0,0,1\n1,1,1,1,0\n"), ValidationError);
}

}  // namespace
}  // namespace nlbox
