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

// Repetition-coded discrimination of Bob's two reduced states.
//
// Bob's states are rho0 = I/2 and rho1 = (1/2)[[1, cs], [cs, 1]] with
// cs = cos(theta) sin(theta). Both are diagonal in the |+->
// basis, so n copies are distinguished exactly as Binomial(n, (1+cs)/2)
// against Binomial(n, 1/2).

#ifndef NLBOX_PROTOCOL_HPP_
#define NLBOX_PROTOCOL_HPP_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string_view>

namespace nlbox {

// cos(theta) sin(theta), computed as sin(2 theta)/2 and snapped to 0 when
// either factor is below 1e-15 in magnitude.
double overlap(double theta);

// (1/2) sum_k C(n,k) |l+^k l-^(n-k) - 2^-n| with l+- = (1 +- cs)/2.
double repetition_distance(double cs, long long rounds);

struct ProtocolLimits {
  long long max_rounds = 64;
  // Upper end of the search performed by min_rounds.
  long long max_search_rounds = 10'000'000;
};

// 1/2 + D_n/2. Throws DomainError for n < 1 or n above the cap.
double exact_success(double theta, long long rounds,
                     const ProtocolLimits& limits = {});

// Smallest n with exact_success >= target. Throws DomainError when cs = 0,
// when target is outside (1/2, 1), or when the search limit is reached.
long long min_rounds(double theta, double target,
                     const ProtocolLimits& limits = {});

// Per-shot random streams: splitmix64, each shot seeded from
// mix(seed xor mix(shot + golden gamma)).
inline constexpr std::string_view kPrngName = "splitmix64-counter/1";

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t state) : state_(state) {}
  static SplitMix64 for_shot(std::uint64_t seed, std::uint64_t shot);

  std::uint64_t next();
  // Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  static std::uint64_t mix(std::uint64_t z);

 private:
  std::uint64_t state_;
};

struct SimulateOptions {
  // 0 picks std::thread::hardware_concurrency().
  unsigned threads = 0;
};

struct ProtocolResult {
  double theta = 0.0;
  long long rounds = 1;
  double exact_success = 0.5;
  std::optional<double> empirical_success;
  long long shots = 0;
  std::uint64_t seed = 0;
};

// Monte Carlo of the protocol: Alice draws a uniform bit and rotates (bit 1)
// or not (bit 0); Bob measures n copies in |+-> and decides by likelihood
// ratio, answering "rotated" on ties. The result does not depend on the
// thread count.
ProtocolResult simulate(double theta, long long rounds, long long shots,
                        std::uint64_t seed, const SimulateOptions& options = {});

void write_protocol_csv_header(std::ostream& out);
void write_protocol_csv_row(std::ostream& out, const ProtocolResult& r,
                            int digits);

}  // namespace nlbox

#endif  // NLBOX_PROTOCOL_HPP_
