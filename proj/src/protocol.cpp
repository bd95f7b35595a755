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

#include "nlbox/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "nlbox/errors.hpp"
#include "nlbox/hybrid.hpp"
#include "nlbox/io.hpp"
#include "nlbox/quantum.hpp"

namespace nlbox {
namespace {

constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ULL;
// Below this round count the binomial sum is evaluated by direct products,
// which is exact for dyadic inputs.
constexpr long long kDirectLimit = 64;

double direct_distance(double cs, long long n) {
  const double lp = 0.5 * (1.0 + cs);
  const double lm = 0.5 * (1.0 - cs);
  const double base = std::ldexp(1.0, -static_cast<int>(n));
  double choose = 1.0;
  double sum = 0.0;
  for (long long k = 0; k <= n; ++k) {
    const double term =
        std::pow(lp, static_cast<double>(k)) *
        std::pow(lm, static_cast<double>(n - k));
    sum += choose * std::abs(term - base);
    choose = choose * static_cast<double>(n - k) / static_cast<double>(k + 1);
  }
  return 0.5 * sum;
}

double log_distance(double cs, long long n) {
  const double log_lp = std::log1p(cs) - std::log(2.0);
  const double log_lm = std::log1p(-cs) - std::log(2.0);
  const double log_base = -static_cast<double>(n) * std::log(2.0);
  const double lgn = std::lgamma(static_cast<double>(n) + 1.0);
  double sum = 0.0;
  for (long long k = 0; k <= n; ++k) {
    const double kd = static_cast<double>(k);
    const double lchoose = lgn - std::lgamma(kd + 1.0) -
                           std::lgamma(static_cast<double>(n - k) + 1.0);
    const double a = lchoose + kd * log_lp + (static_cast<double>(n) - kd) * log_lm;
    const double b = lchoose + log_base;
    sum += std::abs(std::exp(a) - std::exp(b));
  }
  return 0.5 * sum;
}

void check_theta(double theta) {
  if (!std::isfinite(theta)) throw DomainError("theta must be finite");
}

}  // namespace

double overlap(double theta) {
  check_theta(theta);
  if (std::abs(std::cos(theta)) <= 1e-15 || std::abs(std::sin(theta)) <= 1e-15)
    return 0.0;
  return 0.5 * std::sin(2.0 * theta);
}

double repetition_distance(double cs, long long rounds) {
  if (rounds < 1) throw DomainError("rounds must be positive");
  if (!(std::abs(cs) <= 0.5)) throw DomainError("overlap must lie in [-1/2, 1/2]");
  return rounds <= kDirectLimit ? direct_distance(cs, rounds)
                                : log_distance(cs, rounds);
}

double exact_success(double theta, long long rounds,
                     const ProtocolLimits& limits) {
  if (rounds < 1) throw DomainError("rounds must be positive");
  if (rounds > limits.max_rounds) {
    throw DomainError("rounds " + std::to_string(rounds) + " above cap " +
                      std::to_string(limits.max_rounds));
  }
  return 0.5 + 0.5 * repetition_distance(overlap(theta), rounds);
}

long long min_rounds(double theta, double target,
                     const ProtocolLimits& limits) {
  if (!(target > 0.5 && target < 1.0)) {
    throw DomainError("target must lie in (1/2, 1)");
  }
  const double cs = overlap(theta);
  if (cs == 0.0) throw DomainError("no signaling at this theta");
  auto reaches = [&](long long n) {
    return 0.5 + 0.5 * repetition_distance(cs, n) >= target;
  };
  // Success is nondecreasing in n: double, then bisect.
  long long hi = 1;
  while (!reaches(hi)) {
    if (hi >= limits.max_search_rounds) {
      throw DomainError("target not reached within " +
                        std::to_string(limits.max_search_rounds) + " rounds");
    }
    hi = std::min(hi * 2, limits.max_search_rounds);
  }
  long long lo = hi / 2;  // reaches(lo) is false unless lo == 0
  while (hi - lo > 1) {
    const long long mid = lo + (hi - lo) / 2;
    (reaches(mid) ? hi : lo) = mid;
  }
  return hi;
}

std::uint64_t SplitMix64::mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

SplitMix64 SplitMix64::for_shot(std::uint64_t seed, std::uint64_t shot) {
  return SplitMix64(mix(seed ^ mix(shot + kGoldenGamma)));
}

std::uint64_t SplitMix64::next() {
  state_ += kGoldenGamma;
  return mix(state_);
}

ProtocolResult simulate(double theta, long long rounds, long long shots,
                        std::uint64_t seed, const SimulateOptions& options) {
  check_theta(theta);
  if (rounds < 1) throw DomainError("rounds must be positive");
  if (shots < 1) throw DomainError("shots must be positive");

  // Probability of the |+> outcome for each of Alice's choices.
  const auto basis = plus_minus_basis();
  const double p_plus[2] = {measure_probs(bob_state(0.0), basis)[0],
                            measure_probs(bob_state(theta), basis)[0]};

  // decide_rotated[k]: likelihood ratio with k '+' outcomes favours rho1.
  const double log_plus = std::log(p_plus[1] / p_plus[0]);
  const double log_minus = std::log((1.0 - p_plus[1]) / (1.0 - p_plus[0]));
  std::vector<char> decide_rotated(static_cast<std::size_t>(rounds) + 1);
  for (long long k = 0; k <= rounds; ++k) {
    const double llr = static_cast<double>(k) * log_plus +
                       static_cast<double>(rounds - k) * log_minus;
    decide_rotated[k] = llr >= 0.0;
  }

  auto run_range = [&](long long begin, long long end) {
    long long correct = 0;
    for (long long shot = begin; shot < end; ++shot) {
      auto rng = SplitMix64::for_shot(seed, static_cast<std::uint64_t>(shot));
      const int bit = static_cast<int>(rng.next() >> 63);
      long long plus = 0;
      for (long long r = 0; r < rounds; ++r)
        plus += rng.uniform() < p_plus[bit];
      correct += (decide_rotated[plus] != 0) == (bit == 1);
    }
    return correct;
  };

  unsigned threads = options.threads ? options.threads
                                     : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(
      std::min<long long>(threads, std::max<long long>(1, shots / 1024)));

  long long correct = 0;
  if (threads <= 1) {
    correct = run_range(0, shots);
  } else {
    std::vector<long long> partial(threads, 0);
    std::vector<std::thread> workers;
    for (unsigned t = 0; t < threads; ++t) {
      const long long begin = shots * t / threads;
      const long long end = shots * (t + 1) / threads;
      workers.emplace_back(
          [&, t, begin, end] { partial[t] = run_range(begin, end); });
    }
    for (auto& w : workers) w.join();
    for (long long c : partial) correct += c;
  }

  ProtocolResult result;
  result.theta = theta;
  result.rounds = rounds;
  result.exact_success = 0.5 + 0.5 * repetition_distance(overlap(theta), rounds);
  result.empirical_success =
      static_cast<double>(correct) / static_cast<double>(shots);
  result.shots = shots;
  result.seed = seed;
  return result;
}

void write_protocol_csv_header(std::ostream& out) {
  out << "theta,n,exact,empirical,shots,seed\n";
}

void write_protocol_csv_row(std::ostream& out, const ProtocolResult& r,
                            int digits) {
  out << format_double(r.theta, digits) << ',' << r.rounds << ','
      << format_double(r.exact_success, digits) << ','
      << (r.empirical_success ? format_double(*r.empirical_success, digits)
                              : std::string())
      << ',' << r.shots << ',' << r.seed << '\n';
}

}  // namespace nlbox
