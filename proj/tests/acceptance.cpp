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

// Acceptance suite. With no argument every criterion runs; with a criterion
// number only that one does. Prints one PASS/FAIL line per criterion and
// exits nonzero if any selected criterion fails.

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "nlbox/audit.hpp"
#include "nlbox/boxes.hpp"
#include "nlbox/dsl.hpp"
#include "nlbox/hybrid.hpp"
#include "nlbox/io.hpp"
#include "nlbox/protocol.hpp"
#include "nlbox/quantum.hpp"
#include "test_support.hpp"

namespace {

using namespace nlbox;
using std::numbers::pi;

constexpr const char* kPrOutput = "1/2 (|00> (+) |11>)";
constexpr const char* kSuperposedInputs = "c(|00> (+) |11>) + s(|01> (+) |10>)";
constexpr const char* kDistributed =
    "1/4 ((c|00> + s|01>) (+) (c|00> + s|10>) (+) (c|11> + s|01>) (+) "
    "(c|11> + s|10>))";
constexpr const char* kAtom =
    "1/sqrt(2) (|00> + |10>) (+) 1/sqrt(2) (|01> + |11>)";
constexpr std::uint64_t kSeed = 0x5EED2010;

struct Outcome {
  bool pass = true;
  std::string detail;

  // Records a failed check. Failure messages accumulate in `detail`.
  void require(bool ok, const std::string& what) {
    if (ok) return;
    detail += (pass ? "" : "; ") + what;
    pass = false;
  }
};

std::string num(double v) { return format_double(v, 6); }

double max_diff(const CMatrix<double>& x, const CMatrix<double>& y) {
  return (x - y).cwiseAbs().maxCoeff();
}

std::vector<double> grid(double lo, double hi, int points) {
  std::vector<double> out;
  for (int i = 0; i < points; ++i) out.push_back(lo + (hi - lo) * i / (points - 1));
  return out;
}

DensityOperator bob_marginal(const DensityOperator& rho) {
  return partial_trace(rho, 1, {2, 2});
}

CMatrix<double> printed_rho1(double theta) {
  const double cs = std::cos(theta) * std::sin(theta);
  CMatrix<double> m(2, 2);
  m << 0.5, 0.5 * cs, 0.5 * cs, 0.5;
  return m;
}

Outcome pr_box_fidelity() {
  Outcome o;
  const auto box = pr_box();
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
          const double want = ((a ^ b) == (x & y)) ? 0.5 : 0.0;
          o.require(box(a, b, x, y) == want, "entry mismatch");
        }
  const auto ns = check_no_signaling(box);
  o.require(ns.a_to_b_violation == 0.0 && ns.b_to_a_violation == 0.0,
            "no-signaling violation nonzero");
  const double chsh = chsh_value(box);
  o.require(std::abs(chsh - 4.0) <= 1e-12, "CHSH = " + num(chsh));
  o.require(!is_local(box).local, "PR box reported local");
  if (o.pass) o.detail = "CHSH = " + num(chsh) + ", signaling (0, 0), nonlocal";
  return o;
}

Outcome quantum_sanity() {
  Outcome o;
  const auto rho0 = bob_marginal(distribute(dsl::parse(kPrOutput)).density());
  o.require(max_diff(rho0.matrix(), CMatrix<double>::Identity(2, 2) / 2) <= 1e-12,
            "Bob marginal of the PR output is not I/2");
  double worst = 0.0;
  const auto distributed = dsl::parse(kDistributed);
  for (double t : grid(0, pi / 2, 33)) {
    const auto state = distribute(distributed, t);
    o.require(state.size() == 4, "mixture does not have 4 branches");
    worst = std::max(worst, max_diff(bob_marginal(state.density()).matrix(),
                                     printed_rho1(t)));
  }
  o.require(worst <= 1e-12, "rho1 mismatch " + num(worst));
  if (o.pass) o.detail = "33 angles, max |rho1 - printed| = " + num(worst);
  return o;
}

Outcome rewrite_equivalence() {
  Outcome o;
  const auto before = dsl::parse(kSuperposedInputs);
  const auto after = dsl::parse(kDistributed);
  double worst = 0.0;
  for (double t : grid(-pi, pi, 65)) {
    worst = std::max(worst, max_diff(distribute(before, t).density().matrix(),
                                     distribute(after, t).density().matrix()));
  }
  o.require(worst <= 1e-12, "max density difference " + num(worst));
  if (o.pass) o.detail = "65 angles, max density difference = " + num(worst);
  return o;
}

Outcome signaling_curve() {
  Outcome o;
  const auto thetas = grid(0, pi / 2, 65);
  double worst = 0.0, worst_ba = 0.0, peak = -1.0;
  std::size_t peak_at = 0;
  for (std::size_t i = 0; i < thetas.size(); ++i) {
    const double t = thetas[i];
    const double v = signaling_witness(t).a_to_b_violation;
    worst = std::max(worst, std::abs(v - std::sin(2 * t) / 4));
    if (v > peak) {
      peak = v;
      peak_at = i;
    }
    worst_ba = std::max(worst_ba, audit_dynamics(t).b_to_a_violation);
  }
  o.require(worst <= 1e-10, "max |witness - sin(2t)/4| = " + num(worst));
  o.require(peak_at == 32 && std::abs(peak - 0.25) <= 1e-10,
            "peak " + num(peak) + " at index " + std::to_string(peak_at));
  o.require(signaling_witness(0.0).a_to_b_violation <= 1e-10 &&
                signaling_witness(pi / 2).a_to_b_violation <= 1e-10,
            "nonzero at an endpoint");
  o.require(worst_ba <= 1e-12, "b_to_a violation " + num(worst_ba));
  if (o.pass) {
    o.detail = "65 points, max error " + num(worst) + ", peak " + num(peak) +
               " at pi/4, max b_to_a " + num(worst_ba);
  }
  return o;
}

Outcome audit_criterion() {
  Outcome o;
  for (double t : {0.1, 0.3, pi / 4}) {
    const auto r = audit_dynamics(t);
    const std::string at = " at theta " + num(t);
    o.require(r.min_entry >= -1e-12, "negative entry" + at);
    o.require(r.max_normalization_error <= 1e-12, "normalization" + at);
    o.require(std::abs(r.a_to_b_violation - std::sin(2 * t) / 4) <= 1e-10,
              "violation " + num(r.a_to_b_violation) + at);
  }
  if (o.pass) o.detail = "positive, normalized and signaling at 0.1, 0.3, pi/4";
  return o;
}

// D_n at cs = 1/2 as num / 4^n, exact in 128-bit integers.
unsigned __int128 rational_distance_numerator(int n) {
  unsigned __int128 total = 0, binom = 1, pow3 = 1;
  const unsigned __int128 pow2 = static_cast<unsigned __int128>(1) << n;
  for (int k = 0; k <= n; ++k) {
    total += binom * (pow3 > pow2 ? pow3 - pow2 : pow2 - pow3);
    binom = binom * (n - k) / (k + 1);
    pow3 *= 3;
  }
  return total;  // D_n = total / (2 * 4^n)
}

long double binomial_tv(long double p, int n) {
  long double sum = 0;
  for (int k = 0; k <= n; ++k) {
    const long double logc = std::lgamma(n + 1.0L) - std::lgamma(k + 1.0L) -
                             std::lgamma(n - k + 1.0L);
    const long double a = std::exp(logc + k * std::log(p) + (n - k) * std::log1p(-p));
    const long double b = std::exp(logc - n * std::log(2.0L));
    sum += std::abs(a - b);
  }
  return sum / 2;
}

double brute_force_success(double theta, int n) {
  const auto rho0 = DensityOperator::maximally_mixed(2);
  const auto rho1 = bob_state(theta);
  DensityOperator a = rho0, b = rho1;
  for (int i = 1; i < n; ++i) {
    a = tensor(a, rho0);
    b = tensor(b, rho1);
  }
  return 0.5 + trace_distance(a, b) / 2;
}

Outcome repetition_convergence() {
  Outcome o;
  const ProtocolLimits limits{128};
  o.require(exact_success(pi / 4, 1) == 0.625, "n = 1 not exactly 0.625");
  o.require(exact_success(pi / 4, 2) == 0.65625, "n = 2 not exactly 0.65625");
  for (int n = 1; n <= 26; ++n) {
    const double want = 0.5 + static_cast<double>(rational_distance_numerator(n)) /
                                  std::ldexp(4.0, 2 * n);
    o.require(exact_success(pi / 4, n) == want,
              "rational mismatch at n = " + std::to_string(n));
  }

  std::string reached;
  for (double t : {pi / 4, 0.1}) {
    const std::string at = " (theta " + num(t) + ")";
    const long double p = 0.5L + overlap(t) / 2.0L;
    double prev = 0.0, best = 0.0;
    int first = 0;
    for (int n = 1; n <= 128; ++n) {
      const double v = exact_success(t, n, limits);
      if (n <= 64) {
        o.require(v >= prev, "decreasing at n = " + std::to_string(n) + at);
      }
      prev = v;
      best = std::max(best, v);
      if (!first && v > 0.99) first = n;
      const long double identity = 0.5L + binomial_tv(p, n) / 2;
      o.require(std::abs(static_cast<long double>(v) - identity) <= 1e-10L,
                "binomial identity at n = " + std::to_string(n) + at);
      if (n <= 8) {
        o.require(std::abs(v - brute_force_success(t, n)) <= 1e-10,
                  "brute force at n = " + std::to_string(n) + at);
      }
    }
    o.require(first != 0, "success stays below 0.99 for n <= 128" + at +
                              ", reaching " + num(best) + " at n = 128");
    if (first) {
      if (!reached.empty()) reached += ", ";
      reached += "n = " + std::to_string(first) + at;
    }
  }
  if (o.pass) {
    o.detail = "0.99 exceeded at " + reached;
  } else if (!reached.empty()) {
    o.detail += "; 0.99 exceeded at " + reached;
  }
  return o;
}

Outcome monte_carlo_consistency() {
  Outcome o;
  const auto quarter = simulate(pi / 4, 1, 100000, kSeed);
  const double e1 = *quarter.empirical_success;
  const double tol1 = 3 * std::sqrt(0.625 * 0.375 / 100000);
  o.require(std::abs(e1 - 0.625) <= tol1, "pi/4: " + num(e1));
  const auto flat = simulate(0.0, 8, 10000, kSeed);
  const double e2 = *flat.empirical_success;
  o.require(std::abs(e2 - 0.5) <= 3 * std::sqrt(0.25 / 10000), "theta 0: " + num(e2));

  auto csv = [](unsigned threads) {
    std::ostringstream out;
    for (long long n : {1, 8, 64}) {
      write_protocol_csv_row(out, simulate(pi / 4, n, 30000, kSeed, {threads}),
                             kFullPrecision);
    }
    return out.str();
  };
  const std::string one = csv(1);
  o.require(one == csv(1), "rerun differs");
  o.require(one == csv(3) && one == csv(8), "thread count changes output");
  if (o.pass) {
    o.detail = "pi/4 n=1: " + num(e1) + " (3 sigma " + num(tol1) +
               "), theta 0 n=8: " + num(e2) + ", reruns identical for 1/3/8 threads";
  }
  return o;
}

Outcome helstrom_identity() {
  Outcome o;
  std::mt19937_64 rng(20100101);
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const Eigen::Index dim = trial % 2 ? 4 : 2;
    const auto r = testing_support::random_density(rng, dim);
    const auto s = testing_support::random_density(rng, dim);
    const double td = trace_distance(r, s);
    const auto h = helstrom(r, s);
    worst = std::max(worst, std::abs(h.success_probability - (0.5 + td / 2)));
    const auto pr = measure_probs(r, h.basis);
    const auto ps = measure_probs(s, h.basis);
    double tv = 0.0;
    for (std::size_t k = 0; k < pr.size(); ++k) tv += std::abs(pr[k] - ps[k]) / 2;
    worst = std::max(worst, std::abs(tv - td));
  }
  o.require(worst <= 1e-10, "max deviation " + num(worst));
  if (o.pass) o.detail = "200 pairs in dims 2 and 4, max deviation " + num(worst);
  return o;
}

Outcome dsl_round_trip() {
  Outcome o;
  testing_support::ExprGenerator gen(424242);
  int ok = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto e = gen();
    if (dsl::parse(dsl::format(e)) == e) ++ok;
  }
  o.require(ok == 1000, std::to_string(1000 - ok) + " of 1000 round trips failed");

  double worst = max_diff(distribute(dsl::parse(kPrOutput)).density().matrix(),
                          pr_extend(HybridState::pure(Ket::from_label("01")))
                              .density()
                              .matrix());
  for (double t : grid(0, pi / 2, 33)) {
    worst = std::max(worst, max_diff(distribute(dsl::parse(kSuperposedInputs), t).density().matrix(),
                                     pr_output_state(t).matrix()));
  }
  const double h = 1 / std::sqrt(2.0);
  const std::vector<WeightedKet<double>> atom = {
      {0.5, h * (Ket::from_label("00") + Ket::from_label("10"))},
      {0.5, h * (Ket::from_label("01") + Ket::from_label("11"))}};
  worst = std::max(worst, max_diff(distribute(dsl::parse(kAtom)).density().matrix(),
                                   density_from_mixture(atom).matrix()));
  o.require(worst <= 1e-12, "reference expression density mismatch " + num(worst));
  if (o.pass) {
    o.detail = "1000/1000 round trips, three reference expressions within " + num(worst);
  }
  return o;
}

Outcome locality_lp() {
  Outcome o;
  auto accepted = [&](const ConditionalBox& box, const std::string& name) {
    const auto r = is_local(box);
    o.require(r.local, name + " rejected");
    double sum = 0.0, low = 0.0;
    for (double w : r.weights) {
      sum += w;
      low = std::min(low, w);
    }
    o.require(low >= -1e-12 && std::abs(sum - 1.0) <= 1e-9, name + " weights not convex");
    const auto rebuilt = local_mixture(r.weights);
    double gap = 0.0;
    for (std::size_t i = 0; i < box.table().size(); ++i)
      gap = std::max(gap, std::abs(rebuilt.table()[i] - box.table()[i]));
    o.require(gap <= 1e-9, name + " reconstruction gap " + num(gap));
    return gap;
  };
  const double g1 = accepted(uniform_box(), "uniform");
  const double g2 = accepted(mix(pr_box(), uniform_box(), 0.5), "PR/uniform mix");
  const auto pr = is_local(pr_box());
  o.require(!pr.local, "PR box accepted");
  if (o.pass) {
    o.detail = "reconstruction gaps " + num(g1) + ", " + num(g2) +
               "; PR distance " + num(pr.distance);
  }
  return o;
}

struct Criterion {
  const char* name;
  std::function<Outcome()> run;
};

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> all = {
      {"PR-box fidelity", pr_box_fidelity},
      {"quantum sanity", quantum_sanity},
      {"rewrite equivalence", rewrite_equivalence},
      {"signaling curve", signaling_curve},
      {"dynamics audit", audit_criterion},
      {"repetition convergence", repetition_convergence},
      {"Monte Carlo consistency", monte_carlo_consistency},
      {"Helstrom identity", helstrom_identity},
      {"DSL round trip", dsl_round_trip},
      {"locality LP", locality_lp},
  };
  return all;
}

}  // namespace

int main(int argc, char** argv) {
  const auto& all = criteria();
  std::size_t first = 0, last = all.size();
  if (argc > 1) {
    long long id = 0;
    try {
      id = parse_integer(argv[1]);
    } catch (const std::exception&) {
    }
    if (id < 1 || id > static_cast<long long>(all.size())) {
      std::fprintf(stderr, "usage: %s [criterion 1-%zu]\n", argv[0], all.size());
      return 2;
    }
    first = static_cast<std::size_t>(id - 1);
    last = first + 1;
  }
  int failed = 0;
  for (std::size_t i = first; i < last; ++i) {
    Outcome o;
    try {
      o = all[i].run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s C%zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, all[i].name,
                o.detail.c_str());
    failed += !o.pass;
  }
  return failed ? 1 : 0;
}
