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

// nlbox command-line driver.

#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>

#include "nlbox/audit.hpp"
#include "nlbox/boxes.hpp"
#include "nlbox/dsl.hpp"
#include "nlbox/errors.hpp"
#include "nlbox/hybrid.hpp"
#include "nlbox/io.hpp"
#include "nlbox/protocol.hpp"
#include "nlbox/quantum.hpp"

namespace {

using namespace nlbox;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitValidation = 2;
constexpr std::uint64_t kFallbackSeed = 0x5EED2010;
constexpr const char* kSeedEnv = "NLBOX_SEED";

// Thrown for bad invocations that CLI11 cannot see (bad box files, ranges).
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  int digits = kFullPrecision;
  double tol = kDefaultTolerance;
  bool degrees = false;
  std::string out_path;
  std::string box = "pr";
  double theta = 0.0;
  std::optional<double> theta_min, theta_max;
  int steps = 65;
  long long rounds = 1;
  long long shots = 100000;
  std::uint64_t seed = kFallbackSeed;
  unsigned threads = 0;
  double target = 0.99;
  long long max_search = ProtocolLimits{}.max_search_rounds;
  bool table = false;
  std::string expr;
  std::optional<double> expr_theta;
  bool dump_rho = false;
  bool extend = false;
  bool correlated = false;

  double angle(double value) const {
    return degrees ? value * std::numbers::pi / 180.0 : value;
  }
};

std::uint64_t default_seed() {
  if (const char* env = std::getenv(kSeedEnv)) {
    try {
      return static_cast<std::uint64_t>(parse_integer(env));
    } catch (const std::invalid_argument&) {
      throw UsageError(std::string(kSeedEnv) + " is not an integer");
    }
  }
  return kFallbackSeed;
}

ConditionalBox load_box(const std::string& source) {
  if (source == "pr") return pr_box();
  if (source == "uniform") return uniform_box();
  if (source == "pr-uniform-mix") return mix(pr_box(), uniform_box(), 0.5);
  std::ifstream in(source);
  if (!in) {
    throw UsageError("unknown box '" + source +
                     "' (expected pr, uniform, pr-uniform-mix or a CSV path)");
  }
  try {
    return read_box_csv(in);
  } catch (const std::exception& e) {
    throw UsageError(source + ": " + e.what());
  }
}

std::vector<double> theta_grid(const RunConfig& cfg) {
  if (!cfg.theta_min && !cfg.theta_max) return {cfg.angle(cfg.theta)};
  if (!cfg.theta_min || !cfg.theta_max) {
    throw UsageError("--theta-min and --theta-max must be given together");
  }
  if (cfg.steps < 1) throw UsageError("--steps must be positive");
  const double lo = cfg.angle(*cfg.theta_min);
  const double hi = cfg.angle(*cfg.theta_max);
  if (cfg.steps == 1) return {lo};
  std::vector<double> grid;
  for (int i = 0; i < cfg.steps; ++i)
    grid.push_back(lo + (hi - lo) * i / (cfg.steps - 1));
  return grid;
}

std::string setting_text(const SettingPair& s, char sender, char receiver) {
  std::ostringstream os;
  os << sender << "=" << s.sender_input_0 << "/" << s.sender_input_1 << ", "
     << receiver << "=" << s.receiver_input;
  return os.str();
}

int cmd_verify(const RunConfig& cfg, std::ostream& out) {
  const ConditionalBox box = load_box(cfg.box);
  const auto& s = box.alphabet();
  out << "box: " << cfg.box << " (" << s.alice_inputs << "x" << s.bob_inputs
      << " inputs, " << s.alice_outputs << "x" << s.bob_outputs
      << " outputs)\n";
  try {
    validate(box, cfg.tol);
  } catch (const ValidationError& e) {
    out << "validation: FAILED (" << e.what() << ")\n";
    return kExitValidation;
  }
  out << "validation: OK (min entry " << format_double(box.min_entry(), cfg.digits)
      << ", max normalization error "
      << format_double(box.max_normalization_error(), cfg.digits) << ")\n";
  const auto report = check_no_signaling(box, cfg.tol);
  const bool ok = report.no_signaling(cfg.tol);
  std::string chsh;
  if (s.is_binary()) chsh = "; CHSH = " + format_double(chsh_value(box), cfg.digits);
  if (ok) {
    out << "no-signaling: OK" << chsh << "\n";
    return kExitOk;
  }
  out << "no-signaling: VIOLATED" << chsh << "\n"
      << "a_to_b_violation: " << format_double(report.a_to_b_violation, cfg.digits)
      << " (" << setting_text(report.a_to_b_worst, 'A', 'B') << ")\n"
      << "b_to_a_violation: " << format_double(report.b_to_a_violation, cfg.digits)
      << " (" << setting_text(report.b_to_a_worst, 'B', 'A') << ")\n";
  return kExitValidation;
}

int cmd_chsh(const RunConfig& cfg, std::ostream& out) {
  const ConditionalBox box = load_box(cfg.box);
  validate(box, cfg.tol);
  out << "CHSH = " << format_double(chsh_value(box), cfg.digits) << "\n";
  return kExitOk;
}

int cmd_local(const RunConfig& cfg, std::ostream& out) {
  const ConditionalBox box = load_box(cfg.box);
  const auto result = is_local(box, cfg.tol);
  out << "local: " << (result.local ? "true" : "false") << "\n"
      << "distance: " << format_double(result.distance, cfg.digits) << "\n";
  if (result.local) {
    out << "vertex,a0,a1,b0,b1,weight\n";
    for (int v = 0; v < kDeterministicVertices; ++v) {
      if (result.weights[v] == 0.0) continue;
      out << v << ',' << ((v >> 3) & 1) << ',' << ((v >> 2) & 1) << ','
          << ((v >> 1) & 1) << ',' << (v & 1) << ','
          << format_double(result.weights[v], cfg.digits) << "\n";
    }
  }
  return kExitOk;
}

PrExtendOptions extend_options(const RunConfig& cfg) {
  PrExtendOptions o;
  if (cfg.correlated) o.pairing = Pairing::kCorrelated;
  return o;
}

int cmd_signal(const RunConfig& cfg, std::ostream& out) {
  const double theta = cfg.angle(cfg.theta);
  const auto report = signaling_witness(theta, extend_options(cfg));
  out << "theta: " << format_double(theta, cfg.digits) << "\n"
      << "trace_distance: " << format_double(report.a_to_b_violation, cfg.digits)
      << "\n"
      << "closed_form: " << format_double(std::sin(2 * theta) / 4, cfg.digits)
      << "\n"
      << "helstrom_success: "
      << format_double(report.helstrom_success, cfg.digits) << "\n"
      << "witness_basis: " << (report.plus_minus_witness ? "plus-minus" : "other")
      << "\n";
  for (std::size_t k = 0; k < report.witness_basis.size(); ++k) {
    const auto& v = report.witness_basis[k];
    out << "  e" << k << ":";
    for (Eigen::Index i = 0; i < v.dim(); ++i)
      out << ' ' << format_double(v[i].real(), cfg.digits) << ' '
          << format_double(v[i].imag(), cfg.digits);
    out << "\n";
  }
  return kExitOk;
}

int cmd_scan(const RunConfig& cfg, std::ostream& out) {
  if (!cfg.theta_min || !cfg.theta_max) {
    throw UsageError("scan needs --theta-min and --theta-max");
  }
  const auto options = extend_options(cfg);
  out << "theta,trace_distance,helstrom_success,ab_violation,ba_violation\n";
  for (double theta : theta_grid(cfg)) {
    const auto sig = signaling_witness(theta, options);
    const auto audit = audit_dynamics(theta);
    out << format_double(theta, cfg.digits) << ','
        << format_double(sig.a_to_b_violation, cfg.digits) << ','
        << format_double(sig.helstrom_success, cfg.digits) << ','
        << format_double(audit.a_to_b_violation, cfg.digits) << ','
        << format_double(audit.b_to_a_violation, cfg.digits) << "\n";
  }
  return kExitOk;
}

int cmd_repeat(const RunConfig& cfg, std::ostream& out) {
  const double theta = cfg.angle(cfg.theta);
  ProtocolLimits limits;
  limits.max_search_rounds = cfg.max_search;
  const long long n = min_rounds(theta, cfg.target, limits);
  if (!cfg.table) {
    out << "n = " << n << "\n";
    return kExitOk;
  }
  write_protocol_csv_header(out);
  for (long long k = 1; k <= n; ++k) {
    ProtocolResult r;
    r.theta = theta;
    r.rounds = k;
    r.exact_success = 0.5 + 0.5 * repetition_distance(overlap(theta), k);
    r.seed = cfg.seed;
    write_protocol_csv_row(out, r, cfg.digits);
  }
  return kExitOk;
}

int cmd_simulate(const RunConfig& cfg, std::ostream& out) {
  const auto r = simulate(cfg.angle(cfg.theta), cfg.rounds, cfg.shots, cfg.seed,
                          {cfg.threads});
  write_protocol_csv_header(out);
  write_protocol_csv_row(out, r, cfg.digits);
  return kExitOk;
}

int cmd_audit(const RunConfig& cfg, std::ostream& out) {
  write_audit_csv_header(out);
  for (double theta : theta_grid(cfg))
    write_audit_csv_row(out, audit_dynamics(theta), cfg.digits);
  // Signaling is the finding here, not a failure.
  return kExitOk;
}

int cmd_parse(const RunConfig& cfg, std::ostream& out) {
  StateExpr e = [&] {
    try {
      return dsl::parse(cfg.expr);
    } catch (const ParseError& err) {
      throw UsageError(std::string("parse error: ") + err.what() + "\n  " +
                       cfg.expr + "\n  " + std::string(err.offset(), ' ') + "^");
    }
  }();
  std::optional<double> theta;
  if (cfg.expr_theta) theta = cfg.angle(*cfg.expr_theta);
  out << "expr: " << dsl::format(e) << "\n";
  HybridState state = distribute(e, theta);
  if (cfg.extend) state = pr_extend(state, extend_options(cfg));
  out << "width: " << state.width() << "\n"
      << "branches: " << state.size() << "\n";
  if (state.extrapolated()) out << "note: input superposed on both sides\n";
  std::ostringstream lines;
  write_hybrid(lines, state);
  out << lines.str();
  if (cfg.dump_rho) write_density_csv(out, state.density(), cfg.digits);
  return kExitOk;
}

void add_common(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--digits", cfg.digits, "Significant digits in output")
      ->check(CLI::Range(1, 17));
  sub->add_option("--out", cfg.out_path, "Write output to this file");
  sub->add_flag("--degrees", cfg.degrees, "Angles are given in degrees");
}

void add_tol(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--tol", cfg.tol, "Tolerance")->check(CLI::PositiveNumber);
}

void add_box(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--box", cfg.box,
                  "pr, uniform, pr-uniform-mix, or a CSV file (A,B,a,b,p)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nonlocal boxes with superposed inputs: verification toolkit"};
  app.require_subcommand(1);
  RunConfig cfg;
  try {
    cfg.seed = default_seed();
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  using Handler = int (*)(const RunConfig&, std::ostream&);
  Handler handler = nullptr;
  auto sub = [&](const char* name, const char* help, Handler h) {
    CLI::App* s = app.add_subcommand(name, help);
    s->callback([&handler, h] { handler = h; });
    add_common(s, cfg);
    return s;
  };

  auto* verify = sub("verify", "Check box invariants and no-signaling", cmd_verify);
  add_box(verify, cfg);
  add_tol(verify, cfg);
  auto* chsh = sub("chsh", "CHSH value of a binary box", cmd_chsh);
  add_box(chsh, cfg);
  add_tol(chsh, cfg);
  auto* local = sub("local", "Local polytope membership", cmd_local);
  add_box(local, cfg);
  add_tol(local, cfg);

  auto* signal = sub("signal", "Bob-side signaling witness at one angle", cmd_signal);
  signal->add_option("--theta", cfg.theta, "Alice's rotation angle")->required();
  signal->add_flag("--correlated-pairing", cfg.correlated,
                   "Use the two-branch pairing instead of full distribution");

  auto* scan = sub("scan", "Sweep theta and emit witness/audit CSV", cmd_scan);
  scan->add_option("--theta-min", cfg.theta_min)->required();
  scan->add_option("--theta-max", cfg.theta_max)->required();
  scan->add_option("--steps", cfg.steps)->check(CLI::PositiveNumber);
  scan->add_flag("--correlated-pairing", cfg.correlated,
                 "Use the two-branch pairing for the witness column");

  auto* repeat = sub("repeat", "Rounds needed to reach a success target", cmd_repeat);
  repeat->add_option("--theta", cfg.theta)->required();
  repeat->add_option("--target", cfg.target, "Success probability in (1/2, 1)");
  repeat->add_option("--max-rounds", cfg.max_search, "Search limit")
      ->check(CLI::PositiveNumber);
  repeat->add_flag("--table", cfg.table, "Emit the exact-success CSV up to n");
  repeat->add_option("--seed", cfg.seed, "Recorded in CSV output");

  auto* simulate_cmd = sub("simulate", "Monte Carlo of the repetition protocol", cmd_simulate);
  simulate_cmd->add_option("--theta", cfg.theta)->required();
  simulate_cmd->add_option("-n,--rounds", cfg.rounds)->check(CLI::PositiveNumber);
  simulate_cmd->add_option("--shots", cfg.shots)->check(CLI::PositiveNumber);
  simulate_cmd->add_option("--seed", cfg.seed,
                           std::string("PRNG seed (default from ") + kSeedEnv + ")");
  simulate_cmd->add_option("--threads", cfg.threads, "Worker threads (0 = all cores)");

  auto* audit = sub("audit", "Positivity/normalization/no-signaling audit", cmd_audit);
  audit->add_option("--theta", cfg.theta);
  audit->add_option("--theta-min", cfg.theta_min);
  audit->add_option("--theta-max", cfg.theta_max);
  audit->add_option("--steps", cfg.steps)->check(CLI::PositiveNumber);

  auto* parse = sub("parse", "Parse and distribute a state expression", cmd_parse);
  parse->add_option("--expr", cfg.expr, "Expression, e.g. '1/2 (|00> (+) |11>)'")
      ->required();
  parse->add_option("--theta", cfg.expr_theta, "Binds the symbols c and s");
  parse->add_flag("--dump-rho", cfg.dump_rho, "Print the density operator CSV");
  parse->add_flag("--pr-extend", cfg.extend, "Feed the state through the extended PR box");
  parse->add_flag("--correlated-pairing", cfg.correlated);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  std::ofstream file;
  std::ostream* out = &std::cout;
  if (!cfg.out_path.empty()) {
    file.open(cfg.out_path);
    if (!file) {
      std::cerr << "error: cannot open " << cfg.out_path << "\n";
      return kExitUsage;
    }
    out = &file;
  }
  try {
    return handler(cfg, *out);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}
