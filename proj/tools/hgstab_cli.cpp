// Copyright 2026 The hgstab Authors
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

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "hgstab/hgstab.hpp"

namespace {

using namespace hgstab;

enum ExitCode { kOk = 0, kVerificationFailed = 1, kInputError = 2, kCapacityError = 3 };

struct Options {
  std::string input;
  std::string out;
  std::string csv;
  int prime = 2;
  std::vector<int> bond_exponents;
  std::size_t trials = 1000;
  std::uint64_t seed = 0;
  double delta = 0.3;
  std::size_t jobs = 0;
  bool quiet = false;
  std::vector<std::string> cut_set;
  double entropy_offset = 0;
};

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot write '" + path + "'");
  f << text;
}

ExperimentConfig make_config(const Options& o, std::vector<int> default_r = {1}) {
  ExperimentConfig c{load_hypergraph(o.input)};
  c.prime = o.prime;
  c.bond_exponents = o.bond_exponents.empty() ? default_r : o.bond_exponents;
  std::sort(c.bond_exponents.begin(), c.bond_exponents.end());
  c.bond_exponents.erase(std::unique(c.bond_exponents.begin(), c.bond_exponents.end()),
                         c.bond_exponents.end());
  c.trials = o.trials;
  c.seed = o.seed;
  c.delta = o.delta;
  c.jobs = o.jobs;
  c.validate();
  return c;
}

std::string fixed(double x, int digits = 4) {
  if (!std::isfinite(x)) return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf");
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, x);
  return buf;
}

int cmd_mincut(const Options& o) {
  const auto h = load_hypergraph(o.input);
  const auto table = mincut_table(h);
  for (auto a : display_order(h)) {
    std::cout << format_subset(h, a) << "  " << table.min_cut(a) << "  " << table.count(a) << '\n';
  }
  if (!o.out.empty()) write_file(o.out, mincut_to_json(h, table).dump(2) + "\n");
  return kOk;
}

int cmd_cut(const Options& o) {
  const auto h = load_hypergraph(o.input);
  std::cout << cut_value(h, o.cut_set) << '\n';
  return kOk;
}

void write_moment_csvs(const WeightedHypergraph& h, const std::vector<MomentReport>& moments,
                       const std::string& prefix) {
  for (const auto& m : moments) {
    write_file(prefix + "_moments_r" + std::to_string(m.bond_exponent) + ".csv",
               moments_csv(h, m));
  }
}

double max_abs_z(const MomentReport& m) {
  double worst = std::abs(m.first_z);
  for (const auto& row : m.second) worst = std::max(worst, std::abs(row.z));
  return worst;
}

int cmd_simulate(const Options& o) {
  const auto config = make_config(o);
  const auto report = simulate(config);
  for (std::size_t i = 0; i < report.moments.size(); ++i) {
    const auto& c = report.concentration.rows[i];
    const auto& m = report.moments[i];
    std::cout << "r=" << c.bond_exponent << "  p_nonzero=" << fixed(c.p_nonzero.mean)
              << "  success=" << fixed(c.success.mean) << " +- " << fixed(c.success.se)
              << "  first_moment_z=" << fixed(m.first_z, 2) << "  max|z|=" << fixed(max_abs_z(m), 2)
              << "  rank_bound_violations=" << c.rank_bound_violations << '\n';
  }
  const std::string out = o.out.empty() ? "report.json" : o.out;
  write_file(out, report_to_json(report).dump(2) + "\n");
  if (!o.csv.empty()) {
    write_moment_csvs(config.hypergraph, report.moments, o.csv);
    write_file(o.csv + "_concentration.csv", concentration_csv(report.concentration));
  }
  if (!o.quiet) std::cout << "report written to " << out << '\n';
  return kOk;
}

int cmd_moments(const Options& o) {
  const auto config = make_config(o);
  const auto moments = estimate_moments(config);
  const auto& h = config.hypergraph;
  Json doc = Json::array();
  for (const auto& m : moments) {
    std::cout << "r=" << m.bond_exponent << "  D_b*tr[Psi]: mean=" << fixed(m.first.mean, 6)
              << " se=" << fixed(m.first.se, 6) << " z=" << fixed(m.first_z, 2) << '\n';
    std::cout << "  A  m  k  mean  exact  se  z   (units of D_b^2 tr[Psi_A^2])\n";
    for (auto a : display_order(h)) {
      const auto& row = m.second[a];
      std::cout << "  " << format_subset(h, a) << "  " << row.min_cut << "  " << row.min_cut_count
                << "  " << fixed(row.scaled.mean, 6) << "  " << fixed(row.exact_scaled, 6) << "  "
                << fixed(row.scaled.se, 6) << "  " << fixed(row.z, 2) << '\n';
    }
    doc.push_back(moments_to_json(h, m));
  }
  if (!o.out.empty()) write_file(o.out, doc.dump(2) + "\n");
  if (!o.csv.empty()) write_moment_csvs(h, moments, o.csv);
  return kOk;
}

int cmd_oracle_check(const Options& o) {
  const auto h = load_hypergraph(o.input);
  const PrimeModulus p(o.prime);
  if (o.trials < 1) throw InputError("trials must be at least 1");
  const std::vector<int> rs = o.bond_exponents.empty() ? std::vector<int>{1} : o.bond_exponents;
  for (int r : rs) {
    const auto result = oracle_check(h, p, r, o.trials, o.seed, o.entropy_offset);
    if (!result.passed()) {
      std::cout << "r=" << r << "  FAIL at seed " << *result.first_failing_seed << ": "
                << result.failure << '\n';
      return kVerificationFailed;
    }
    std::cout << "r=" << r << "  ok  trials=" << result.trials << "  nonzero=" << result.nonzero
              << "  max_trace_err=" << result.max_trace_error
              << "  max_entropy_err=" << result.max_entropy_error << '\n';
  }
  return kOk;
}

int cmd_verify(const Options& o) {
  const auto config = make_config(o);
  const auto& h = config.hypergraph;
  const auto table = mincut_table(h);
  bool ok = true;
  const auto mincut_violations = check_symmetric_submodular(table);
  std::cout << "min-cut function: "
            << (mincut_violations.empty() ? "symmetric and submodular"
                                          : std::to_string(mincut_violations.size()) +
                                                " violations")
            << '\n';
  ok &= mincut_violations.empty();
  const PrimeModulus p(config.prime);
  for (int r : config.bond_exponents) {
    const auto [layout, omega] = build_omega(h, p, r);
    const auto trials = run_trials(layout, omega, config.trials, config.seed,
                                   static_cast<std::uint64_t>(r), config.jobs);
    const auto audit = verify_entropy_vectors(trials, h.terminal_count());
    const auto bound = rank_bound_violations(trials, table, r);
    std::cout << "r=" << r << "  entropy vectors checked=" << audit.checked
              << "  violating=" << audit.violating << "  rank_bound_violations=" << bound;
    if (audit.first_violating_seed) std::cout << "  first_violating_seed=" << *audit.first_violating_seed;
    std::cout << '\n';
    ok &= audit.violating == 0 && bound == 0;
  }
  return ok ? kOk : kVerificationFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hgstab: hypergraph min-cuts and random stabilizer tensor networks"};
  app.require_subcommand(1);
  Options o;

  auto add_input = [&](CLI::App* sub) {
    sub->add_option("input", o.input, "Hypergraph JSON file")->required();
  };
  auto add_numeric = [&](CLI::App* sub, std::size_t default_trials) {
    sub->add_option("-p,--prime", o.prime, "Prime local dimension")->capture_default_str();
    sub->add_option("-r,--bond-exponent", o.bond_exponents,
                    "Bond dimension D = p^r (repeatable; default 1)");
    sub->add_option("-n,--trials", o.trials,
                    "Number of trials (default " + std::to_string(default_trials) + ")");
    sub->add_option("-s,--seed", o.seed, "Master seed")->capture_default_str();
  };
  auto add_jobs = [&](CLI::App* sub) {
    sub->add_option("-j,--jobs", o.jobs, "Worker threads (0 = all cores)")->capture_default_str();
  };

  auto* mincut = app.add_subcommand("mincut", "Print m(A) and k(A) for every terminal subset");
  add_input(mincut);
  mincut->add_option("-o,--out", o.out, "Also write the table as JSON");

  auto* cut = app.add_subcommand("cut", "Print the cut weight c(S)");
  add_input(cut);
  cut->add_option("vertices", o.cut_set, "Vertex ids in S");

  auto* sim = app.add_subcommand("simulate", "Moments and concentration from random projections");
  add_input(sim);
  add_numeric(sim, 1000);
  sim->add_option("--delta", o.delta, "Concentration tolerance")->capture_default_str();
  sim->add_option("-o,--out", o.out, "Report file (default report.json)");
  sim->add_option("--csv", o.csv, "Also write <prefix>_moments_r<r>.csv and <prefix>_concentration.csv");
  sim->add_flag("-q,--quiet", o.quiet, "Only print per-r summary lines");
  add_jobs(sim);

  auto* mom = app.add_subcommand("moments", "First and second moments against exact values");
  add_input(mom);
  add_numeric(mom, 1000);
  mom->add_option("-o,--out", o.out, "Write the moment reports as JSON");
  mom->add_option("--csv", o.csv, "Also write <prefix>_moments_r<r>.csv");
  add_jobs(mom);

  auto* oracle = app.add_subcommand("oracle-check", "Replay trials in the dense engine and compare");
  add_input(oracle);
  add_numeric(oracle, 200);
  oracle->add_option("--inject-entropy-error", o.entropy_offset)->group("");

  auto* verify = app.add_subcommand("verify", "Check entropy vectors and the min-cut function");
  add_input(verify);
  add_numeric(verify, 1000);
  add_jobs(verify);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInputError;
  }

  try {
    const auto* sub = app.get_subcommands().front();
    const std::string name = sub->get_name();
    if (sub->get_option_no_throw("--trials") && sub->count("--trials") == 0) {
      o.trials = name == "oracle-check" ? 200 : 1000;
    }
    if (name == "mincut") return cmd_mincut(o);
    if (name == "cut") return cmd_cut(o);
    if (name == "simulate") return cmd_simulate(o);
    if (name == "moments") return cmd_moments(o);
    if (name == "oracle-check") return cmd_oracle_check(o);
    if (name == "verify") return cmd_verify(o);
  } catch (const ParseError& e) {
    std::cerr << "error: " << o.input << ":" << e.line() << ":" << e.column() << ": " << e.what()
              << '\n';
    return kInputError;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const CapacityError& e) {
    std::cerr << "capacity exceeded: " << e.what() << '\n';
    return kCapacityError;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kVerificationFailed;
  }
  return kInputError;
}
