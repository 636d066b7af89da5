// Copyright 2026 the recsettle authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND,  either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// recsettle: command-line settlement engine for renewable energy
// communities.  Subcommands: settle, keys, bill, feasibility, sweep, bench,
// oracle.  Every run that writes artifacts also writes a manifest with
// content hashes so results can be audited and reproduced byte for byte.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rec/billing.hpp"
#include "rec/contracts.hpp"
#include "rec/csv.hpp"
#include "rec/feasibility.hpp"
#include "rec/keygen.hpp"
#include "rec/lp/mps.hpp"
#include "rec/manifest.hpp"
#include "rec/metering.hpp"
#include "rec/oracle.hpp"
#include "rec/settlement.hpp"
#include "rec/synthetic.hpp"
#include "rec/version.hpp"

namespace {

namespace fs = std::filesystem;

// Inputs shared by the data-driven subcommands; `out` collects artifacts.
struct Inputs {
  std::string meters;
  std::string production;
  bool signed_input = false;
  std::string prices;
  std::string strategy = "proportional-static";
  std::string keys_file;
  double max_deviation = 1.0;
  double ssr_floor = 0.0;
  std::string out_dir = "out";
  int threads = 0;
  bool decomposed = false;
  std::string mps_path;
  std::string config;
};

// Applies config-file values to options the command line left untouched.
struct ConfigBinding {
  CLI::Option* option;
  std::string key;
  std::function<void(const nlohmann::json&)> apply;
};

struct BoundApp {
  CLI::App* cmd = nullptr;
  std::vector<ConfigBinding> bindings;

  void bind(CLI::Option* option, std::string key,
            std::function<void(const nlohmann::json&)> apply) {
    bindings.push_back({option, std::move(key), std::move(apply)});
  }
};

void add_input_options(BoundApp& app, Inputs& in, bool settlement_flags) {
  CLI::App* cmd = app.cmd;
  app.bind(cmd->add_option("--meters", in.meters,
                           "Consumption CSV (or the signed single-channel file)"),
           "meters", [&in](const nlohmann::json& v) { in.meters = v.get<std::string>(); });
  app.bind(cmd->add_option("--production", in.production,
                           "Production CSV (dual-channel mode)"),
           "production",
           [&in](const nlohmann::json& v) { in.production = v.get<std::string>(); });
  app.bind(cmd->add_flag("--signed", in.signed_input,
                         "Meters file is one signed channel: + consumption, - production"),
           "signed", [&in](const nlohmann::json& v) { in.signed_input = v.get<bool>(); });
  app.bind(cmd->add_option("--prices", in.prices,
                           "Member price JSON, EUR/MWh (buy, sell, local_buy, local_sell, "
                           "deviation, optional ssr_floor)"),
           "prices", [&in](const nlohmann::json& v) { in.prices = v.get<std::string>(); });
  app.bind(cmd->add_option("--keys", in.strategy,
                           "Initial key strategy: uniform | proportional-static | "
                           "proportional-dynamic | explicit"),
           "keys", [&in](const nlohmann::json& v) { in.strategy = v.get<std::string>(); });
  app.bind(cmd->add_option("--keys-file", in.keys_file,
                           "Key CSV for the explicit strategy"),
           "keys-file",
           [&in](const nlohmann::json& v) { in.keys_file = v.get<std::string>(); });
  app.bind(cmd->add_option("--out", in.out_dir, "Artifact directory (default: out)"),
           "out", [&in](const nlohmann::json& v) { in.out_dir = v.get<std::string>(); });
  app.bind(cmd->add_option("--config", in.config,
                           "JSON config file; command-line flags win"),
           "config", [&in](const nlohmann::json& v) { in.config = v.get<std::string>(); });
  if (settlement_flags) {
    app.bind(cmd->add_option("--max-deviation", in.max_deviation,
                             "Uniform key tolerance X in [0,1] (default 1: unrestricted)"),
             "max-deviation",
             [&in](const nlohmann::json& v) { in.max_deviation = v.get<double>(); });
    app.bind(cmd->add_option("--ssr-floor", in.ssr_floor,
                             "Uniform self-supply floor in [0,1] applied to every member"),
             "ssr-floor",
             [&in](const nlohmann::json& v) { in.ssr_floor = v.get<double>(); });
    app.bind(cmd->add_flag("--decomposed", in.decomposed,
                           "Solve each period separately (requires zero SSR floors)"),
             "decomposed",
             [&in](const nlohmann::json& v) { in.decomposed = v.get<bool>(); });
    app.bind(cmd->add_option("--threads", in.threads,
                             "Worker threads for the decomposed path (0 = hardware)"),
             "threads", [&in](const nlohmann::json& v) { in.threads = v.get<int>(); });
    app.bind(cmd->add_option("--mps", in.mps_path,
                             "Also dump the settlement model in MPS format to this path"),
             "mps", [&in](const nlohmann::json& v) { in.mps_path = v.get<std::string>(); });
  }
}

void merge_config(const BoundApp& app, const Inputs& in) {
  if (in.config.empty()) return;
  std::ifstream file(in.config);
  if (!file) throw rec::Error("config", "cannot open config file: " + in.config);
  nlohmann::json doc;
  try {
    file >> doc;
  } catch (const std::exception& e) {
    throw rec::Error("config", "config file " + in.config + ": " + e.what());
  }
  if (!doc.is_object()) throw rec::Error("config", "config root must be a JSON object");
  for (const ConfigBinding& binding : app.bindings) {
    if (binding.option->count() > 0) continue;  // explicit flags win
    auto it = doc.find(binding.key);
    if (it == doc.end()) continue;
    try {
      binding.apply(*it);
    } catch (const std::exception& e) {
      throw rec::Error("config", "config key '" + binding.key + "': " + e.what());
    }
  }
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    bool known = false;
    for (const ConfigBinding& binding : app.bindings) known = known || binding.key == it.key();
    if (!known) throw rec::Error("config", "unknown config key '" + it.key() + "'");
  }
}

rec::MeterSeries load_series(const Inputs& in, std::vector<rec::ManifestEntry>& files) {
  if (in.meters.empty()) throw rec::Error("usage", "--meters is required");
  files.push_back({"input:meters", in.meters, 0});
  if (in.signed_input) {
    if (!in.production.empty()) {
      throw rec::Error("usage", "--signed and --production are mutually exclusive");
    }
    return rec::ingest_signed(in.meters);
  }
  if (in.production.empty()) {
    throw rec::Error("usage", "--production is required unless --signed is given");
  }
  files.push_back({"input:production", in.production, 0});
  return rec::ingest_dual(in.meters, in.production);
}

rec::ContractSet load_prices(const Inputs& in, const rec::MeterSeries& series,
                             std::vector<rec::ManifestEntry>& files) {
  if (in.prices.empty()) throw rec::Error("usage", "--prices is required");
  files.push_back({"input:prices", in.prices, 0});
  rec::ContractSet contracts = [&] {
    try {
      return rec::load_contracts(in.prices, series, in.max_deviation);
    } catch (const rec::InputError& e) {
      // Price-table problems are configuration problems to the operator.
      throw rec::Error("config", e.what());
    }
  }();
  if (in.ssr_floor > 0.0) {
    for (rec::MemberContract& m : contracts.members) m.ssr_floor = in.ssr_floor;
  }
  contracts.validate(series);
  return contracts;
}

rec::KeyMatrix load_keys(const Inputs& in, const rec::MeterSeries& series,
                         std::vector<rec::ManifestEntry>& files) {
  const rec::KeyStrategyKind kind = rec::parse_key_strategy(in.strategy);
  if (kind == rec::KeyStrategyKind::Explicit) {
    if (in.keys_file.empty()) {
      throw rec::Error("usage", "--keys-file is required with --keys explicit");
    }
    files.push_back({"input:keys", in.keys_file, 0});
  }
  return rec::make_keys(kind, series, in.keys_file);
}

std::string out_path(const Inputs& in, const std::string& name) {
  fs::create_directories(in.out_dir);
  return (fs::path(in.out_dir) / name).string();
}

void note_config_input(const Inputs& in, std::vector<rec::ManifestEntry>& files) {
  if (!in.config.empty()) files.push_back({"input:config", in.config, 0});
}

void finish_manifest(const Inputs& in, const std::string& command,
                     std::vector<rec::ManifestEntry> files) {
  for (rec::ManifestEntry& entry : files) entry.hash = rec::hash_file(entry.path);
  rec::write_manifest(out_path(in, "manifest.json"), command, files);
}

nlohmann::ordered_json statistics_json(const rec::lp::Statistics& s) {
  // Timings stay out of the artifacts so identical runs stay byte-identical;
  // they are printed on stdout instead.
  return {{"rows", s.rows},
          {"columns", s.columns},
          {"nonzeros", s.nonzeros},
          {"iterations", s.iterations},
          {"refactorizations", s.refactorizations}};
}

void write_json(const std::string& path, const nlohmann::ordered_json& doc) {
  std::vector<std::string> lines{doc.dump(2)};
  rec::csv::write_lines(path, lines);
}

void print_statistics(const rec::lp::Statistics& s) {
  std::printf("model: rows=%lld cols=%lld nonzeros=%lld\n",
              static_cast<long long>(s.rows), static_cast<long long>(s.columns),
              static_cast<long long>(s.nonzeros));
  std::printf("solve: iterations=%lld refactorizations=%lld build=%.3fs solve=%.3fs\n",
              static_cast<long long>(s.iterations),
              static_cast<long long>(s.refactorizations), s.build_seconds,
              s.solve_seconds);
}

struct SettledRun {
  rec::MeterSeries series;
  rec::ContractSet contracts;
  rec::KeyMatrix initial_keys;
  rec::SettlementResult result;
  std::vector<rec::ManifestEntry> files;
};

SettledRun run_settlement(const Inputs& in) {
  SettledRun run{rec::MeterSeries{}, rec::ContractSet{}, rec::KeyMatrix{},
                 rec::SettlementResult{}, {}};
  note_config_input(in, run.files);
  run.series = load_series(in, run.files);
  run.contracts = load_prices(in, run.series, run.files);
  run.initial_keys = load_keys(in, run.series, run.files);
  if (!in.mps_path.empty()) {
    rec::SettlementModel built =
        rec::build_lp(run.series, run.contracts, run.initial_keys);
    rec::lp::write_mps(built.model, in.mps_path);
    run.files.push_back({"output:mps", in.mps_path, 0});
  }
  rec::SettleOptions options;
  options.decomposed = in.decomposed;
  options.threads = in.threads;
  run.result = rec::settle(run.series, run.contracts, run.initial_keys, options);
  return run;
}

void write_bills_artifacts(const Inputs& in, SettledRun& run) {
  const auto lines = rec::bill(run.series, run.contracts, run.result);
  const auto baseline = rec::baseline_bill(run.series, run.contracts);
  const std::string bills = out_path(in, "bills.csv");
  const std::string bills_baseline = out_path(in, "bills_baseline.csv");
  const std::string savings = out_path(in, "savings.json");
  rec::write_bill_csv(bills, run.series, lines);
  rec::write_bill_csv(bills_baseline, run.series, baseline);
  rec::write_savings_json(savings, rec::savings_report(lines, baseline));
  run.files.push_back({"output:bills", bills, 0});
  run.files.push_back({"output:bills_baseline", bills_baseline, 0});
  run.files.push_back({"output:savings", savings, 0});
}

void write_summary(const Inputs& in, SettledRun& run) {
  const auto lines = rec::bill(run.series, run.contracts, run.result);
  const auto baseline = rec::baseline_bill(run.series, run.contracts);
  const rec::SavingsReport report = rec::savings_report(lines, baseline);
  nlohmann::ordered_json doc;
  doc["status"] = "optimal";
  doc["objective"] = rec::round_money(run.result.objective);
  doc["settled_total"] = rec::round_money(report.settled_total);
  doc["baseline_total"] = rec::round_money(report.baseline_total);
  doc["savings_percent"] = rec::round_money(-report.delta_percent);
  doc["deviation_up_total"] = run.result.deviation_up.sum();
  doc["deviation_down_total"] = run.result.deviation_down.sum();
  doc["ssr"] = nlohmann::ordered_json::object();
  for (Eigen::Index i = 0; i < run.result.ssr.size(); ++i) {
    doc["ssr"][run.series.members[static_cast<std::size_t>(i)]] = run.result.ssr[i];
  }
  doc["model"] = statistics_json(run.result.statistics);
  const std::string path = out_path(in, "summary.json");
  write_json(path, doc);
  run.files.push_back({"output:summary", path, 0});
}

int cmd_settle(const Inputs& in, const std::string& command, bool bills_only) {
  SettledRun run = run_settlement(in);
  if (!bills_only) {
    const std::string initial = out_path(in, "keys_initial.csv");
    const std::string keys = out_path(in, "keys.csv");
    const std::string alloc = out_path(in, "allocation.csv");
    const std::string verified = out_path(in, "verified.csv");
    const std::string sales = out_path(in, "local_sales.csv");
    rec::write_matrix_csv(initial, run.series, run.initial_keys);
    rec::write_matrix_csv(keys, run.series, run.result.keys);
    rec::write_matrix_csv(alloc, run.series, run.result.allocated);
    rec::write_matrix_csv(verified, run.series, run.result.verified);
    rec::write_matrix_csv(sales, run.series, run.result.sold);
    run.files.push_back({"output:keys_initial", initial, 0});
    run.files.push_back({"output:keys", keys, 0});
    run.files.push_back({"output:allocation", alloc, 0});
    run.files.push_back({"output:verified", verified, 0});
    run.files.push_back({"output:local_sales", sales, 0});
  }
  write_bills_artifacts(in, run);
  if (!bills_only) write_summary(in, run);
  finish_manifest(in, command, run.files);

  std::printf("status: optimal\n");
  std::printf("objective: %.4f EUR\n", rec::round_money(run.result.objective));
  double min_ssr = 1.0;
  for (Eigen::Index i = 0; i < run.result.ssr.size(); ++i) {
    min_ssr = std::min(min_ssr, run.result.ssr[i]);
  }
  std::printf("self-supply: min=%.4f mean=%.4f\n", min_ssr, run.result.ssr.mean());
  print_statistics(run.result.statistics);
  std::printf("artifacts: %s\n", in.out_dir.c_str());
  return 0;
}

int cmd_keys(const Inputs& in, const std::string& command) {
  std::vector<rec::ManifestEntry> files;
  note_config_input(in, files);
  const rec::MeterSeries series = load_series(in, files);
  const rec::KeyMatrix keys = load_keys(in, series, files);
  const std::string path = out_path(in, "keys_initial.csv");
  rec::write_matrix_csv(path, series, keys);
  files.push_back({"output:keys_initial", path, 0});
  finish_manifest(in, command, files);
  std::printf("strategy: %s\n", in.strategy.c_str());
  std::printf("wrote %s (%lld periods x %lld members)\n", path.c_str(),
              static_cast<long long>(series.periods()),
              static_cast<long long>(series.member_count()));
  return 0;
}

int cmd_feasibility(const Inputs& in, double tolerance, const std::string& command) {
  std::vector<rec::ManifestEntry> files;
  note_config_input(in, files);
  const rec::MeterSeries series = load_series(in, files);
  const rec::ContractSet contracts = load_prices(in, series, files);
  const rec::KeyMatrix keys = load_keys(in, series, files);
  const rec::FeasibilityResult result =
      rec::max_uniform_ssr(series, contracts, keys, tolerance);

  nlohmann::ordered_json doc;
  doc["max_uniform_ssr"] = result.max_floor;
  doc["tolerance"] = tolerance;
  doc["probes"] = result.probes;
  doc["ssr"] = nlohmann::ordered_json::object();
  for (Eigen::Index i = 0; i < result.ssr.size(); ++i) {
    doc["ssr"][series.members[static_cast<std::size_t>(i)]] = result.ssr[i];
  }
  const std::string path = out_path(in, "feasibility.json");
  write_json(path, doc);
  files.push_back({"output:feasibility", path, 0});
  finish_manifest(in, command, files);

  std::printf("max uniform self-supply floor: %.6f (tolerance %.0e, %d probes)\n",
              result.max_floor, tolerance, result.probes);
  for (Eigen::Index i = 0; i < result.ssr.size(); ++i) {
    std::printf("  %s: %.6f\n", series.members[static_cast<std::size_t>(i)].c_str(),
                result.ssr[i]);
  }
  return 0;
}

int cmd_sweep(const Inputs& in, const std::string& parameter, double from, double to,
              double step, const std::string& command) {
  if (parameter != "max-deviation" && parameter != "ssr-floor") {
    throw rec::Error("usage", "--parameter must be max-deviation or ssr-floor");
  }
  if (!(step > 0.0) || from > to) {
    throw rec::Error("usage", "sweep grid is empty: need --from <= --to and --step > 0");
  }
  std::vector<rec::ManifestEntry> files;
  note_config_input(in, files);
  const rec::MeterSeries series = load_series(in, files);
  const rec::ContractSet base_contracts = load_prices(in, series, files);
  const rec::KeyMatrix keys = load_keys(in, series, files);

  std::vector<std::string> lines;
  lines.push_back(parameter +
                  ",status,objective,min_ssr,mean_ssr,settled_total,baseline_total");
  for (double value = from; value <= to + 1e-12; value += step) {
    rec::ContractSet contracts = base_contracts;
    if (parameter == "max-deviation") {
      contracts.tolerance.setConstant(value);
    } else {
      for (rec::MemberContract& m : contracts.members) m.ssr_floor = value;
    }
    std::string row = rec::csv::format_fixed(value, 6);
    try {
      rec::SettleOptions options;
      options.decomposed = in.decomposed;
      options.threads = in.threads;
      const rec::SettlementResult result = rec::settle(series, contracts, keys, options);
      const auto settled = rec::bill(series, contracts, result);
      const auto baseline = rec::baseline_bill(series, contracts);
      const rec::SavingsReport report = rec::savings_report(settled, baseline);
      row += ",optimal," + rec::csv::format_fixed(rec::round_money(result.objective), 4);
      row += "," + rec::csv::format_fixed(result.ssr.minCoeff(), 6);
      row += "," + rec::csv::format_fixed(result.ssr.mean(), 6);
      row += "," + rec::csv::format_fixed(rec::round_money(report.settled_total), 4);
      row += "," + rec::csv::format_fixed(rec::round_money(report.baseline_total), 4);
    } catch (const rec::SsrInfeasibleError&) {
      row += ",infeasible,,,,,";
    }
    lines.push_back(std::move(row));
  }
  const std::string path = out_path(in, "sweep.csv");
  rec::csv::write_lines(path, lines);
  files.push_back({"output:sweep", path, 0});
  finish_manifest(in, command, files);
  std::printf("wrote %s (%zu rows)\n", path.c_str(), lines.size() - 1);
  return 0;
}

int cmd_bench(int periods, int members, std::uint64_t seed, bool decomposed, int threads,
              double max_deviation) {
  const rec::MeterSeries series = rec::synthetic_community(periods, members, seed);
  rec::MemberContract price;
  price.buy_price = 0.220;
  price.sell_price = 0.060;
  price.local_buy_price = 0.100;
  price.local_sell_price = 0.098;
  price.deviation_price = 0.0001;
  const rec::ContractSet contracts =
      rec::uniform_contracts(series, price, max_deviation, 0.0);
  const rec::KeyMatrix keys = rec::proportional_static_keys(series);
  rec::SettleOptions options;
  options.decomposed = decomposed;
  options.threads = threads;
  const rec::SettlementResult result = rec::settle(series, contracts, keys, options);
  std::printf("T,I,rows,cols,nonzeros,build_s,solve_s\n");
  std::printf("%d,%d,%lld,%lld,%lld,%.3f,%.3f\n", periods, members,
              static_cast<long long>(result.statistics.rows),
              static_cast<long long>(result.statistics.columns),
              static_cast<long long>(result.statistics.nonzeros),
              result.statistics.build_seconds, result.statistics.solve_seconds);
  std::printf("objective: %.4f EUR, iterations: %lld, mode: %s\n",
              rec::round_money(result.objective),
              static_cast<long long>(result.statistics.iterations),
              decomposed ? "decomposed" : "monolithic");
  return 0;
}

int cmd_oracle(const Inputs& in, double step) {
  std::vector<rec::ManifestEntry> files;
  note_config_input(in, files);
  const rec::MeterSeries series = load_series(in, files);
  const rec::ContractSet contracts = load_prices(in, series, files);
  const rec::KeyMatrix keys = load_keys(in, series, files);
  const rec::OracleResult reference = rec::grid_search_settle(series, contracts, keys, step);
  const rec::SettlementResult optimized = rec::settle(series, contracts, keys);
  std::printf("grid objective:   %.8f EUR (%lld points, step %.4f)\n", reference.objective,
              static_cast<long long>(reference.evaluated), step);
  std::printf("solver objective: %.8f EUR\n", optimized.objective);
  std::printf("gap: %.3e (grid bound %.3e)\n",
              reference.objective - optimized.objective, reference.lipschitz * step);
  return 0;
}

std::string joined_command(int argc, char** argv) {
  std::string command;
  for (int n = 0; n < argc; ++n) {
    if (n > 0) command += " ";
    command += argv[n];
  }
  return command;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"recsettle: ex-post settlement engine for renewable energy communities"};
  app.require_subcommand(1);

  Inputs in;
  double tolerance = 1e-4;
  double step = 0.01;
  std::string parameter;
  double from = 0.0, to = 1.0;
  double sweep_step = 0.25;
  int periods = 96, members = 10;
  std::uint64_t seed = 1;
  bool bench_decomposed = false;
  int bench_threads = 0;
  double bench_deviation = 1.0;

  BoundApp settle_app, keys_app, bill_app, feas_app, sweep_app, oracle_app;

  settle_app.cmd = app.add_subcommand(
      "settle", "Solve the settlement and write keys, allocations, bills and summary");
  add_input_options(settle_app, in, true);

  keys_app.cmd = app.add_subcommand("keys", "Compute and write the initial repartition keys");
  add_input_options(keys_app, in, false);

  bill_app.cmd = app.add_subcommand("bill", "Solve the settlement and write only the bills");
  add_input_options(bill_app, in, true);

  feas_app.cmd =
      app.add_subcommand("feasibility", "Find the maximum feasible uniform self-supply floor");
  add_input_options(feas_app, in, true);
  feas_app.cmd->add_option("--tolerance", tolerance, "Bisection tolerance (default 1e-4)");

  sweep_app.cmd = app.add_subcommand(
      "sweep", "Re-solve over a grid of one parameter and tabulate the results");
  add_input_options(sweep_app, in, true);
  sweep_app.cmd->add_option("--parameter", parameter, "max-deviation | ssr-floor")
      ->required();
  sweep_app.cmd->add_option("--from", from, "First grid value (default 0)");
  sweep_app.cmd->add_option("--to", to, "Last grid value (default 1)");
  sweep_app.cmd->add_option("--step", sweep_step, "Grid spacing (default 0.25)");

  CLI::App* bench_cmd = app.add_subcommand(
      "bench", "Time build and solve on a synthetic community of a given size");
  bench_cmd->add_option("--periods", periods, "Metering periods T")->required();
  bench_cmd->add_option("--members", members, "Community size I")->required();
  bench_cmd->add_option("--seed", seed, "Generator seed (default 1)");
  bench_cmd->add_flag("--decomposed", bench_decomposed, "Use the per-period path");
  bench_cmd->add_option("--threads", bench_threads, "Worker threads (0 = hardware)");
  bench_cmd->add_option("--max-deviation", bench_deviation, "Uniform key tolerance");

  oracle_app.cmd = app.add_subcommand(
      "oracle", "Cross-check the solver against the brute-force grid reference");
  add_input_options(oracle_app, in, true);
  oracle_app.cmd->add_option("--step", step, "Key grid resolution (default 0.01)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "ERROR:usage: " << e.what() << "\n";
    return 1;
  }

  const std::string command = joined_command(argc, argv);
  try {
    for (BoundApp* bound :
         {&settle_app, &keys_app, &bill_app, &feas_app, &sweep_app, &oracle_app}) {
      if (bound->cmd->parsed()) merge_config(*bound, in);
    }
    if (settle_app.cmd->parsed()) return cmd_settle(in, command, false);
    if (keys_app.cmd->parsed()) return cmd_keys(in, command);
    if (bill_app.cmd->parsed()) return cmd_settle(in, command, true);
    if (feas_app.cmd->parsed()) return cmd_feasibility(in, tolerance, command);
    if (sweep_app.cmd->parsed()) {
      return cmd_sweep(in, parameter, from, to, sweep_step, command);
    }
    if (bench_cmd->parsed()) {
      return cmd_bench(periods, members, seed, bench_decomposed, bench_threads,
                       bench_deviation);
    }
    if (oracle_app.cmd->parsed()) return cmd_oracle(in, step);
    std::cerr << "ERROR:usage: no subcommand given\n";
    return 1;
  } catch (const rec::SsrInfeasibleError& e) {
    std::cerr << "ERROR:" << e.category() << ": " << e.what() << "\n";
    return 2;
  } catch (const rec::Error& e) {
    std::cerr << "ERROR:" << e.category() << ": " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "ERROR:internal: " << e.what() << "\n";
    return 1;
  }
}
