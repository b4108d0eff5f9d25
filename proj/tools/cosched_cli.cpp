// Copyright 2026 The cosched Authors
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

// cosched: run, compare and inspect coordinated-scheduling experiments.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cosched/cosched.hpp"
#include "cosched/results_io.hpp"

namespace {

using namespace cosched;

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> scheduler;
  std::optional<std::size_t> m_tilde;
  std::optional<std::size_t> m_prime;
  std::optional<std::size_t> drops;
  std::optional<std::size_t> ttis;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--seed", seed, "Base RNG seed");
    cmd->add_option("--scheduler", scheduler, "noncoop_pfs | cs_ilp | cs_ga | cs_gg");
    cmd->add_option("--m-tilde", m_tilde, "Muting breadth of cs_gg (1..M-1)");
    cmd->add_option("--m-prime", m_prime, "Strongest interferers per UE (0..M-1)");
    cmd->add_option("--drops", drops, "Number of drops");
    cmd->add_option("--ttis", ttis, "TTIs per drop");
  }

  SimConfig apply(SimConfig c) const {
    if (seed) c.seed = *seed;
    if (scheduler) c.scheduler = parse_scheduler(*scheduler);
    if (m_tilde) c.m_tilde = *m_tilde;
    if (m_prime) c.m_prime = *m_prime;
    if (drops) c.drops = *drops;
    if (ttis) c.ttis = *ttis;
    c.validate();
    return c;
  }
};

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  return out;
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    open_output(path) << text;
  }
}

std::string csv_path_for(const std::string& json_path) {
  std::filesystem::path p(json_path);
  return (p.parent_path() / (p.stem().string() + "_ues.csv")).string();
}

void print_table(const std::vector<MetricsSummary>& results) {
  std::printf("%-12s %12s %12s %12s %12s %10s\n", "scheduler", "geo_mean", "cell_edge",
              "norm_geo", "norm_edge", "muted");
  for (const auto& s : results) {
    std::printf("%-12s %12.5g %12.5g %12.4f %12.4f %10.4f\n",
                std::string(to_string(s.scheduler)).c_str(), s.geo_mean, s.cell_edge,
                s.normalized_geo_mean, s.normalized_cell_edge, s.muted_fraction);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coordinated scheduling with muting for multi-cell OFDMA downlink"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  std::size_t workers = 1;
  Overrides overrides;

  auto* run = app.add_subcommand("run", "Run one scheduler and write a JSON summary");
  run->add_option("config", config_path, "Config file (JSON)")->required()->check(CLI::ExistingFile);
  run->add_option("--out", out_path, "JSON output path; per-UE CSV goes next to it");
  run->add_option("--workers", workers, "Parallel drop workers")->check(CLI::PositiveNumber);
  overrides.add_to(run);

  std::string scheduler_list = "noncoop_pfs,cs_ilp,cs_ga,cs_gg";
  auto* compare = app.add_subcommand("compare", "Run several schedulers on the same drops");
  compare->add_option("config", config_path, "Config file (JSON)")->required()->check(CLI::ExistingFile);
  compare->add_option("--schedulers", scheduler_list,
                      "Comma-separated list; the first one is the normalization baseline");
  compare->add_option("--out", out_path, "JSON output path; per-UE CSV goes next to it");
  compare->add_option("--workers", workers, "Parallel drop workers")->check(CLI::PositiveNumber);
  overrides.add_to(compare);

  std::size_t drop_index = 0;
  std::size_t prb = 0;
  auto* dump = app.add_subcommand("dump-reports", "Write the CSI reports of one drop as CSV");
  dump->add_option("config", config_path, "Config file (JSON)")->required()->check(CLI::ExistingFile);
  dump->add_option("--drop", drop_index, "Drop index");
  dump->add_option("--out", out_path, "CSV output path (default stdout)");
  overrides.add_to(dump);

  auto* dump_sub = app.add_subcommand("dump-subproblem",
                                      "Write the reduced per-PRB program of the first TTI");
  dump_sub->add_option("config", config_path, "Config file (JSON)")->required()->check(CLI::ExistingFile);
  dump_sub->add_option("--drop", drop_index, "Drop index");
  dump_sub->add_option("--prb", prb, "PRB index");
  dump_sub->add_option("--out", out_path, "Output path (default stdout)");
  overrides.add_to(dump_sub);

  CLI11_PARSE(app, argc, argv);

  try {
    const SimConfig config = overrides.apply(load_config(config_path));

    if (run->parsed() || compare->parsed()) {
      std::vector<MetricsSummary> results;
      if (run->parsed()) {
        results.push_back(run_experiment(config, workers));
      } else {
        std::vector<SchedulerKind> kinds;
        std::stringstream ss(scheduler_list);
        for (std::string item; std::getline(ss, item, ',');) {
          if (!item.empty()) kinds.push_back(parse_scheduler(item));
        }
        results = run_comparison(config, kinds, workers);
        print_table(results);
      }
      const auto doc = results_document(config, results).dump(2) + "\n";
      if (out_path.empty()) {
        if (run->parsed()) std::cout << doc;
      } else {
        emit(out_path, doc);
        auto csv = open_output(csv_path_for(out_path));
        write_per_ue_csv(csv, results);
      }
      return 0;
    }

    const Drop net = generate_drop(config, derive_seed(config.seed, drop_index));
    const auto reports = generate_reports(net.scenario, net.conn, net.interferers,
                                          config.rate_mapper());
    std::ostringstream text;
    if (dump->parsed()) {
      write_reports_csv(text, reports);
    } else {
      if (prb >= net.scenario.num_prb()) throw ConfigError("--prb out of range");
      const PfState state(net.scenario.num_ue(), config.beta, config.rate_floor);
      const auto unique = build_unique_sets(net.conn, reports);
      const auto reduced = reduce_candidates(unique, reports, state, prb);
      write_subproblem(text, build_subproblem(reduced, reports, net.conn, state));
    }
    emit(out_path, text.str());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
