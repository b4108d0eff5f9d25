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

#pragma once

// JSON config files and result serialization.
//
// Config keys mirror SimConfig; every key is optional:
//   scheduler, m_tilde, m_prime, drops, ttis, beta, rate_floor,
//   mcs ("unbounded" | "capped"), mcs_cap, rate_scale,
//   noise ("noiseless" | "noisy"), noise_figure_db, noiseless_power_mw,
//   out_of_cluster ("none" | "fixed_ring"), cre_offset_db, seed, csi_refresh,
//   gain_tensor_file, and a "channel" object with num_macro, num_pico,
//   num_ue, num_prb, inter_site_distance_m, pico_offset_m, hotspot_radius_m,
//   hotspot_fraction, shadowing_db, rayleigh_fading, macro_prb_power_dbm,
//   pico_prb_power_dbm, macro_positions ([[x, y], ...]).
//
// Summary output (schema "cosched-summary", version 1):
//   { "schema", "version", "config": {...}, "results": [ {
//       "scheduler", "cell_edge", "geo_mean", "mean", "muted_fraction",
//       "mean_candidates", "normalized_geo_mean", "normalized_cell_edge",
//       "per_drop_geo_mean": [...], "per_drop_cell_edge": [...] } ] }
// Per-UE CSV: scheduler,drop,ue,serving_bs,throughput

#include <filesystem>
#include <fstream>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cosched/sim_harness.hpp"

namespace cosched {

inline constexpr int kSummarySchemaVersion = 1;

inline SimConfig config_from_json(const nlohmann::json& j,
                                  const std::filesystem::path& base_dir = {}) {
  SimConfig c;
  try {
    if (j.contains("scheduler")) c.scheduler = parse_scheduler(j.at("scheduler").get<std::string>());
    c.m_tilde = j.value("m_tilde", c.m_tilde);
    c.m_prime = j.value("m_prime", c.m_prime);
    c.drops = j.value("drops", c.drops);
    c.ttis = j.value("ttis", c.ttis);
    c.beta = j.value("beta", c.beta);
    c.rate_floor = j.value("rate_floor", c.rate_floor);
    c.mcs_cap = j.value("mcs_cap", c.mcs_cap);
    c.rate_scale = j.value("rate_scale", c.rate_scale);
    c.cre_offset_db = j.value("cre_offset_db", c.cre_offset_db);
    c.seed = j.value("seed", c.seed);
    c.csi_refresh = j.value("csi_refresh", c.csi_refresh);

    const auto mcs = j.value("mcs", std::string("unbounded"));
    if (mcs != "unbounded" && mcs != "capped") throw ConfigError("mcs must be unbounded or capped");
    c.mcs_capped = mcs == "capped";

    auto& ch = c.channel;
    const auto noise = j.value("noise", std::string("noisy"));
    if (noise != "noiseless" && noise != "noisy") throw ConfigError("noise must be noiseless or noisy");
    ch.noiseless = noise == "noiseless";
    ch.noise_figure_db = j.value("noise_figure_db", ch.noise_figure_db);
    ch.noiseless_power_mw = j.value("noiseless_power_mw", ch.noiseless_power_mw);

    const auto oc = j.value("out_of_cluster", std::string("none"));
    if (oc != "none" && oc != "fixed_ring") throw ConfigError("out_of_cluster must be none or fixed_ring");
    ch.out_of_cluster_ring = oc == "fixed_ring";

    if (j.contains("channel")) {
      const auto& cj = j.at("channel");
      ch.num_macro = cj.value("num_macro", ch.num_macro);
      ch.num_pico = cj.value("num_pico", ch.num_pico);
      ch.num_ue = cj.value("num_ue", ch.num_ue);
      ch.num_prb = cj.value("num_prb", ch.num_prb);
      ch.inter_site_distance_m = cj.value("inter_site_distance_m", ch.inter_site_distance_m);
      ch.pico_offset_m = cj.value("pico_offset_m", ch.pico_offset_m);
      ch.hotspot_radius_m = cj.value("hotspot_radius_m", ch.hotspot_radius_m);
      ch.hotspot_fraction = cj.value("hotspot_fraction", ch.hotspot_fraction);
      ch.shadowing_db = cj.value("shadowing_db", ch.shadowing_db);
      ch.rayleigh_fading = cj.value("rayleigh_fading", ch.rayleigh_fading);
      ch.macro_prb_power_dbm = cj.value("macro_prb_power_dbm", ch.macro_prb_power_dbm);
      ch.pico_prb_power_dbm = cj.value("pico_prb_power_dbm", ch.pico_prb_power_dbm);
      if (cj.contains("macro_positions")) {
        for (const auto& p : cj.at("macro_positions")) {
          ch.macro_positions.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
        }
      }
    }

    if (j.contains("gain_tensor_file")) {
      std::filesystem::path path = j.at("gain_tensor_file").get<std::string>();
      if (path.is_relative() && !base_dir.empty()) path = base_dir / path;
      std::ifstream in(path);
      if (!in) throw ConfigError("cannot open gain tensor file " + path.string());
      c.gains = read_gain_tensor(in);
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  c.validate();
  return c;
}

inline SimConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return config_from_json(j, path.parent_path());
}

inline nlohmann::json config_to_json(const SimConfig& c) {
  const auto& ch = c.channel;
  nlohmann::json j = {
      {"scheduler", to_string(c.scheduler)},
      {"m_tilde", c.m_tilde},
      {"m_prime", c.m_prime},
      {"drops", c.drops},
      {"ttis", c.ttis},
      {"beta", c.beta},
      {"rate_floor", c.rate_floor},
      {"mcs", c.mcs_capped ? "capped" : "unbounded"},
      {"mcs_cap", c.mcs_cap},
      {"rate_scale", c.rate_scale},
      {"noise", ch.noiseless ? "noiseless" : "noisy"},
      {"noise_figure_db", ch.noise_figure_db},
      {"noiseless_power_mw", ch.noiseless_power_mw},
      {"out_of_cluster", ch.out_of_cluster_ring ? "fixed_ring" : "none"},
      {"cre_offset_db", c.cre_offset_db},
      {"seed", c.seed},
      {"csi_refresh", c.csi_refresh},
      {"channel",
       {{"num_macro", ch.num_macro},
        {"num_pico", ch.num_pico},
        {"num_ue", ch.num_ue},
        {"num_prb", ch.num_prb},
        {"inter_site_distance_m", ch.inter_site_distance_m},
        {"pico_offset_m", ch.pico_offset_m},
        {"hotspot_radius_m", ch.hotspot_radius_m},
        {"hotspot_fraction", ch.hotspot_fraction},
        {"shadowing_db", ch.shadowing_db},
        {"rayleigh_fading", ch.rayleigh_fading},
        {"macro_prb_power_dbm", ch.macro_prb_power_dbm},
        {"pico_prb_power_dbm", ch.pico_prb_power_dbm}}},
  };
  if (!ch.macro_positions.empty()) {
    auto& arr = j["channel"]["macro_positions"] = nlohmann::json::array();
    for (auto p : ch.macro_positions) arr.push_back({p.x, p.y});
  }
  if (c.gains) {
    j["gain_tensor"] = {{"num_ue", c.gains->num_ue}, {"num_bs", c.gains->num_bs},
                        {"num_prb", c.gains->num_prb}};
  }
  return j;
}

inline nlohmann::json summary_to_json(const MetricsSummary& s) {
  return {
      {"scheduler", to_string(s.scheduler)},
      {"cell_edge", s.cell_edge},
      {"geo_mean", s.geo_mean},
      {"mean", s.mean},
      {"muted_fraction", s.muted_fraction},
      {"mean_candidates", s.mean_candidates},
      {"normalized_geo_mean", s.normalized_geo_mean},
      {"normalized_cell_edge", s.normalized_cell_edge},
      {"per_drop_geo_mean", s.per_drop_geo_mean},
      {"per_drop_cell_edge", s.per_drop_cell_edge},
  };
}

inline nlohmann::json results_document(const SimConfig& config,
                                       const std::vector<MetricsSummary>& results) {
  nlohmann::json doc = {{"schema", "cosched-summary"},
                        {"version", kSummarySchemaVersion},
                        {"config", config_to_json(config)},
                        {"results", nlohmann::json::array()}};
  for (const auto& s : results) doc["results"].push_back(summary_to_json(s));
  return doc;
}

inline void write_per_ue_csv(std::ostream& out, const std::vector<MetricsSummary>& results) {
  out << "scheduler,drop,ue,serving_bs,throughput\n";
  const auto old_precision = out.precision(17);
  for (const auto& s : results) {
    for (std::size_t d = 0; d < s.drops.size(); ++d) {
      const auto& drop = s.drops[d];
      for (std::size_t n = 0; n < drop.throughput.size(); ++n) {
        out << to_string(s.scheduler) << ',' << d << ',' << n << ',' << drop.serving[n] << ','
            << drop.throughput[n] << '\n';
      }
    }
  }
  out.precision(old_precision);
}

}  // namespace cosched
