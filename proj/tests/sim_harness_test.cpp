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

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "cosched/cosched.hpp"
#include "cosched/results_io.hpp"
#include "test_support.hpp"

namespace cosched {
namespace {

SimConfig small_config(SchedulerKind kind) {
  SimConfig c;
  c.scheduler = kind;
  c.channel.num_macro = 3;
  c.channel.num_ue = 9;
  c.channel.num_prb = 3;
  c.drops = 3;
  c.ttis = 25;
  c.seed = 99;
  return c;
}

TEST(GenerateChannel, SameSeedSameScenario) {
  ChannelConfig cfg;
  const auto a = generate_channel(cfg, 4);
  const auto b = generate_channel(cfg, 4);
  const auto c = generate_channel(cfg, 5);
  EXPECT_EQ(a.scenario.gain_tensor(), b.scenario.gain_tensor());
  EXPECT_NE(a.scenario.gain_tensor(), c.scenario.gain_tensor());
  EXPECT_EQ(a.scenario.num_bs(), 3u);
  EXPECT_EQ(a.scenario.num_ue(), 30u);
  EXPECT_EQ(a.scenario.num_prb(), 10u);
}

TEST(GenerateChannel, HotspotUesClusterAroundPico) {
  ChannelConfig cfg;
  cfg.num_macro = 1;
  cfg.num_pico = 1;
  cfg.num_ue = 30;
  const auto drop = generate_channel(cfg, 8);
  const auto pico = drop.bs[1].position;
  EXPECT_EQ(drop.bs[1].cls, BsClass::pico);
  EXPECT_NEAR(distance(drop.bs[0].position, pico), cfg.pico_offset_m, 1e-9);
  int near = 0;
  for (const auto& u : drop.ue) near += distance(u.position, pico) <= cfg.hotspot_radius_m;
  EXPECT_GE(near, 20);
  for (std::size_t n = 0; n < 20; ++n) {
    EXPECT_LE(distance(drop.ue[n].position, pico), cfg.hotspot_radius_m);
  }
}

TEST(GenerateChannel, NoiseModes) {
  ChannelConfig cfg;
  cfg.noiseless = true;
  EXPECT_EQ(cfg.noise_power_mw(), kNoiselessPowerMw);
  cfg.noiseless = false;
  // -174 dBm/Hz over 180 kHz plus 9 dB: about -112.4 dBm.
  EXPECT_NEAR(linear_to_db(cfg.noise_power_mw()), -174.0 + 10.0 * std::log10(180e3) + 9.0, 1e-9);
}

TEST(GenerateChannel, ExternalRingAddsInterference) {
  ChannelConfig cfg;
  cfg.out_of_cluster_ring = true;
  const auto drop = generate_channel(cfg, 3);
  // Three sites around the origin have nine lattice neighbours.
  EXPECT_EQ(drop.external_sites.size(), 9u);
  for (UeIndex n = 0; n < drop.scenario.num_ue(); ++n) {
    EXPECT_GT(drop.scenario.out_of_cluster(n, 0), 0.0);
  }
  cfg.out_of_cluster_ring = false;
  EXPECT_TRUE(generate_channel(cfg, 3).external_sites.empty());
}

TEST(GenerateChannel, BadGeometryRejected) {
  ChannelConfig cfg;
  cfg.num_macro = 0;
  EXPECT_THROW(generate_channel(cfg, 1), ConfigError);
  cfg.num_macro = 2;
  cfg.macro_positions = {{0.0, 0.0}};
  EXPECT_THROW(generate_channel(cfg, 1), ConfigError);
  cfg.macro_positions.clear();
  cfg.hotspot_fraction = 1.5;
  EXPECT_THROW(generate_channel(cfg, 1), ConfigError);
}

TEST(GenerateDrop, RangeExpansionIrrelevantWithoutPicos) {
  auto c = small_config(SchedulerKind::noncoop_pfs);
  const auto a = generate_drop(c, 7);
  c.cre_offset_db = 40.0;
  const auto b = generate_drop(c, 7);
  EXPECT_EQ(a.conn, b.conn);
}

TEST(GenerateDrop, GainTensorReplacesChannel) {
  auto c = small_config(SchedulerKind::noncoop_pfs);
  c.channel.num_macro = 2;
  c.m_prime = 1;
  c.gains = GainTensor{2, 2, 1, {1e-9, 1e-11, 1e-12, 1e-10}};
  const auto d = generate_drop(c, 1);
  EXPECT_EQ(d.conn.serving(0), 0u);
  EXPECT_EQ(d.conn.serving(1), 1u);
  EXPECT_EQ(d.scenario.gain(1, 1, 0), 1e-10);
}

TEST(CellEdge, LowestFivePercent) {
  std::vector<double> v(20, 10.0);
  v[7] = 0.0;
  EXPECT_EQ(cell_edge_throughput(v), 0.0);
  const std::vector<double> same(13, 2.5);
  EXPECT_EQ(cell_edge_throughput(same), 2.5);
  std::vector<double> hundred(100);
  for (std::size_t i = 0; i < 100; ++i) hundred[i] = static_cast<double>(99 - i);
  EXPECT_DOUBLE_EQ(cell_edge_throughput(hundred), 2.0);  // mean of 0..4
  EXPECT_THROW(cell_edge_throughput(std::vector<double>{}), DomainError);
}

TEST(GeometricMean, Definition) {
  EXPECT_DOUBLE_EQ(geometric_mean(std::vector<double>{2.0, 8.0}), 4.0);
  EXPECT_DOUBLE_EQ(geometric_mean(std::vector<double>{3.0, 3.0, 3.0}), 3.0);
  EXPECT_DOUBLE_EQ(geometric_mean(std::vector<double>{0.0, 1.0}, 1e-6), std::sqrt(1e-6));
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 5.0);
  for (int rep = 0; rep < 100; ++rep) {
    std::vector<double> v(10);
    for (auto& x : v) x = u(rng) + 1e-3;
    const double mean = std::accumulate(v.begin(), v.end(), 0.0) / 10.0;
    EXPECT_LE(geometric_mean(v), mean * (1.0 + 1e-12));
  }
}

TEST(MutedFraction, Extremes) {
  std::vector<SchedulingDecision> none(3, SchedulingDecision(2, 2, 2));
  EXPECT_EQ(muted_fraction(none), 0.0);
  std::vector<SchedulingDecision> all(2, SchedulingDecision(2, 2, 2));
  for (auto& d : all) {
    for (BsIndex m = 0; m < 2; ++m) {
      for (PrbIndex l = 0; l < 2; ++l) d.set_muted(m, l, true);
    }
  }
  EXPECT_EQ(muted_fraction(all), 1.0);
  EXPECT_THROW(muted_fraction(std::span<const SchedulingDecision>{}), DomainError);
}

TEST(RunDrop, SingleTtiIsOneRecursionStep) {
  auto c = small_config(SchedulerKind::noncoop_pfs);
  c.ttis = 1;
  std::vector<double> realized;
  const auto r = run_drop(c, 0, [&](const TtiContext& ctx) { realized = ctx.result.ue_rate; });
  ASSERT_EQ(realized.size(), r.throughput.size());
  for (std::size_t n = 0; n < realized.size(); ++n) {
    EXPECT_DOUBLE_EQ(r.throughput[n],
                     std::max(c.beta * c.rate_floor + (1.0 - c.beta) * realized[n], c.rate_floor));
  }
  EXPECT_EQ(r.muted_slots, 0u);
}

TEST(RunExperiment, NoncoopNeverMutesAndSelfNormalizes) {
  const auto c = small_config(SchedulerKind::noncoop_pfs);
  const auto res = run_comparison(c, {SchedulerKind::noncoop_pfs, SchedulerKind::noncoop_pfs});
  EXPECT_EQ(res[0].muted_fraction, 0.0);
  EXPECT_EQ(res[1].normalized_geo_mean, 1.0);
  EXPECT_EQ(res[1].normalized_cell_edge, 1.0);
  EXPECT_LE(res[0].geo_mean, res[0].mean);
}

TEST(RunExperiment, IlpMatchesBruteForceEveryTti) {
  auto c = small_config(SchedulerKind::cs_ilp);
  c.channel.num_ue = 7;
  std::size_t checked = 0;
  run_experiment(c, 1, [&](const TtiContext& ctx) {
    for (PrbIndex l = 0; l < ctx.reports.num_prb(); ++l) {
      PrbDecision d(ctx.network.conn.num_bs());
      d.muted = ctx.decision.muting_column(l);
      for (UeIndex n = 0; n < ctx.decision.num_ue(); ++n) {
        if (ctx.decision.assigned(n, l)) d.assigned[ctx.network.conn.serving(n)] = n;
      }
      const auto oracle = testing::brute_force_prb(ctx.reports, ctx.network.conn, ctx.state, l);
      EXPECT_EQ(prb_objective(ctx.reports, d, ctx.state, l), oracle.objective);
      ++checked;
    }
  });
  EXPECT_EQ(checked, c.drops * c.ttis * c.channel.num_prb);
}

TEST(RunExperiment, PerTtiDominance) {
  const auto c = small_config(SchedulerKind::noncoop_pfs);
  run_experiment(c, 1, [&](const TtiContext& ctx) {
    const auto& conn = ctx.network.conn;
    const auto unique = build_unique_sets(conn, ctx.reports);
    for (PrbIndex l = 0; l < ctx.reports.num_prb(); ++l) {
      const double noncoop = evaluate_column(ctx.reports, conn, ctx.state, l, BsSet{}).objective;
      const auto ga = cs_greedy(ctx.reports, conn, ctx.state, l, GreedyConfig::for_cluster(3, 1));
      const auto gg = cs_greedy(ctx.reports, conn, ctx.state, l, GreedyConfig::for_cluster(3, 2));
      const auto ilp = cs_ilp_prb(unique, ctx.reports, conn, ctx.state, l);
      EXPECT_LE(noncoop, ga.objective);
      EXPECT_LE(ga.objective, gg.objective);
      EXPECT_LE(gg.objective, ilp.objective);
    }
  });
}

TEST(RunExperiment, WorkerCountDoesNotChangeResults) {
  for (auto kind : {SchedulerKind::noncoop_pfs, SchedulerKind::cs_ilp, SchedulerKind::cs_ga,
                    SchedulerKind::cs_gg}) {
    const auto c = small_config(kind);
    const auto one = results_document(c, {run_experiment(c, 1)}).dump();
    const auto three = results_document(c, {run_experiment(c, 3)}).dump();
    EXPECT_EQ(one, three) << to_string(kind);
  }
}

TEST(RunExperiment, InvalidConfigRejected) {
  auto c = small_config(SchedulerKind::cs_gg);
  c.m_tilde = 3;
  EXPECT_THROW(run_experiment(c), ConfigError);
  c = small_config(SchedulerKind::cs_ilp);
  c.m_prime = 3;
  EXPECT_THROW(run_experiment(c), ConfigError);
  c = small_config(SchedulerKind::cs_ilp);
  c.ttis = 0;
  EXPECT_THROW(run_experiment(c), ConfigError);
}

TEST(DeriveSeed, DistinctStreams) {
  std::set<std::uint64_t> seen;
  for (std::uint64_t d = 0; d < 1000; ++d) seen.insert(derive_seed(1, d));
  EXPECT_EQ(seen.size(), 1000u);
  EXPECT_EQ(derive_seed(5, 3), derive_seed(5, 3));
}

TEST(SchedulerNames, RoundTrip) {
  for (auto k : {SchedulerKind::noncoop_pfs, SchedulerKind::cs_ilp, SchedulerKind::cs_ga,
                 SchedulerKind::cs_gg}) {
    EXPECT_EQ(parse_scheduler(to_string(k)), k);
  }
  EXPECT_THROW(parse_scheduler("round_robin"), ConfigError);
}

TEST(ConfigJson, RoundTripAndDefaults) {
  const auto j = nlohmann::json::parse(R"({
    "scheduler": "cs_gg", "m_tilde": 1, "mcs": "capped", "noise": "noiseless",
    "out_of_cluster": "fixed_ring", "seed": 17,
    "channel": {"num_macro": 2, "num_pico": 2, "num_ue": 12}
  })");
  const auto c = config_from_json(j);
  EXPECT_EQ(c.scheduler, SchedulerKind::cs_gg);
  EXPECT_TRUE(c.mcs_capped);
  EXPECT_TRUE(c.channel.noiseless);
  EXPECT_TRUE(c.channel.out_of_cluster_ring);
  EXPECT_EQ(c.channel.num_bs(), 4u);
  EXPECT_EQ(c.ttis, 400u);
  EXPECT_EQ(config_to_json(config_from_json(config_to_json(c))), config_to_json(c));
}

TEST(ConfigJson, Errors) {
  EXPECT_THROW(config_from_json(nlohmann::json::parse(R"({"mcs": "huge"})")), ConfigError);
  EXPECT_THROW(config_from_json(nlohmann::json::parse(R"({"noise": "loud"})")), ConfigError);
  EXPECT_THROW(config_from_json(nlohmann::json::parse(R"({"drops": "many"})")), ConfigError);
  EXPECT_THROW(config_from_json(nlohmann::json::parse(R"({"m_prime": 5})")), ConfigError);
  EXPECT_THROW(config_from_json(nlohmann::json::parse(R"({"scheduler": "x"})")), ConfigError);
  EXPECT_THROW(load_config("/nonexistent/config.json"), ConfigError);
}

TEST(ConfigJson, GainTensorFileIsRelativeToConfig) {
  const auto dir = std::filesystem::temp_directory_path() / "cosched_gain_test";
  std::filesystem::create_directories(dir);
  {
    std::ofstream g(dir / "gains.txt");
    write_gain_tensor(g, GainTensor{2, 2, 1, {1e-9, 1e-11, 1e-12, 1e-10}});
    std::ofstream cfg(dir / "cfg.json");
    cfg << R"({"gain_tensor_file": "gains.txt", "m_prime": 1, "channel": {"num_macro": 2}})";
  }
  const auto c = load_config(dir / "cfg.json");
  ASSERT_TRUE(c.gains.has_value());
  EXPECT_EQ(c.num_bs(), 2u);
  std::filesystem::remove_all(dir);
}

TEST(ShippedConfig, LoadsAndValidates) {
  const auto c = load_config(std::filesystem::path(COSCHED_SOURCE_DIR) / "configs" /
                             "table3_unbounded_noiseless.json");
  EXPECT_EQ(c.channel.num_macro, 3u);
  EXPECT_EQ(c.channel.num_ue, 30u);
  EXPECT_TRUE(c.channel.noiseless);
  EXPECT_FALSE(c.mcs_capped);
}

TEST(ResultsIo, SummaryDocumentAndCsv) {
  const auto c = small_config(SchedulerKind::cs_ilp);
  const auto res = run_comparison(c, {SchedulerKind::noncoop_pfs, SchedulerKind::cs_ilp});
  const auto doc = results_document(c, res);
  EXPECT_EQ(doc["schema"], "cosched-summary");
  EXPECT_EQ(doc["version"], kSummarySchemaVersion);
  EXPECT_EQ(doc["results"].size(), 2u);
  EXPECT_EQ(doc["results"][1]["scheduler"], "cs_ilp");
  EXPECT_EQ(doc["results"][1]["per_drop_geo_mean"].size(), c.drops);
  EXPECT_GT(doc["results"][1]["mean_candidates"].get<double>(), 0.0);

  std::ostringstream csv;
  write_per_ue_csv(csv, res);
  std::istringstream in(csv.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "scheduler,drop,ue,serving_bs,throughput");
  std::size_t rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 2 * c.drops * c.channel.num_ue);
}

}  // namespace
}  // namespace cosched
