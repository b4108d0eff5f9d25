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

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

#include "cosched/channel_model.hpp"
#include "cosched/cs_heuristics.hpp"
#include "cosched/cs_ilp.hpp"
#include "cosched/csi.hpp"
#include "cosched/network_model.hpp"
#include "cosched/scheduler_core.hpp"
#include "cosched/types.hpp"

namespace cosched {

enum class SchedulerKind { noncoop_pfs, cs_ilp, cs_ga, cs_gg };

inline std::string_view to_string(SchedulerKind k) {
  switch (k) {
    case SchedulerKind::noncoop_pfs: return "noncoop_pfs";
    case SchedulerKind::cs_ilp: return "cs_ilp";
    case SchedulerKind::cs_ga: return "cs_ga";
    case SchedulerKind::cs_gg: return "cs_gg";
  }
  return "unknown";
}

inline SchedulerKind parse_scheduler(std::string_view name) {
  if (name == "noncoop_pfs" || name == "noncoop") return SchedulerKind::noncoop_pfs;
  if (name == "cs_ilp") return SchedulerKind::cs_ilp;
  if (name == "cs_ga") return SchedulerKind::cs_ga;
  if (name == "cs_gg") return SchedulerKind::cs_gg;
  throw ConfigError("unknown scheduler '" + std::string(name) + "'");
}

inline constexpr double kBoundedMcsCap = 5.4;  // bits/symbol

struct SimConfig {
  SchedulerKind scheduler = SchedulerKind::cs_ilp;
  std::size_t m_tilde = 0;  // 0 selects M-1 for cs_gg
  std::size_t m_prime = 2;
  ChannelConfig channel;
  std::optional<GainTensor> gains;  // replaces the synthetic channel when set
  std::size_t drops = 20;
  std::size_t ttis = 400;
  double beta = kDefaultForgettingFactor;
  double rate_floor = kDefaultRateFloor;
  bool mcs_capped = false;
  double mcs_cap = kBoundedMcsCap;
  double rate_scale = 1.0;
  double cre_offset_db = 0.0;
  std::uint64_t seed = 1;
  std::size_t csi_refresh = 1;  // TTIs between report refreshes

  std::size_t num_bs() const {
    return gains ? gains->num_bs : channel.num_bs();
  }

  std::size_t effective_m_tilde() const {
    if (scheduler == SchedulerKind::cs_ga) return 1;
    return m_tilde == 0 ? num_bs() - 1 : m_tilde;
  }

  RateMapper rate_mapper() const {
    return mcs_capped ? RateMapper::capped(mcs_cap, rate_scale) : RateMapper::unbounded(rate_scale);
  }

  void validate() const {
    if (drops < 1 || ttis < 1 || csi_refresh < 1) {
      throw ConfigError("drops, ttis and csi_refresh must be >= 1");
    }
    const auto m = num_bs();
    if (m < 1) throw ConfigError("need at least one BS");
    if (m_prime > m - 1) throw ConfigError("m_prime must satisfy 0 <= M' <= M-1");
    if (scheduler == SchedulerKind::cs_ga || scheduler == SchedulerKind::cs_gg) {
      const auto mt = effective_m_tilde();
      if (m < 2 || mt < 1 || mt > m - 1) throw ConfigError("m_tilde must satisfy 1 <= m_tilde <= M-1");
    }
    if (!(beta > 0.0 && beta < 1.0)) throw ConfigError("beta must be in (0,1)");
  }
};

struct Drop {
  NetworkScenario scenario;
  ConnectionMatrix conn;
  StrongestInterfererSet interferers;
};

// splitmix64 step: decorrelates per-drop seeds from the base seed.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline Drop generate_drop(const SimConfig& config, std::uint64_t seed) {
  config.validate();
  if (config.gains) {
    const auto& g = *config.gains;
    std::vector<BaseStation> bs(g.num_bs);
    for (std::size_t m = 0; m < g.num_bs; ++m) {
      bs[m].cls = m < config.channel.num_macro ? BsClass::macro : BsClass::pico;
    }
    std::vector<double> tx(g.num_bs * g.num_prb);
    for (std::size_t m = 0; m < g.num_bs; ++m) {
      const double p = db_to_linear(bs[m].cls == BsClass::pico ? config.channel.pico_prb_power_dbm
                                                                : config.channel.macro_prb_power_dbm);
      for (std::size_t l = 0; l < g.num_prb; ++l) tx[m * g.num_prb + l] = p;
    }
    NetworkScenario scenario(std::move(bs), std::vector<UserEquipment>(g.num_ue), g.num_prb,
                             std::move(tx), g.values, config.channel.noise_power_mw());
    auto conn = associate_ues(scenario, config.cre_offset_db);
    auto si = strongest_interferers(scenario, conn, config.m_prime);
    return {std::move(scenario), std::move(conn), std::move(si)};
  }
  auto ch = generate_channel(config.channel, seed);
  auto conn = associate_ues(ch.scenario, config.cre_offset_db);
  auto si = strongest_interferers(ch.scenario, conn, config.m_prime);
  return {std::move(ch.scenario), std::move(conn), std::move(si)};
}

/// What a per-TTI observer sees after the scheduler ran.
struct TtiContext {
  std::size_t drop = 0;
  std::size_t tti = 0;
  const Drop& network;
  const CsiReports& reports;
  const PfState& state;  // state the decision was made with
  const SchedulingDecision& decision;
  const TtiResult& result;
};

using TtiObserver = std::function<void(const TtiContext&)>;

struct DropResult {
  std::vector<double> throughput;  // R_n after the last TTI
  std::vector<BsIndex> serving;
  std::size_t muted_slots = 0;     // sum over (bs, prb, tti) of alpha
  std::size_t total_slots = 0;
  double candidate_sum = 0.0;      // sum of |N'_l| over solved PRBs (cs_ilp)
  std::size_t solved_prbs = 0;
  double objective_sum = 0.0;
};

/// One PRB of one TTI under the configured scheduler.
inline PrbDecision schedule_prb(const SimConfig& config, const UniqueMutingSets& unique,
                                const CsiReports& reports, const ConnectionMatrix& conn,
                                const PfState& state, PrbIndex prb, DropResult& stats) {
  switch (config.scheduler) {
    case SchedulerKind::noncoop_pfs:
      return noncoop_pfs_prb(reports, conn, state, prb);
    case SchedulerKind::cs_ilp: {
      auto r = cs_ilp_prb(unique, reports, conn, state, prb);
      stats.candidate_sum += static_cast<double>(r.candidates);
      ++stats.solved_prbs;
      return std::move(r.decision);
    }
    case SchedulerKind::cs_ga:
    case SchedulerKind::cs_gg: {
      const auto cfg = GreedyConfig::for_cluster(conn.num_bs(), config.effective_m_tilde());
      return cs_greedy(reports, conn, state, prb, cfg).decision;
    }
  }
  throw ConfigError("unknown scheduler");
}

inline DropResult run_drop(const SimConfig& config, std::size_t drop_index,
                           const TtiObserver& observer = {}) {
  const Drop net = generate_drop(config, derive_seed(config.seed, drop_index));
  const auto mapper = config.rate_mapper();
  const auto l_count = net.scenario.num_prb();

  DropResult out;
  out.serving = net.conn.serving_list();
  PfState state(net.scenario.num_ue(), config.beta, config.rate_floor);
  std::optional<CsiReports> reports;
  UniqueMutingSets unique;
  for (std::size_t t = 0; t < config.ttis; ++t) {
    if (t % config.csi_refresh == 0) {
      reports.emplace(generate_reports(net.scenario, net.conn, net.interferers, mapper));
      unique = build_unique_sets(net.conn, *reports);
    }
    SchedulingDecision decision(net.scenario.num_ue(), net.scenario.num_bs(), l_count);
    for (PrbIndex l = 0; l < l_count; ++l) {
      decision.set_prb(l, schedule_prb(config, unique, *reports, net.conn, state, l, out));
    }
    const auto result = evaluate_decision(net.conn, *reports, decision, state);
    if (observer) observer({drop_index, t, net, *reports, state, decision, result});
    out.muted_slots += decision.muted_count();
    out.total_slots += net.scenario.num_bs() * l_count;
    out.objective_sum += result.objective;
    state = update_avg_throughput(state, result.ue_rate);
  }
  out.throughput = state.averages();
  return out;
}

/// Mean of the lowest ceil(5% * N) values.
inline double cell_edge_throughput(std::span<const double> per_ue) {
  if (per_ue.empty()) throw DomainError("cell-edge throughput of an empty vector");
  std::vector<double> sorted(per_ue.begin(), per_ue.end());
  std::sort(sorted.begin(), sorted.end());
  const auto count = static_cast<std::size_t>(
      std::ceil(0.05 * static_cast<double>(sorted.size()) - 1e-12));
  const auto k = std::max<std::size_t>(count, 1);
  return std::accumulate(sorted.begin(), sorted.begin() + static_cast<long>(k), 0.0) /
         static_cast<double>(k);
}

/// exp(mean(log(max(x, floor)))).
inline double geometric_mean(std::span<const double> per_ue, double floor = kDefaultRateFloor) {
  if (per_ue.empty()) throw DomainError("geometric mean of an empty vector");
  double acc = 0.0;
  for (double x : per_ue) acc += std::log(std::max(x, floor));
  return std::exp(acc / static_cast<double>(per_ue.size()));
}

inline double muted_fraction(std::span<const SchedulingDecision> decisions) {
  if (decisions.empty()) throw DomainError("muted fraction needs at least one TTI");
  std::size_t muted = 0, total = 0;
  for (const auto& d : decisions) {
    muted += d.muted_count();
    total += d.num_bs() * d.num_prb();
  }
  return static_cast<double>(muted) / static_cast<double>(total);
}

struct MetricsSummary {
  SchedulerKind scheduler = SchedulerKind::noncoop_pfs;
  double cell_edge = 0.0;
  double geo_mean = 0.0;
  double mean = 0.0;
  double muted_fraction = 0.0;
  double mean_candidates = 0.0;  // average |N'_l| (cs_ilp only)
  std::vector<double> per_drop_geo_mean;
  std::vector<double> per_drop_cell_edge;
  std::vector<DropResult> drops;
  // Ratios against a baseline run; 1.0 when not compared.
  double normalized_geo_mean = 1.0;
  double normalized_cell_edge = 1.0;
};

inline MetricsSummary summarize(const SimConfig& config, std::vector<DropResult> drops) {
  MetricsSummary s;
  s.scheduler = config.scheduler;
  std::vector<double> all;
  std::size_t muted = 0, total = 0, solved = 0;
  double candidates = 0.0;
  for (const auto& d : drops) {
    all.insert(all.end(), d.throughput.begin(), d.throughput.end());
    s.per_drop_geo_mean.push_back(geometric_mean(d.throughput, config.rate_floor));
    s.per_drop_cell_edge.push_back(cell_edge_throughput(d.throughput));
    muted += d.muted_slots;
    total += d.total_slots;
    candidates += d.candidate_sum;
    solved += d.solved_prbs;
  }
  s.cell_edge = cell_edge_throughput(all);
  s.geo_mean = geometric_mean(all, config.rate_floor);
  s.mean = std::accumulate(all.begin(), all.end(), 0.0) / static_cast<double>(all.size());
  s.muted_fraction = total ? static_cast<double>(muted) / static_cast<double>(total) : 0.0;
  s.mean_candidates = solved ? candidates / static_cast<double>(solved) : 0.0;
  s.drops = std::move(drops);
  return s;
}

/// Runs all drops (in parallel when workers > 1) and aggregates in drop
/// order, so the result does not depend on the worker count.
inline MetricsSummary run_experiment(const SimConfig& config, std::size_t workers = 1,
                                     const TtiObserver& observer = {}) {
  config.validate();
  std::vector<DropResult> results(config.drops);
  workers = std::clamp<std::size_t>(workers, 1, config.drops);
  if (workers == 1) {
    for (std::size_t d = 0; d < config.drops; ++d) results[d] = run_drop(config, d, observer);
    return summarize(config, std::move(results));
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::mutex observer_mutex;
  TtiObserver guarded;
  if (observer) {
    guarded = [&](const TtiContext& ctx) {
      std::lock_guard lock(observer_mutex);
      observer(ctx);
    };
  }
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t d = next++; d < config.drops; d = next++) {
          try {
            results[d] = run_drop(config, d, guarded);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
  return summarize(config, std::move(results));
}

/// Runs every scheduler on the same drops and normalizes against the first.
inline std::vector<MetricsSummary> run_comparison(SimConfig config,
                                                  const std::vector<SchedulerKind>& schedulers,
                                                  std::size_t workers = 1) {
  if (schedulers.empty()) throw ConfigError("comparison needs at least one scheduler");
  std::vector<MetricsSummary> out;
  for (auto k : schedulers) {
    config.scheduler = k;
    out.push_back(run_experiment(config, workers));
  }
  const auto& base = out.front();
  for (auto& s : out) {
    s.normalized_geo_mean = s.geo_mean / base.geo_mean;
    s.normalized_cell_edge = s.cell_edge / base.cell_edge;
  }
  return out;
}

}  // namespace cosched
