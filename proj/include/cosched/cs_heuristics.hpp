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
#include <cstdint>
#include <vector>

#include "cosched/csi.hpp"
#include "cosched/network_model.hpp"
#include "cosched/scheduler_core.hpp"
#include "cosched/types.hpp"

namespace cosched {

/// Generalized greedy muting. m_tilde = 1 mutes one BS per iteration.
struct GreedyConfig {
  std::size_t m_tilde = 1;
  BsSet pool;  // BSs eligible for muting

  static GreedyConfig for_cluster(std::size_t num_bs, std::size_t m_tilde) {
    return {m_tilde, BsSet::first(num_bs)};
  }
};

/// Every subset of the pool with 1..m_tilde members, ordered by size and
/// then lexicographically.
inline std::vector<BsSet> candidate_muting_sets(const GreedyConfig& config,
                                                std::size_t num_bs) {
  if (num_bs < 2 || config.m_tilde < 1 || config.m_tilde > num_bs - 1) {
    throw ConfigError("m_tilde must satisfy 1 <= m_tilde <= M-1");
  }
  if (config.pool.empty()) throw ConfigError("muting candidate pool is empty");
  if (!config.pool.subset_of(BsSet::first(num_bs))) {
    throw ConfigError("muting candidate pool names a BS outside the cluster");
  }
  const auto members = config.pool.members();
  const auto k = members.size();
  std::vector<BsSet> out;
  for (std::uint64_t sub = 1; sub < (std::uint64_t{1} << k); ++sub) {
    if (static_cast<std::size_t>(std::popcount(sub)) > config.m_tilde) continue;
    BsSet s;
    for (std::size_t b = 0; b < k; ++b) {
      if ((sub >> b) & 1U) s.insert(members[b]);
    }
    out.push_back(s);
  }
  std::sort(out.begin(), out.end(), BsSet::canonical_less);
  return out;
}

struct GreedyResult {
  PrbDecision decision;
  double objective = 0.0;
  std::vector<BsSet> trace;  // committed candidate set per iteration
  std::size_t trials = 0;
};

/// Iterative deflation on one PRB: start from no muting, and in every
/// iteration add the candidate set whose muting (on top of the committed
/// one) gives the largest strict increase of the PF sum. Unmuted BSs always
/// re-pick their best UE for the trial column. Committed mutings are never
/// undone.
inline GreedyResult cs_greedy(const CsiReports& reports, const ConnectionMatrix& conn,
                              const PfState& state, PrbIndex prb, const GreedyConfig& config) {
  const auto candidates = candidate_muting_sets(config, conn.num_bs());
  auto current = evaluate_column(reports, conn, state, prb, BsSet{});
  GreedyResult out;
  for (;;) {
    const BsSet committed = current.decision.muted;
    ColumnEvaluation best = current;
    BsSet best_set;
    bool improved = false;
    for (auto c : candidates) {
      const BsSet trial = committed | c;
      if (trial == committed) continue;
      ++out.trials;
      auto eval = evaluate_column(reports, conn, state, prb, trial);
      if (eval.objective > best.objective) {
        best = std::move(eval);
        best_set = c;
        improved = true;
      }
    }
    if (!improved) break;
    current = std::move(best);
    out.trace.push_back(best_set);
  }
  out.decision = std::move(current.decision);
  out.objective = current.objective;
  return out;
}

}  // namespace cosched
