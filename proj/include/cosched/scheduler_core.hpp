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
#include <span>
#include <utility>
#include <vector>

#include "cosched/csi.hpp"
#include "cosched/network_model.hpp"
#include "cosched/types.hpp"

namespace cosched {

inline constexpr double kDefaultForgettingFactor = 0.97;
inline constexpr double kDefaultRateFloor = 1e-6;

/// Exponentially averaged per-UE throughput R_n driving the PF metric.
class PfState {
 public:
  explicit PfState(std::size_t num_ue, double beta = kDefaultForgettingFactor,
                   double floor = kDefaultRateFloor)
      : avg_(num_ue, floor), beta_(beta), floor_(floor) {
    if (!(beta > 0.0 && beta < 1.0)) throw ConfigError("forgetting factor must be in (0,1)");
    if (!(floor > 0.0)) throw ConfigError("throughput floor must be positive");
  }

  PfState(std::vector<double> avg, double beta, double floor) : PfState(avg.size(), beta, floor) {
    for (std::size_t n = 0; n < avg.size(); ++n) avg_[n] = std::max(avg[n], floor_);
  }

  std::size_t num_ue() const noexcept { return avg_.size(); }
  double avg(UeIndex n) const { return avg_.at(n); }
  const std::vector<double>& averages() const noexcept { return avg_; }
  double beta() const noexcept { return beta_; }
  double floor() const noexcept { return floor_; }

  void set_avg(UeIndex n, double value) { avg_.at(n) = std::max(value, floor_); }

 private:
  std::vector<double> avg_;
  double beta_;
  double floor_;
};

inline double pf_metric(double rate, const PfState& state, UeIndex ue) {
  return rate / state.avg(ue);
}

/// R_n(t) = beta R_n(t-1) + (1 - beta) r_n(t-1), floored at R_min.
inline PfState update_avg_throughput(const PfState& state, std::span<const double> realized) {
  if (realized.size() != state.num_ue()) throw ConfigError("realized rate vector size mismatch");
  PfState next = state;
  for (UeIndex n = 0; n < state.num_ue(); ++n) {
    if (!(realized[n] >= 0.0)) throw DomainError("realized rate must be non-negative");
    next.set_avg(n, state.beta() * state.avg(n) + (1.0 - state.beta()) * realized[n]);
  }
  return next;
}

/// Scheduling and muting on a single PRB.
struct PrbDecision {
  std::vector<UeIndex> assigned;  // per BS; kNone when idle or muted
  BsSet muted;

  explicit PrbDecision(std::size_t num_bs = 0) : assigned(num_bs, kNone) {}

  friend bool operator==(const PrbDecision&, const PrbDecision&) = default;
};

/// Binary assignment S (N x L) plus binary muting matrix alpha (M x L).
class SchedulingDecision {
 public:
  SchedulingDecision(std::size_t num_ue, std::size_t num_bs, std::size_t num_prb)
      : num_ue_(num_ue),
        num_bs_(num_bs),
        num_prb_(num_prb),
        assignment_(num_ue * num_prb, 0),
        muting_(num_bs * num_prb, 0) {}

  std::size_t num_ue() const noexcept { return num_ue_; }
  std::size_t num_bs() const noexcept { return num_bs_; }
  std::size_t num_prb() const noexcept { return num_prb_; }

  bool assigned(UeIndex n, PrbIndex l) const { return assignment_.at(n * num_prb_ + l) != 0; }
  bool muted(BsIndex m, PrbIndex l) const { return muting_.at(m * num_prb_ + l) != 0; }
  void set_assigned(UeIndex n, PrbIndex l, bool v) { assignment_.at(n * num_prb_ + l) = v; }
  void set_muted(BsIndex m, PrbIndex l, bool v) { muting_.at(m * num_prb_ + l) = v; }

  BsSet muting_column(PrbIndex l) const {
    BsSet s;
    for (BsIndex m = 0; m < num_bs_; ++m) {
      if (muted(m, l)) s.insert(m);
    }
    return s;
  }

  void set_prb(PrbIndex l, const PrbDecision& d) {
    for (UeIndex n = 0; n < num_ue_; ++n) set_assigned(n, l, false);
    for (BsIndex m = 0; m < num_bs_; ++m) {
      set_muted(m, l, d.muted.contains(m));
      if (m < d.assigned.size() && d.assigned[m] != kNone) set_assigned(d.assigned[m], l, true);
    }
  }

  std::size_t muted_count() const {
    return static_cast<std::size_t>(std::count(muting_.begin(), muting_.end(), 1));
  }

  friend bool operator==(const SchedulingDecision&, const SchedulingDecision&) = default;

 private:
  std::size_t num_ue_;
  std::size_t num_bs_;
  std::size_t num_prb_;
  std::vector<std::uint8_t> assignment_;
  std::vector<std::uint8_t> muting_;
};

struct TtiResult {
  std::vector<double> ue_rate;
  double objective = 0.0;
  double muted_fraction = 0.0;
};

/// Throws FeasibilityError on the first (m, l) with alpha + sum_n c s > 1.
inline void check_linking(const ConnectionMatrix& conn, const SchedulingDecision& d) {
  for (PrbIndex l = 0; l < d.num_prb(); ++l) {
    for (BsIndex m = 0; m < d.num_bs(); ++m) {
      int load = d.muted(m, l) ? 1 : 0;
      for (auto n : conn.ues_of(m)) load += d.assigned(n, l) ? 1 : 0;
      if (load > 1) throw FeasibilityError(m, l);
    }
  }
}

inline TtiResult evaluate_decision(const ConnectionMatrix& conn, const CsiReports& reports,
                                   const SchedulingDecision& d, const PfState& state) {
  check_linking(conn, d);
  TtiResult out;
  out.ue_rate.assign(d.num_ue(), 0.0);
  for (PrbIndex l = 0; l < d.num_prb(); ++l) {
    const BsSet column = d.muting_column(l);
    for (UeIndex n = 0; n < d.num_ue(); ++n) {
      if (d.assigned(n, l)) out.ue_rate[n] += lookup_rate_rho(reports, n, l, column);
    }
  }
  for (UeIndex n = 0; n < d.num_ue(); ++n) out.objective += pf_metric(out.ue_rate[n], state, n);
  out.muted_fraction = static_cast<double>(d.muted_count()) /
                       static_cast<double>(d.num_bs() * d.num_prb());
  return out;
}

/// Connected UE of `bs` with the largest PF metric under `column`, lowest
/// index on ties. Returns {kNone, 0} for a BS without UEs.
inline std::pair<UeIndex, double> best_ue_under_column(const CsiReports& reports,
                                                       const ConnectionMatrix& conn,
                                                       const PfState& state, PrbIndex prb,
                                                       BsIndex bs, BsSet column) {
  UeIndex best = kNone;
  double best_metric = 0.0;
  for (auto n : conn.ues_of(bs)) {
    const double metric = pf_metric(lookup_rate_rho(reports, n, prb, column), state, n);
    if (best == kNone || metric > best_metric) {
      best = n;
      best_metric = metric;
    }
  }
  return {best, best_metric};
}

// Sum of PF metrics on one PRB, accumulated in BS index order. Every
// per-PRB objective in the library uses this order so that alternative
// solvers agree bit for bit on equal decisions.
inline double prb_objective(const CsiReports& reports, const PrbDecision& d,
                            const PfState& state, PrbIndex prb) {
  double total = 0.0;
  for (BsIndex m = 0; m < d.assigned.size(); ++m) {
    const UeIndex n = d.assigned[m];
    if (n == kNone) continue;
    total += pf_metric(lookup_rate_rho(reports, n, prb, d.muted), state, n);
  }
  return total;
}

struct ColumnEvaluation {
  PrbDecision decision;
  double objective = 0.0;
};

/// Fixes the muting column and lets every unmuted BS pick its best UE.
inline ColumnEvaluation evaluate_column(const CsiReports& reports, const ConnectionMatrix& conn,
                                        const PfState& state, PrbIndex prb, BsSet column) {
  ColumnEvaluation out{PrbDecision(conn.num_bs()), 0.0};
  out.decision.muted = column;
  for (BsIndex m = 0; m < conn.num_bs(); ++m) {
    if (column.contains(m)) continue;
    const auto [ue, metric] = best_ue_under_column(reports, conn, state, prb, m, column);
    out.decision.assigned[m] = ue;
    if (ue != kNone) out.objective += metric;
  }
  return out;
}

inline PrbDecision noncoop_pfs_prb(const CsiReports& reports, const ConnectionMatrix& conn,
                                   const PfState& state, PrbIndex prb) {
  return evaluate_column(reports, conn, state, prb, BsSet{}).decision;
}

/// Per-BS proportional fair scheduling on the no-muting reports.
inline SchedulingDecision noncoop_pfs(const CsiReports& reports, const ConnectionMatrix& conn,
                                      const PfState& state) {
  SchedulingDecision d(conn.num_ue(), conn.num_bs(), reports.num_prb());
  for (PrbIndex l = 0; l < reports.num_prb(); ++l) d.set_prb(l, noncoop_pfs_prb(reports, conn, state, l));
  return d;
}

}  // namespace cosched
