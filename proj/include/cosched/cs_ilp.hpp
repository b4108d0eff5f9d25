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

// Coordinated scheduling with muting as a per-PRB binary program.
//
// A lifted variable s(n, j) = 1 schedules UE n on the PRB while every BS in
// its indicator set J(n, j) is muted. Per PRB the program is
//
//   max  sum_n sum_j  r(n, l, j) / R_n * s(n, j)
//   s.t. s(n, j) + sum_{k served by m} sum_i s(k, i) <= 1   for m in J(n, j)
//        sum_{n served by m} sum_j s(n, j) <= 1             for m outside all I'_n
//        s(n, j) = 0 where r(n, l, j) = 0
//        s binary.
//
// Before building it, every BS keeps only the best-metric UE per distinct
// indicator set (no other UE of that BS can beat it under the same muting),
// which shrinks the candidate list without changing the optimum.

#include <algorithm>
#include <cstdint>
#include <ostream>
#include <utility>
#include <vector>

#include "cosched/csi.hpp"
#include "cosched/network_model.hpp"
#include "cosched/scheduler_core.hpp"
#include "cosched/types.hpp"

namespace cosched {

/// Distinct indicator sets per BS over its connected UEs, with the UEs
/// reporting each one.
struct UniqueMutingSets {
  std::vector<std::vector<BsSet>> sets;                   // [bs][j']
  std::vector<std::vector<std::vector<UeIndex>>> groups;  // [bs][j'] -> UEs

  std::size_t num_bs() const noexcept { return sets.size(); }
  std::size_t count(BsIndex m) const { return sets.at(m).size(); }
};

inline UniqueMutingSets build_unique_sets(
    const ConnectionMatrix& conn, const std::vector<std::vector<MutingIndicatorSet>>& scenarios) {
  UniqueMutingSets out;
  out.sets.resize(conn.num_bs());
  out.groups.resize(conn.num_bs());
  for (BsIndex m = 0; m < conn.num_bs(); ++m) {
    auto& sets = out.sets[m];
    for (auto n : conn.ues_of(m)) {
      for (const auto& ind : scenarios.at(n)) sets.push_back(ind.members);
    }
    std::sort(sets.begin(), sets.end(), BsSet::canonical_less);
    sets.erase(std::unique(sets.begin(), sets.end()), sets.end());
    out.groups[m].resize(sets.size());
    for (std::size_t jp = 0; jp < sets.size(); ++jp) {
      for (auto n : conn.ues_of(m)) {
        const auto& list = scenarios.at(n);
        const bool reports_it = std::any_of(list.begin(), list.end(), [&](const auto& ind) {
          return ind.members == sets[jp];
        });
        if (reports_it) out.groups[m][jp].push_back(n);
      }
    }
  }
  return out;
}

inline UniqueMutingSets build_unique_sets(const ConnectionMatrix& conn,
                                          const CsiReports& reports) {
  std::vector<std::vector<MutingIndicatorSet>> scenarios;
  scenarios.reserve(reports.num_ue());
  for (UeIndex n = 0; n < reports.num_ue(); ++n) scenarios.push_back(reports.scenarios(n));
  return build_unique_sets(conn, scenarios);
}

/// Winners of the per-BS, per-indicator-set reduction on one PRB.
struct ReducedCandidates {
  PrbIndex prb = 0;
  std::vector<std::vector<UeIndex>> winner;  // [bs][j'] -> UE (kNone if group empty)
  // Surviving (UE, scenario) pairs; all other rate coefficients are zero.
  std::vector<std::pair<UeIndex, std::size_t>> kept;
};

inline ReducedCandidates reduce_candidates(const UniqueMutingSets& unique,
                                           const CsiReports& reports, const PfState& state,
                                           PrbIndex prb) {
  ReducedCandidates out;
  out.prb = prb;
  out.winner.resize(unique.num_bs());
  for (BsIndex m = 0; m < unique.num_bs(); ++m) {
    out.winner[m].assign(unique.count(m), kNone);
    for (std::size_t jp = 0; jp < unique.count(m); ++jp) {
      const BsSet set = unique.sets[m][jp];
      UeIndex best = kNone;
      std::size_t best_j = 0;
      double best_metric = 0.0;
      for (auto n : unique.groups[m][jp]) {
        const auto j = reports.scenario_for(n, set);
        const double metric = pf_metric(reports.rate(n, prb, j), state, n);
        if (best == kNone || metric > best_metric) {
          best = n;
          best_j = j;
          best_metric = metric;
        }
      }
      out.winner[m][jp] = best;
      if (best != kNone) out.kept.emplace_back(best, best_j);
    }
  }
  std::sort(out.kept.begin(), out.kept.end());
  return out;
}

struct LiftedVariable {
  UeIndex ue = 0;
  std::size_t scenario = 0;
  BsIndex bs = 0;      // serving BS of the UE
  BsSet mutes;         // J(n, j)
  double rate = 0.0;   // r(n, l, j)
  double metric = 0.0; // r(n, l, j) / R_n
};

/// Per-PRB program after reduction and zero-coefficient elimination.
struct SubproblemInstance {
  PrbIndex prb = 0;
  std::size_t num_bs = 0;
  std::size_t num_scenarios = 0;
  std::vector<UeIndex> candidates;                   // N'_l, ascending
  std::vector<std::vector<UeIndex>> winners_by_bs;   // N'_{m,l}
  std::vector<double> pf_denominators;               // R_n, parallel to candidates
  std::vector<LiftedVariable> variables;             // sorted by (ue, scenario)
  std::vector<std::vector<std::size_t>> variables_by_bs;
  BsSet noncooperating;  // BSs outside every candidate's I'_n

  // |N'_l| * J' before zero-coefficient elimination.
  std::size_t lifted_size() const noexcept { return candidates.size() * num_scenarios; }
};

namespace detail {

inline SubproblemInstance assemble_subproblem(
    PrbIndex prb, const std::vector<std::pair<UeIndex, std::size_t>>& pairs,
    const CsiReports& reports, const ConnectionMatrix& conn, const PfState& state) {
  SubproblemInstance sub;
  sub.prb = prb;
  sub.num_bs = conn.num_bs();
  sub.num_scenarios = reports.num_scenarios();
  sub.winners_by_bs.resize(conn.num_bs());
  sub.variables_by_bs.resize(conn.num_bs());

  BsSet cooperating;
  for (const auto& [n, j] : pairs) {
    const double rate = reports.rate(n, prb, j);
    if (!(rate > 0.0)) continue;
    LiftedVariable v;
    v.ue = n;
    v.scenario = j;
    v.bs = conn.serving(n);
    v.mutes = reports.indicator(n, j);
    v.rate = rate;
    v.metric = pf_metric(rate, state, n);
    if (!(v.metric > 0.0)) continue;
    sub.variables.push_back(v);
  }
  std::sort(sub.variables.begin(), sub.variables.end(), [](const auto& a, const auto& b) {
    return std::pair(a.ue, a.scenario) < std::pair(b.ue, b.scenario);
  });
  for (std::size_t i = 0; i < sub.variables.size(); ++i) {
    const auto& v = sub.variables[i];
    sub.variables_by_bs[v.bs].push_back(i);
    if (sub.candidates.empty() || sub.candidates.back() != v.ue) {
      sub.candidates.push_back(v.ue);
      sub.pf_denominators.push_back(state.avg(v.ue));
      sub.winners_by_bs[v.bs].push_back(v.ue);
      cooperating |= reports.strongest(v.ue);
    }
  }
  sub.noncooperating = BsSet::first(conn.num_bs()).without(cooperating);
  return sub;
}

}  // namespace detail

/// Materializes the lifted program for the reduced candidate set.
inline SubproblemInstance build_subproblem(const ReducedCandidates& reduced,
                                           const CsiReports& reports,
                                           const ConnectionMatrix& conn, const PfState& state) {
  return detail::assemble_subproblem(reduced.prb, reduced.kept, reports, conn, state);
}

/// Lifted program with every UE as a candidate (no reduction).
inline SubproblemInstance build_full_subproblem(const CsiReports& reports,
                                                const ConnectionMatrix& conn,
                                                const PfState& state, PrbIndex prb) {
  std::vector<std::pair<UeIndex, std::size_t>> pairs;
  for (UeIndex n = 0; n < reports.num_ue(); ++n) {
    for (std::size_t j = 0; j < reports.num_scenarios(); ++j) pairs.emplace_back(n, j);
  }
  return detail::assemble_subproblem(prb, pairs, reports, conn, state);
}

/// Variables that cannot be selected together with `var`: all variables of
/// the BSs it mutes, and the other variables of its own BS.
inline std::vector<std::size_t> conflicts_of(const SubproblemInstance& sub, std::size_t var) {
  const auto& v = sub.variables.at(var);
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < sub.variables.size(); ++i) {
    if (i == var) continue;
    const auto& w = sub.variables[i];
    if (w.bs == v.bs || v.mutes.contains(w.bs) || w.mutes.contains(v.bs)) out.push_back(i);
  }
  return out;
}

struct LiftedSolution {
  std::vector<std::size_t> selected;  // indices into SubproblemInstance::variables, ascending
  double objective = 0.0;
  std::size_t nodes = 0;
};

inline bool is_feasible(const SubproblemInstance& sub, const std::vector<std::size_t>& selected) {
  BsSet active, muted;
  for (auto i : selected) {
    const auto& v = sub.variables.at(i);
    if (active.contains(v.bs)) return false;
    active.insert(v.bs);
    muted |= v.mutes;
  }
  return !active.intersects(muted);
}

// Objective of a selection, accumulated in BS index order.
inline double lifted_objective(const SubproblemInstance& sub,
                               const std::vector<std::size_t>& selected) {
  std::vector<double> per_bs(sub.num_bs, 0.0);
  std::vector<bool> used(sub.num_bs, false);
  for (auto i : selected) {
    const auto& v = sub.variables.at(i);
    per_bs[v.bs] = v.metric;
    used[v.bs] = true;
  }
  double total = 0.0;
  for (BsIndex m = 0; m < sub.num_bs; ++m) {
    if (used[m]) total += per_bs[m];
  }
  return total;
}

struct SolveOptions {
  bool exhaustive = false;  // disable pruning
};

namespace detail {

// Depth-first search branching on variables in (ue, scenario) order, taking
// the "select" branch first. Leaves are therefore visited in decreasing
// lexicographic order of the binary variable vector, so the first optimum
// found is the preferred one and later ties can be pruned.
class LiftedSearch {
 public:
  LiftedSearch(const SubproblemInstance& sub, SolveOptions options)
      : sub_(sub),
        options_(options),
        num_vars_(sub.variables.size()),
        chosen_(sub.num_bs, kNone) {
    // suffix_max_[m][i]: largest metric of a BS-m variable with index >= i.
    suffix_max_.assign(sub.num_bs, std::vector<double>(num_vars_ + 1, 0.0));
    for (BsIndex m = 0; m < sub.num_bs; ++m) {
      for (std::size_t i = num_vars_; i-- > 0;) {
        const auto& v = sub.variables[i];
        suffix_max_[m][i] = suffix_max_[m][i + 1];
        if (v.bs == m) suffix_max_[m][i] = std::max(suffix_max_[m][i], v.metric);
      }
    }
  }

  LiftedSolution run() {
    best_.objective = 0.0;
    best_.selected.clear();
    visit(0);
    std::sort(best_.selected.begin(), best_.selected.end());
    best_.nodes = nodes_;
    return best_;
  }

 private:
  // Canonical-order upper bound on every completion of the current node.
  double bound(std::size_t next) const {
    double total = 0.0;
    for (BsIndex m = 0; m < sub_.num_bs; ++m) {
      if (chosen_[m] != kNone) {
        total += sub_.variables[chosen_[m]].metric;
      } else if (!muted_.contains(m)) {
        total += suffix_max_[m][next];
      }
    }
    return total;
  }

  double value() const {
    double total = 0.0;
    for (BsIndex m = 0; m < sub_.num_bs; ++m) {
      if (chosen_[m] != kNone) total += sub_.variables[chosen_[m]].metric;
    }
    return total;
  }

  void visit(std::size_t next) {
    ++nodes_;
    if (!options_.exhaustive && found_ && bound(next) <= best_.objective) return;
    if (next == num_vars_) {
      const double v = value();
      if (!found_ || v > best_.objective) {
        found_ = true;
        best_.objective = v;
        best_.selected = path_;
      }
      return;
    }
    const auto& var = sub_.variables[next];
    const bool selectable = chosen_[var.bs] == kNone && !muted_.contains(var.bs) &&
                            !var.mutes.intersects(active_);
    if (selectable) {
      const BsSet saved_muted = muted_;
      chosen_[var.bs] = next;
      active_.insert(var.bs);
      muted_ |= var.mutes;
      path_.push_back(next);
      visit(next + 1);
      path_.pop_back();
      muted_ = saved_muted;
      active_.erase(var.bs);
      chosen_[var.bs] = kNone;
    }
    visit(next + 1);
  }

  const SubproblemInstance& sub_;
  SolveOptions options_;
  std::size_t num_vars_;
  std::vector<std::vector<double>> suffix_max_;
  std::vector<std::size_t> chosen_;
  BsSet active_;
  BsSet muted_;
  std::vector<std::size_t> path_;
  LiftedSolution best_;
  bool found_ = false;
  std::size_t nodes_ = 0;
};

}  // namespace detail

/// Exact maximizer of the lifted per-PRB program. Among optima with equal
/// objective, returns the one whose binary variable vector in (ue, scenario)
/// order is lexicographically largest, i.e. lowest-index variables win.
inline LiftedSolution solve_exact(const SubproblemInstance& sub, SolveOptions options = {}) {
  return detail::LiftedSearch(sub, options).run();
}

/// Maps a lifted solution back to assignment plus muting for its PRB.
inline PrbDecision decode_decision(const LiftedSolution& solution, const SubproblemInstance& sub,
                                   const ConnectionMatrix& conn) {
  PrbDecision d(conn.num_bs());
  for (auto i : solution.selected) {
    const auto& v = sub.variables.at(i);
    if (conn.serving(v.ue) != v.bs || d.assigned[v.bs] != kNone) {
      throw Error("decode: infeasible lifted solution");
    }
    d.assigned[v.bs] = v.ue;
    d.muted |= v.mutes;
  }
  for (BsIndex m = 0; m < conn.num_bs(); ++m) {
    if (d.assigned[m] != kNone && d.muted.contains(m)) {
      throw Error("decode: infeasible lifted solution");
    }
  }
  return d;
}

struct IlpPrbResult {
  PrbDecision decision;
  double objective = 0.0;
  std::size_t candidates = 0;
  std::size_t nodes = 0;
};

/// Reduction, lifting, exact solve and decode for one PRB.
inline IlpPrbResult cs_ilp_prb(const UniqueMutingSets& unique, const CsiReports& reports,
                               const ConnectionMatrix& conn, const PfState& state, PrbIndex prb) {
  const auto reduced = reduce_candidates(unique, reports, state, prb);
  const auto sub = build_subproblem(reduced, reports, conn, state);
  const auto solution = solve_exact(sub);
  return {decode_decision(solution, sub, conn), solution.objective, sub.candidates.size(),
          solution.nodes};
}

inline constexpr std::size_t kInlpOracleMaxBs = 8;

struct InlpOracleResult {
  double objective = 0.0;
  BsSet column;
};

/// Exhaustive search of the original formulation on one PRB: every one of
/// the 2^M muting columns, each unmuted BS serving its best UE under the
/// reported rate of that column.
inline InlpOracleResult inlp_oracle(const CsiReports& reports, const ConnectionMatrix& conn,
                                    const PfState& state, PrbIndex prb) {
  const auto m = conn.num_bs();
  if (m > kInlpOracleMaxBs) throw ConfigError("inlp_oracle refuses clusters above 8 BSs");
  InlpOracleResult best;
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << m); ++bits) {
    const auto eval = evaluate_column(reports, conn, state, prb, BsSet(bits));
    if (eval.objective > best.objective) {
      best.objective = eval.objective;
      best.column = BsSet(bits);
    }
  }
  return best;
}

// Text dump of a subproblem, one record per line:
//   subproblem prb <l> bs <M> scenarios <J'>
//   candidates <n...>
//   winners <m> <n...>
//   noncooperating <m...>
//   var <i> ue <n> scenario <j> bs <m> mutes <m...|-> rate <r> metric <w>
//   conflict <i> <k...>
inline void write_subproblem(std::ostream& out, const SubproblemInstance& sub) {
  const auto old_precision = out.precision(17);
  auto list = [&](const auto& xs) {
    for (auto x : xs) out << ' ' << x;
  };
  out << "subproblem prb " << sub.prb << " bs " << sub.num_bs << " scenarios "
      << sub.num_scenarios << '\n';
  out << "candidates";
  list(sub.candidates);
  out << '\n';
  for (BsIndex m = 0; m < sub.num_bs; ++m) {
    out << "winners " << m;
    list(sub.winners_by_bs[m]);
    out << '\n';
  }
  out << "noncooperating";
  list(sub.noncooperating.members());
  out << '\n';
  for (std::size_t i = 0; i < sub.variables.size(); ++i) {
    const auto& v = sub.variables[i];
    out << "var " << i << " ue " << v.ue << " scenario " << v.scenario << " bs " << v.bs
        << " mutes";
    if (v.mutes.empty()) out << " -";
    list(v.mutes.members());
    out << " rate " << v.rate << " metric " << v.metric << '\n';
  }
  for (std::size_t i = 0; i < sub.variables.size(); ++i) {
    out << "conflict " << i;
    list(conflicts_of(sub, i));
    out << '\n';
  }
  out.precision(old_precision);
}

}  // namespace cosched
