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

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "cosched/cs_ilp.hpp"
#include "test_support.hpp"

namespace cosched {
namespace {

using testing::hand_reports;

PfState unit_state(std::size_t n) { return PfState(std::vector<double>(n, 1.0), 0.97, 1e-6); }

TEST(BuildUniqueSets, HandUnion) {
  // BS 0 serves two UEs with I' = {1,2} and {1,3}.
  ConnectionMatrix conn({0, 0}, 4);
  const auto r = hand_reports(4, {{1, 2}, {1, 3}}, {{1, 2, 3, 4}, {1, 2, 3, 4}});
  const auto u = build_unique_sets(conn, r);
  ASSERT_EQ(u.count(0), 6u);
  std::set<std::uint64_t> got;
  for (auto s : u.sets[0]) got.insert(s.bits());
  const std::set<std::uint64_t> want{0, BsSet::of({1}).bits(), BsSet::of({2}).bits(),
                                     BsSet::of({3}).bits(), BsSet::of({1, 2}).bits(),
                                     BsSet::of({1, 3}).bits()};
  EXPECT_EQ(got, want);
  EXPECT_EQ(u.count(1), 0u);
  // Both UEs report the empty set and {1}.
  for (std::size_t jp = 0; jp < u.count(0); ++jp) {
    const auto s = u.sets[0][jp];
    const auto& g = u.groups[0][jp];
    if (s.empty() || s == BsSet::of({1})) {
      EXPECT_EQ(g, (std::vector<UeIndex>{0, 1}));
    } else {
      EXPECT_EQ(g.size(), 1u);
    }
  }
}

TEST(BuildUniqueSets, SharedAndDisjointInterferers) {
  ConnectionMatrix conn({0, 0, 0}, 3);
  const auto shared = hand_reports(3, {{1}, {1}, {1}}, {{1, 2}, {1, 2}, {1, 2}});
  EXPECT_EQ(build_unique_sets(conn, shared).count(0), 2u);  // J'

  ConnectionMatrix two({0, 0}, 3);
  const auto disjoint = hand_reports(3, {{1}, {2}}, {{1, 2}, {1, 2}});
  const auto c = build_unique_sets(two, disjoint).count(0);
  // Every UE also reports the empty set, so the union is #UEs*(J'-1)+1.
  EXPECT_EQ(c, 3u);
  EXPECT_GE(c, 2u);
  EXPECT_LE(c, 2u * 2u);
}

TEST(BuildUniqueSets, BoundsOnRandomInstances) {
  std::mt19937_64 rng(5);
  for (int rep = 0; rep < 100; ++rep) {
    testing::InstanceSpec spec;
    spec.num_bs = 4;
    spec.m_prime = 2;
    const auto inst = testing::random_instance(rng, spec);
    const auto u = build_unique_sets(inst.conn, inst.reports);
    const auto jp = inst.reports.num_scenarios();
    for (BsIndex m = 0; m < 4; ++m) {
      const auto ues = inst.conn.ues_of(m).size();
      EXPECT_GE(u.count(m), jp);
      EXPECT_LE(u.count(m), ues * jp);
      std::size_t memberships = 0;
      for (const auto& g : u.groups[m]) memberships += g.size();
      EXPECT_EQ(memberships, ues * jp);
    }
  }
}

TEST(ReduceCandidates, NoInterferersKeepsOneWinnerPerBs) {
  std::mt19937_64 rng(9);
  testing::InstanceSpec spec;
  spec.m_prime = 0;
  const auto inst = testing::random_instance(rng, spec);
  const auto u = build_unique_sets(inst.conn, inst.reports);
  const auto reduced = reduce_candidates(u, inst.reports, inst.state, 0);
  EXPECT_EQ(reduced.kept.size(), 3u);
  const auto sub = build_subproblem(reduced, inst.reports, inst.conn, inst.state);
  EXPECT_EQ(sub.candidates.size(), 3u);
  EXPECT_EQ(sub.noncooperating, BsSet::first(3));
}

TEST(ReduceCandidates, ArgmaxPerSet) {
  ConnectionMatrix conn({0, 0}, 1);
  const auto r = hand_reports(1, {{}, {}}, {{3.0}, {5.0}});
  const auto reduced = reduce_candidates(build_unique_sets(conn, r), r, unit_state(2), 0);
  ASSERT_EQ(reduced.kept.size(), 1u);
  EXPECT_EQ(reduced.kept[0].first, 1u);
  EXPECT_EQ(reduced.winner[0][0], 1u);

  const auto tie = hand_reports(1, {{}, {}}, {{4.0}, {4.0}});
  EXPECT_EQ(reduce_candidates(build_unique_sets(conn, tie), tie, unit_state(2), 0).kept[0].first,
            0u);
}

TEST(BuildSubproblem, SingleBsWithoutInterferers) {
  ConnectionMatrix conn({0, 0, 0}, 1);
  const auto r = hand_reports(1, {{}, {}, {}}, {{1.0}, {2.5}, {2.0}});
  const auto st = unit_state(3);
  const auto sub = build_subproblem(reduce_candidates(build_unique_sets(conn, r), r, st, 0), r,
                                    conn, st);
  ASSERT_EQ(sub.variables.size(), 1u);
  EXPECT_EQ(sub.variables[0].ue, 1u);
  EXPECT_EQ(sub.variables[0].scenario, 0u);
  const auto sol = solve_exact(sub);
  EXPECT_DOUBLE_EQ(sol.objective, 2.5);
}

TEST(BuildSubproblem, FourScenariosPerCandidate) {
  // Two UEs on BS 3 with I' = {0,1}; distinct rates so both win some set.
  ConnectionMatrix conn({3, 3, 0, 1, 2}, 4);
  const auto r = hand_reports(4, {{0, 1}, {0, 1}, {3, 1}, {3, 0}, {3, 0}},
                              {{1, 8, 2, 3}, {2, 3, 4, 6}, {1, 2, 3, 4}, {1, 2, 3, 4},
                               {1, 2, 3, 4}});
  const auto st = unit_state(5);
  const auto sub = build_subproblem(reduce_candidates(build_unique_sets(conn, r), r, st, 0), r,
                                    conn, st);
  EXPECT_EQ(sub.num_scenarios, 4u);
  EXPECT_EQ(sub.lifted_size(), sub.candidates.size() * 4);
  EXPECT_EQ(sub.winners_by_bs[3], (std::vector<UeIndex>{0, 1}));
  // UE 1 takes the empty set (2 > 1); UE 0 takes {0,1} (8 > 3).
  std::set<std::pair<UeIndex, std::size_t>> vars;
  for (const auto& v : sub.variables) vars.emplace(v.ue, v.scenario);
  EXPECT_TRUE(vars.count({0, 1}));
  EXPECT_FALSE(vars.count({0, 0}));
  EXPECT_TRUE(vars.count({1, 0}));
}

TEST(BuildSubproblem, ZeroRatesAreEliminated) {
  ConnectionMatrix conn({0, 1}, 2);
  const auto r = hand_reports(2, {{1}, {0}}, {{0.0, 2.0}, {0.0, 0.0}});
  const auto st = unit_state(2);
  const auto sub = build_full_subproblem(r, conn, st, 0);
  ASSERT_EQ(sub.variables.size(), 1u);
  EXPECT_EQ(sub.candidates, (std::vector<UeIndex>{0}));
  for (const auto& v : sub.variables) {
    EXPECT_GT(v.rate, 0.0);
    EXPECT_GT(v.metric, 0.0);
  }
}

TEST(BuildSubproblem, MutingABsForbidsItsUes) {
  // BS 0 has UEs 0,1; BS 1 has UE 2; BS 2 has UE 3.
  ConnectionMatrix conn({0, 0, 1, 2}, 3);
  const auto r = hand_reports(3, {{1}, {2}, {0}, {0}}, {{1, 2}, {1, 3}, {1, 2}, {1, 2}});
  const auto sub = build_full_subproblem(r, conn, unit_state(4), 0);
  // Variable of UE 2 that mutes BS 0.
  std::size_t var = kNone;
  for (std::size_t i = 0; i < sub.variables.size(); ++i) {
    if (sub.variables[i].ue == 2 && sub.variables[i].mutes == BsSet::of({0})) var = i;
  }
  ASSERT_NE(var, kNone);
  const auto conflicts = conflicts_of(sub, var);
  for (std::size_t i = 0; i < sub.variables.size(); ++i) {
    const auto& v = sub.variables[i];
    const bool expected = i != var && (v.bs == 0 || v.bs == 1 || v.mutes.contains(1));
    EXPECT_EQ(std::count(conflicts.begin(), conflicts.end(), i) == 1, expected) << "var " << i;
  }
}

TEST(SolveExact, AllZeroCoefficients) {
  ConnectionMatrix conn({0, 1}, 2);
  const auto r = hand_reports(2, {{1}, {0}}, {{0, 0}, {0, 0}});
  const auto sub = build_full_subproblem(r, conn, unit_state(2), 0);
  const auto sol = solve_exact(sub);
  EXPECT_TRUE(sol.selected.empty());
  EXPECT_EQ(sol.objective, 0.0);
  const auto d = decode_decision(sol, sub, conn);
  EXPECT_EQ(d, PrbDecision(2));
}

TEST(SolveExact, SingleBsPicksLargerMetric) {
  ConnectionMatrix conn({0, 0}, 1);
  const auto r = hand_reports(1, {{}, {}}, {{1.0}, {2.0}});
  const auto sub = build_full_subproblem(r, conn, unit_state(2), 0);
  const auto sol = solve_exact(sub);
  ASSERT_EQ(sol.selected.size(), 1u);
  EXPECT_EQ(sub.variables[sol.selected[0]].ue, 1u);
  EXPECT_EQ(sol.objective, 2.0);
}

TEST(SolveExact, MatchesBruteForceOnRandomInstances) {
  std::mt19937_64 rng(21);
  for (int rep = 0; rep < 150; ++rep) {
    testing::InstanceSpec spec;
    spec.num_bs = 3;
    spec.min_ues = spec.max_ues = 2;
    const auto inst = testing::random_instance(rng, spec);
    const auto oracle = testing::brute_force_prb(inst.reports, inst.conn, inst.state, 0);
    const auto u = build_unique_sets(inst.conn, inst.reports);
    const auto ilp = cs_ilp_prb(u, inst.reports, inst.conn, inst.state, 0);
    EXPECT_EQ(ilp.objective, oracle.objective) << "rep " << rep;
    const auto full = build_full_subproblem(inst.reports, inst.conn, inst.state, 0);
    EXPECT_EQ(solve_exact(full, {.exhaustive = true}).objective, oracle.objective);
  }
}

TEST(SolveExact, PruningDoesNotChangeResult) {
  std::mt19937_64 rng(23);
  for (int rep = 0; rep < 100; ++rep) {
    testing::InstanceSpec spec;
    spec.num_bs = 4;
    spec.m_prime = 3;
    const auto inst = testing::random_instance(rng, spec);
    const auto sub = build_full_subproblem(inst.reports, inst.conn, inst.state, 0);
    const auto pruned = solve_exact(sub);
    const auto full = solve_exact(sub, {.exhaustive = true});
    EXPECT_EQ(pruned.objective, full.objective);
    EXPECT_EQ(pruned.selected, full.selected);
    EXPECT_LE(pruned.nodes, full.nodes);
    EXPECT_TRUE(is_feasible(sub, pruned.selected));
    EXPECT_EQ(lifted_objective(sub, pruned.selected), pruned.objective);
  }
}

TEST(DecodeDecision, SingleVariable) {
  ConnectionMatrix conn({0, 1, 2}, 3);
  const auto r = hand_reports(3, {{2}, {0}, {0}}, {{1, 5}, {1, 1}, {1, 1}});
  const auto sub = build_full_subproblem(r, conn, unit_state(3), 0);
  std::size_t var = kNone;
  for (std::size_t i = 0; i < sub.variables.size(); ++i) {
    if (sub.variables[i].ue == 0 && sub.variables[i].scenario == 1) var = i;
  }
  ASSERT_NE(var, kNone);
  LiftedSolution sol{{var}, sub.variables[var].metric, 0};
  const auto d = decode_decision(sol, sub, conn);
  EXPECT_EQ(d.assigned, (std::vector<UeIndex>{0, kNone, kNone}));
  EXPECT_EQ(d.muted, BsSet::of({2}));
}

TEST(DecodeDecision, RejectsInfeasibleSelections) {
  ConnectionMatrix conn({0, 1}, 2);
  const auto r = hand_reports(2, {{1}, {0}}, {{1, 5}, {1, 5}});
  const auto sub = build_full_subproblem(r, conn, unit_state(2), 0);
  // UE 0 muting BS 1 together with any variable of UE 1.
  std::vector<std::size_t> both;
  for (std::size_t i = 0; i < sub.variables.size(); ++i) {
    const auto& v = sub.variables[i];
    if ((v.ue == 0 && v.scenario == 1) || (v.ue == 1 && v.scenario == 0)) both.push_back(i);
  }
  ASSERT_EQ(both.size(), 2u);
  EXPECT_FALSE(is_feasible(sub, both));
  EXPECT_THROW(decode_decision({both, 0.0, 0}, sub, conn), Error);
}

TEST(DecodeDecision, RoundTripThroughEvaluation) {
  std::mt19937_64 rng(31);
  for (int rep = 0; rep < 100; ++rep) {
    testing::InstanceSpec spec;
    spec.num_bs = 3;
    spec.num_prb = 1;
    const auto inst = testing::random_instance(rng, spec);
    const auto u = build_unique_sets(inst.conn, inst.reports);
    const auto ilp = cs_ilp_prb(u, inst.reports, inst.conn, inst.state, 0);
    EXPECT_EQ(prb_objective(inst.reports, ilp.decision, inst.state, 0), ilp.objective);
    SchedulingDecision d(inst.conn.num_ue(), 3, 1);
    d.set_prb(0, ilp.decision);
    const auto res = evaluate_decision(inst.conn, inst.reports, d, inst.state);
    EXPECT_NEAR(res.objective, ilp.objective, 1e-12 * std::max(1.0, ilp.objective));
  }
}

TEST(InlpOracle, SingleBs) {
  ConnectionMatrix conn({0, 0, 0}, 1);
  const auto r = hand_reports(1, {{}, {}, {}}, {{1.0}, {4.0}, {2.0}});
  EXPECT_EQ(inlp_oracle(r, conn, unit_state(3), 0).objective, 4.0);
}

TEST(InlpOracle, EqualRatesMuteNothing) {
  std::mt19937_64 rng(41);
  for (int rep = 0; rep < 50; ++rep) {
    const auto inst = testing::random_instance(rng, {});
    const auto flat = testing::with_rates(
        inst.reports, [&](UeIndex n, PrbIndex l, std::size_t) { return inst.reports.rate(n, l, 0); });
    EXPECT_TRUE(inlp_oracle(flat, inst.conn, inst.state, 0).column.empty());
    const auto ilp = cs_ilp_prb(build_unique_sets(inst.conn, flat), flat, inst.conn, inst.state, 0);
    EXPECT_TRUE(ilp.decision.muted.empty());
  }
}

TEST(InlpOracle, RefusesLargeClusters) {
  std::vector<BsIndex> serving(9);
  for (BsIndex m = 0; m < 9; ++m) serving[m] = m;
  ConnectionMatrix conn(serving, 9);
  std::vector<std::vector<BsIndex>> none(9);
  std::vector<std::vector<double>> rates(9, {1.0});
  const auto r = hand_reports(9, none, rates);
  EXPECT_THROW(inlp_oracle(r, conn, unit_state(9), 0), ConfigError);
}

TEST(WriteSubproblem, TextFormat) {
  ConnectionMatrix conn({0, 1}, 2);
  const auto r = hand_reports(2, {{1}, {0}}, {{1, 5}, {2, 3}});
  const auto sub = build_full_subproblem(r, conn, unit_state(2), 0);
  std::ostringstream out;
  write_subproblem(out, sub);
  const auto text = out.str();
  EXPECT_EQ(text.rfind("subproblem prb 0 bs 2 scenarios 2\n", 0), 0u);
  EXPECT_NE(text.find("candidates 0 1\n"), std::string::npos);
  EXPECT_NE(text.find("var 1 ue 0 scenario 1 bs 0 mutes 1 rate 5"), std::string::npos);
  EXPECT_NE(text.find("conflict"), std::string::npos);
}

}  // namespace
}  // namespace cosched
