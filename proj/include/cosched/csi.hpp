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
#include <cmath>
#include <cstdint>
#include <limits>
#include <ostream>
#include <utility>
#include <vector>

#include "cosched/network_model.hpp"
#include "cosched/types.hpp"

namespace cosched {

/// One interference scenario of a UE: the strongest interferers assumed muted.
struct MutingIndicatorSet {
  UeIndex ue = 0;
  std::size_t scenario = 0;  // 0-based position in the canonical order
  BsSet members;
};

/// Binary muting pattern over the whole cluster; zero outside I'_n.
inline std::vector<std::uint8_t> muting_pattern(const MutingIndicatorSet& s,
                                                std::size_t num_bs) {
  std::vector<std::uint8_t> pattern(num_bs, 0);
  for (auto m : s.members.members()) {
    if (m < num_bs) pattern[m] = 1;
  }
  return pattern;
}

/// All 2^M' subsets of the UE's strongest interferers.
///
/// Canonical order: the empty set, then the full set, then the remaining
/// subsets by ascending cardinality and lexicographic BS index. For
/// I'_n = {1,2} this yields {}, {1,2}, {1}, {2}.
inline std::vector<MutingIndicatorSet> enumerate_scenarios(const StrongestInterfererSet& si,
                                                           UeIndex ue) {
  const auto members = si.ordered(ue);
  const auto k = members.size();
  if (k >= 63) throw ConfigError("too many strongest interferers to enumerate");
  const BsSet full = si.strongest(ue);

  std::vector<BsSet> rest;
  for (std::uint64_t sub = 1; sub < (std::uint64_t{1} << k); ++sub) {
    BsSet s;
    for (std::size_t b = 0; b < k; ++b) {
      if ((sub >> b) & 1U) s.insert(members[b]);
    }
    if (s != full) rest.push_back(s);
  }
  std::sort(rest.begin(), rest.end(), BsSet::canonical_less);

  std::vector<MutingIndicatorSet> out;
  out.reserve(std::size_t{1} << k);
  out.push_back({ue, 0, BsSet{}});
  if (!full.empty()) out.push_back({ue, 1, full});
  for (auto s : rest) out.push_back({ue, out.size(), s});
  return out;
}

/// SINR of a UE on one PRB when exactly `muted` of its strongest interferers
/// are silent. Weak interferers always transmit at full power.
inline double sinr_under_scenario(const NetworkScenario& s, const ConnectionMatrix& conn,
                                  const StrongestInterfererSet& si, UeIndex ue, PrbIndex prb,
                                  BsSet muted) {
  const BsIndex serving = conn.serving(ue);
  const double signal = received_power(s, ue, serving, prb);
  double strong = 0.0;
  for (auto m : si.ordered(ue)) {
    if (!muted.contains(m)) strong += received_power(s, ue, m, prb);
  }
  double weak = 0.0;
  for (auto m : si.weak(ue).members()) weak += received_power(s, ue, m, prb);
  return signal / (strong + weak + s.out_of_cluster(ue, prb) + s.noise_power());
}

inline double sinr_under_scenario(const NetworkScenario& s, const ConnectionMatrix& conn,
                                  const StrongestInterfererSet& si, UeIndex ue, PrbIndex prb,
                                  const MutingIndicatorSet& indicator) {
  return sinr_under_scenario(s, conn, si, ue, prb, indicator.members);
}

/// Shannon mapping D * min(log2(1 + sinr), cap).
struct RateMapper {
  double scale = 1.0;
  double cap = std::numeric_limits<double>::infinity();

  static RateMapper unbounded(double d = 1.0) { return {d, std::numeric_limits<double>::infinity()}; }
  static RateMapper capped(double cap_bits, double d = 1.0) { return {d, cap_bits}; }
};

inline double map_rate(const RateMapper& mapper, double sinr) {
  if (!(sinr >= 0.0)) throw DomainError("sinr must be non-negative");
  return mapper.scale * std::min(std::log2(1.0 + sinr), mapper.cap);
}

/// One row of the per-UE report table.
struct CsiReport {
  UeIndex ue = 0;
  PrbIndex prb = 0;
  MutingIndicatorSet indicator;
  double rate = 0.0;

  std::size_t scenario() const noexcept { return indicator.scenario; }
};

/// Reports of all UEs on all PRBs: J' rates per (UE, PRB).
class CsiReports {
 public:
  CsiReports(std::size_t num_bs, std::size_t num_prb,
             std::vector<std::vector<MutingIndicatorSet>> scenarios,
             std::vector<BsSet> strongest, std::vector<double> rates)
      : num_bs_(num_bs),
        num_prb_(num_prb),
        scenarios_(std::move(scenarios)),
        strongest_(std::move(strongest)),
        rates_(std::move(rates)) {
    if (scenarios_.empty()) throw ConfigError("reports need at least one UE");
    num_scenarios_ = scenarios_.front().size();
    for (const auto& per_ue : scenarios_) {
      if (per_ue.size() != num_scenarios_) {
        throw ConfigError("every UE must report the same number of scenarios");
      }
    }
    if (strongest_.size() != scenarios_.size() ||
        rates_.size() != num_ue() * num_prb_ * num_scenarios_) {
      throw ConfigError("report table dimensions do not match");
    }
  }

  std::size_t num_ue() const noexcept { return scenarios_.size(); }
  std::size_t num_bs() const noexcept { return num_bs_; }
  std::size_t num_prb() const noexcept { return num_prb_; }
  std::size_t num_scenarios() const noexcept { return num_scenarios_; }

  const std::vector<MutingIndicatorSet>& scenarios(UeIndex n) const { return scenarios_.at(n); }
  BsSet indicator(UeIndex n, std::size_t j) const { return scenarios_.at(n).at(j).members; }
  BsSet strongest(UeIndex n) const { return strongest_.at(n); }

  double rate(UeIndex n, PrbIndex l, std::size_t j) const {
    if (n >= num_ue() || l >= num_prb_ || j >= num_scenarios_) {
      throw IndexError("report index out of range");
    }
    return rates_[(n * num_prb_ + l) * num_scenarios_ + j];
  }

  // Scenario whose indicator equals the column restricted to I'_n.
  std::size_t scenario_for(UeIndex n, BsSet column) const {
    const BsSet restricted = column & strongest_.at(n);
    const auto& list = scenarios_[n];
    for (std::size_t j = 0; j < list.size(); ++j) {
      if (list[j].members == restricted) return j;
    }
    throw Error("no reported scenario matches muting column");  // unreachable
  }

  std::vector<CsiReport> records() const {
    std::vector<CsiReport> out;
    out.reserve(rates_.size());
    for (UeIndex n = 0; n < num_ue(); ++n) {
      for (PrbIndex l = 0; l < num_prb_; ++l) {
        for (std::size_t j = 0; j < num_scenarios_; ++j) {
          out.push_back({n, l, scenarios_[n][j], rate(n, l, j)});
        }
      }
    }
    return out;
  }

 private:
  std::size_t num_bs_;
  std::size_t num_prb_;
  std::size_t num_scenarios_ = 0;
  std::vector<std::vector<MutingIndicatorSet>> scenarios_;
  std::vector<BsSet> strongest_;
  std::vector<double> rates_;
};

inline CsiReports generate_reports(const NetworkScenario& s, const ConnectionMatrix& conn,
                                   const StrongestInterfererSet& si, const RateMapper& mapper) {
  std::vector<std::vector<MutingIndicatorSet>> scenarios;
  std::vector<BsSet> strongest;
  scenarios.reserve(s.num_ue());
  for (UeIndex n = 0; n < s.num_ue(); ++n) {
    scenarios.push_back(enumerate_scenarios(si, n));
    strongest.push_back(si.strongest(n));
  }
  const std::size_t j_count = scenarios.front().size();
  std::vector<double> rates;
  rates.reserve(s.num_ue() * s.num_prb() * j_count);
  for (UeIndex n = 0; n < s.num_ue(); ++n) {
    for (PrbIndex l = 0; l < s.num_prb(); ++l) {
      for (const auto& ind : scenarios[n]) {
        rates.push_back(map_rate(mapper, sinr_under_scenario(s, conn, si, n, l, ind)));
      }
    }
  }
  return CsiReports(s.num_bs(), s.num_prb(), std::move(scenarios), std::move(strongest),
                    std::move(rates));
}

/// Rate of UE n on PRB l under a cluster-wide muting column. Entries of the
/// column outside I'_n do not matter.
inline double lookup_rate_rho(const CsiReports& reports, UeIndex ue, PrbIndex prb,
                              BsSet muting_column) {
  return reports.rate(ue, prb, reports.scenario_for(ue, muting_column));
}

// CSV columns: ue,prb,scenario,indicator,rate. The indicator is the muted
// set as a decimal bitmask over BS indices (bit m set = BS m muted).
inline void write_reports_csv(std::ostream& out, const CsiReports& reports) {
  out << "ue,prb,scenario,indicator,rate\n";
  const auto old_precision = out.precision(17);
  for (const auto& r : reports.records()) {
    out << r.ue << ',' << r.prb << ',' << r.indicator.scenario << ','
        << r.indicator.members.bits() << ',' << r.rate << '\n';
  }
  out.precision(old_precision);
}

}  // namespace cosched
