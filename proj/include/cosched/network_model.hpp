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
#include <istream>
#include <numeric>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "cosched/types.hpp"

namespace cosched {

enum class BsClass { macro, pico };

struct Point {
  double x = 0.0;
  double y = 0.0;
};

inline double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

struct BaseStation {
  Point position;
  BsClass cls = BsClass::macro;
};

struct UserEquipment {
  Point position;
};

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

/// Static network of one cooperation cluster.
///
/// All powers are linear mW and all gains are linear power gains. The gain
/// tensor is indexed (ue, bs, prb) row-major; transmit power is (bs, prb);
/// out-of-cluster interference is (ue, prb) and does not react to muting.
class NetworkScenario {
 public:
  NetworkScenario(std::vector<BaseStation> bs_list, std::vector<UserEquipment> ue_list,
                  std::size_t num_prb, std::vector<double> tx_power,
                  std::vector<double> channel_gain, double noise_power,
                  std::vector<double> out_of_cluster = {})
      : bs_(std::move(bs_list)),
        ue_(std::move(ue_list)),
        num_prb_(num_prb),
        tx_power_(std::move(tx_power)),
        gain_(std::move(channel_gain)),
        noise_power_(noise_power),
        out_of_cluster_(std::move(out_of_cluster)) {
    const auto m = bs_.size(), n = ue_.size(), l = num_prb_;
    if (m < 1 || n < 1 || l < 1) throw ConfigError("scenario needs M, N, L >= 1");
    if (m > kMaxBs) throw ConfigError("cluster larger than 64 base stations");
    if (tx_power_.size() != m * l) throw ConfigError("tx_power must have M*L entries");
    if (gain_.size() != n * m * l) throw ConfigError("channel gain must have N*M*L entries");
    if (out_of_cluster_.empty()) out_of_cluster_.assign(n * l, 0.0);
    if (out_of_cluster_.size() != n * l) {
      throw ConfigError("out-of-cluster interference must have N*L entries");
    }
    if (!(noise_power_ > 0.0) || !std::isfinite(noise_power_)) {
      throw ConfigError("noise power must be positive");
    }
    auto non_negative = [](const std::vector<double>& v) {
      return std::all_of(v.begin(), v.end(),
                         [](double x) { return x >= 0.0 && std::isfinite(x); });
    };
    if (!non_negative(tx_power_) || !non_negative(gain_) || !non_negative(out_of_cluster_)) {
      throw ConfigError("powers and gains must be finite and non-negative");
    }
  }

  std::size_t num_bs() const noexcept { return bs_.size(); }
  std::size_t num_ue() const noexcept { return ue_.size(); }
  std::size_t num_prb() const noexcept { return num_prb_; }

  const BaseStation& bs(BsIndex m) const { return bs_.at(m); }
  const UserEquipment& ue(UeIndex n) const { return ue_.at(n); }
  const std::vector<BaseStation>& bs_list() const noexcept { return bs_; }
  const std::vector<UserEquipment>& ue_list() const noexcept { return ue_; }

  double gain(UeIndex n, BsIndex m, PrbIndex l) const {
    check(n, m, l);
    return gain_[(n * num_bs() + m) * num_prb_ + l];
  }
  double tx_power(BsIndex m, PrbIndex l) const {
    check(0, m, l);
    return tx_power_[m * num_prb_ + l];
  }
  double out_of_cluster(UeIndex n, PrbIndex l) const {
    check(n, 0, l);
    return out_of_cluster_[n * num_prb_ + l];
  }
  double noise_power() const noexcept { return noise_power_; }

  const std::vector<double>& gain_tensor() const noexcept { return gain_; }
  const std::vector<double>& tx_power_table() const noexcept { return tx_power_; }
  const std::vector<double>& out_of_cluster_table() const noexcept { return out_of_cluster_; }

 private:
  void check(UeIndex n, BsIndex m, PrbIndex l) const {
    if (n >= num_ue() || m >= num_bs() || l >= num_prb_) {
      throw IndexError("index out of range (ue " + std::to_string(n) + ", bs " +
                       std::to_string(m) + ", prb " + std::to_string(l) + ")");
    }
  }

  std::vector<BaseStation> bs_;
  std::vector<UserEquipment> ue_;
  std::size_t num_prb_;
  std::vector<double> tx_power_;
  std::vector<double> gain_;
  double noise_power_;
  std::vector<double> out_of_cluster_;
};

/// Single serving BS per UE. Stored as the serving index; c(n, m) is derived.
class ConnectionMatrix {
 public:
  ConnectionMatrix(std::vector<BsIndex> serving, std::size_t num_bs)
      : serving_(std::move(serving)), num_bs_(num_bs), ues_of_(num_bs) {
    for (UeIndex n = 0; n < serving_.size(); ++n) {
      if (serving_[n] >= num_bs_) throw IndexError("serving bs out of range");
      ues_of_[serving_[n]].push_back(n);
    }
  }

  std::size_t num_ue() const noexcept { return serving_.size(); }
  std::size_t num_bs() const noexcept { return num_bs_; }
  BsIndex serving(UeIndex n) const { return serving_.at(n); }
  int c(UeIndex n, BsIndex m) const { return serving_.at(n) == m ? 1 : 0; }
  // UEs attached to BS m, ascending.
  const std::vector<UeIndex>& ues_of(BsIndex m) const { return ues_of_.at(m); }
  const std::vector<BsIndex>& serving_list() const noexcept { return serving_; }

  friend bool operator==(const ConnectionMatrix& a, const ConnectionMatrix& b) {
    return a.num_bs_ == b.num_bs_ && a.serving_ == b.serving_;
  }

 private:
  std::vector<BsIndex> serving_;
  std::size_t num_bs_;
  std::vector<std::vector<UeIndex>> ues_of_;
};

/// The M' strongest in-cluster interferers of every UE, strongest first.
class StrongestInterfererSet {
 public:
  StrongestInterfererSet(std::vector<std::vector<BsIndex>> ordered, std::size_t m_prime,
                         std::vector<BsSet> all_interferers)
      : ordered_(std::move(ordered)), m_prime_(m_prime), all_(std::move(all_interferers)) {
    masks_.reserve(ordered_.size());
    for (const auto& list : ordered_) {
      BsSet s;
      for (auto m : list) s.insert(m);
      masks_.push_back(s);
    }
  }

  std::size_t m_prime() const noexcept { return m_prime_; }
  std::size_t num_ue() const noexcept { return ordered_.size(); }
  const std::vector<BsIndex>& ordered(UeIndex n) const { return ordered_.at(n); }
  BsSet strongest(UeIndex n) const { return masks_.at(n); }
  BsSet all(UeIndex n) const { return all_.at(n); }
  BsSet weak(UeIndex n) const { return all_.at(n).without(masks_.at(n)); }

  friend bool operator==(const StrongestInterfererSet& a, const StrongestInterfererSet& b) {
    return a.m_prime_ == b.m_prime_ && a.ordered_ == b.ordered_;
  }

 private:
  std::vector<std::vector<BsIndex>> ordered_;
  std::size_t m_prime_;
  std::vector<BsSet> all_;
  std::vector<BsSet> masks_;
};

inline double received_power(const NetworkScenario& s, UeIndex n, BsIndex m, PrbIndex l) {
  return s.gain(n, m, l) * s.tx_power(m, l);
}

inline double total_received_power(const NetworkScenario& s, UeIndex n, BsIndex m) {
  double total = 0.0;
  for (PrbIndex l = 0; l < s.num_prb(); ++l) total += received_power(s, n, m, l);
  return total;
}

/// Max-power association with a cell-range-expansion bias for pico cells.
/// Ties go to the lowest BS index.
inline ConnectionMatrix associate_ues(const NetworkScenario& s, double pico_offset_db = 0.0) {
  if (pico_offset_db < 0.0 || !std::isfinite(pico_offset_db)) {
    throw ConfigError("cell range expansion offset must be >= 0 dB");
  }
  const double pico_bias = db_to_linear(pico_offset_db);
  std::vector<BsIndex> serving(s.num_ue(), 0);
  for (UeIndex n = 0; n < s.num_ue(); ++n) {
    double best = -1.0;
    for (BsIndex m = 0; m < s.num_bs(); ++m) {
      double biased = total_received_power(s, n, m);
      if (s.bs(m).cls == BsClass::pico) biased *= pico_bias;
      if (biased > best) {
        best = biased;
        serving[n] = m;
      }
    }
  }
  return ConnectionMatrix(std::move(serving), s.num_bs());
}

inline StrongestInterfererSet strongest_interferers(const NetworkScenario& s,
                                                    const ConnectionMatrix& conn,
                                                    std::size_t m_prime) {
  if (s.num_bs() == 0 || m_prime > s.num_bs() - 1) {
    throw ConfigError("m_prime must satisfy 0 <= M' <= M-1");
  }
  std::vector<std::vector<BsIndex>> ordered(s.num_ue());
  std::vector<BsSet> all(s.num_ue());
  for (UeIndex n = 0; n < s.num_ue(); ++n) {
    std::vector<std::pair<double, BsIndex>> powers;
    for (BsIndex m = 0; m < s.num_bs(); ++m) {
      if (m == conn.serving(n)) continue;
      powers.emplace_back(total_received_power(s, n, m), m);
      all[n].insert(m);
    }
    std::stable_sort(powers.begin(), powers.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    for (std::size_t k = 0; k < m_prime; ++k) ordered[n].push_back(powers[k].second);
  }
  return StrongestInterfererSet(std::move(ordered), m_prime, std::move(all));
}

// Gain tensor text format: a header line "N M L" followed by N*M*L
// whitespace-separated linear gains in (ue, bs, prb) row-major order.
// Lines starting with '#' are comments.
struct GainTensor {
  std::size_t num_ue = 0;
  std::size_t num_bs = 0;
  std::size_t num_prb = 0;
  std::vector<double> values;
};

inline GainTensor read_gain_tensor(std::istream& in) {
  GainTensor t;
  std::string token;
  auto next = [&]() -> bool {
    while (in >> token) {
      if (!token.empty() && token[0] == '#') {
        std::string rest;
        std::getline(in, rest);
        continue;
      }
      return true;
    }
    return false;
  };
  auto read_count = [&](std::size_t& out) {
    if (!next()) throw ConfigError("gain tensor: truncated header");
    try {
      out = std::stoul(token);
    } catch (const std::exception&) {
      throw ConfigError("gain tensor: bad header value '" + token + "'");
    }
  };
  read_count(t.num_ue);
  read_count(t.num_bs);
  read_count(t.num_prb);
  const auto count = t.num_ue * t.num_bs * t.num_prb;
  t.values.reserve(count);
  while (t.values.size() < count && next()) {
    try {
      t.values.push_back(std::stod(token));
    } catch (const std::exception&) {
      throw ConfigError("gain tensor: bad value '" + token + "'");
    }
  }
  if (t.values.size() != count) {
    throw ConfigError("gain tensor: expected " + std::to_string(count) + " values, got " +
                      std::to_string(t.values.size()));
  }
  if (next()) throw ConfigError("gain tensor: trailing data after N*M*L values");
  return t;
}

inline void write_gain_tensor(std::ostream& out, const GainTensor& t) {
  out << t.num_ue << ' ' << t.num_bs << ' ' << t.num_prb << '\n';
  const auto old_precision = out.precision(17);
  for (std::size_t i = 0; i < t.values.size(); ++i) {
    out << t.values[i] << ((i + 1) % t.num_prb == 0 ? '\n' : ' ');
  }
  out.precision(old_precision);
}

}  // namespace cosched
