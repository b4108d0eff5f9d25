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

// Synthetic drop generator: hexagonal macro layout with optional picos,
// log-distance path loss, log-normal shadowing and per-PRB Rayleigh fading.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <utility>
#include <vector>

#include "cosched/network_model.hpp"
#include "cosched/types.hpp"

namespace cosched {

struct PathLossModel {
  double reference_loss_db = 128.1;  // at the reference distance
  double reference_distance_m = 1000.0;
  double exponent = 3.76;
  double min_distance_m = 35.0;

  double loss_db(double d) const {
    d = std::max(d, min_distance_m);
    return reference_loss_db + 10.0 * exponent * std::log10(d / reference_distance_m);
  }
};

inline constexpr double kThermalNoiseDbmPerHz = -174.0;
inline constexpr double kPrbBandwidthHz = 180e3;
inline constexpr double kNoiselessPowerMw = 1e-20;

struct ChannelConfig {
  std::size_t num_macro = 3;
  std::size_t num_pico = 0;
  std::size_t num_ue = 30;
  std::size_t num_prb = 10;

  double inter_site_distance_m = 500.0;
  double pico_offset_m = 125.0;    // pico distance from its macro
  double hotspot_radius_m = 40.0;  // UE cluster radius around a pico
  double hotspot_fraction = 2.0 / 3.0;
  double min_ue_distance_m = 35.0;

  PathLossModel macro_path_loss{128.1, 1000.0, 3.76, 35.0};
  PathLossModel pico_path_loss{140.7, 1000.0, 3.67, 10.0};
  double shadowing_db = 8.0;
  bool rayleigh_fading = true;

  double macro_prb_power_dbm = 29.0;  // 46 dBm over 50 PRBs
  double pico_prb_power_dbm = 13.0;   // 30 dBm over 50 PRBs

  bool noiseless = false;
  double noise_figure_db = 9.0;
  double noiseless_power_mw = kNoiselessPowerMw;

  bool out_of_cluster_ring = false;

  // Explicit macro coordinates; overrides the hexagonal layout when set.
  std::vector<Point> macro_positions;

  std::size_t num_bs() const noexcept { return num_macro + num_pico; }

  double noise_power_mw() const {
    if (noiseless) return noiseless_power_mw;
    return db_to_linear(kThermalNoiseDbmPerHz + 10.0 * std::log10(kPrbBandwidthHz) +
                        noise_figure_db);
  }
};

namespace detail {

// Sites of a hexagonal lattice with spacing isd, nearest to the origin first.
inline std::vector<Point> hex_lattice(double isd, int rings) {
  std::vector<Point> pts;
  for (int i = -2 * rings; i <= 2 * rings; ++i) {
    for (int j = -2 * rings; j <= 2 * rings; ++j) {
      const Point p{isd * (i + 0.5 * j), isd * (std::sqrt(3.0) / 2.0) * j};
      if (std::hypot(p.x, p.y) <= isd * (rings + 0.01)) pts.push_back(p);
    }
  }
  auto angle = [](Point p) {
    double a = std::atan2(p.y, p.x);
    if (a < -1e-9) a += 2.0 * std::numbers::pi;
    return a;
  };
  std::sort(pts.begin(), pts.end(), [&](Point a, Point b) {
    const double da = std::round(std::hypot(a.x, a.y) * 1e6);
    const double db = std::round(std::hypot(b.x, b.y) * 1e6);
    if (da != db) return da < db;
    return angle(a) < angle(b);
  });
  return pts;
}

// Uniform point in the hexagonal cell of a site (flat sides towards the
// six lattice neighbours), at least min_d from the site.
template <typename Rng>
Point sample_in_cell(Point site, double isd, double min_d, Rng& rng) {
  std::uniform_real_distribution<double> u(-isd / std::sqrt(3.0), isd / std::sqrt(3.0));
  const double half = isd / 2.0;
  for (;;) {
    const double x = u(rng), y = u(rng);
    bool inside = true;
    for (int k = 0; k < 3; ++k) {
      const double a = k * std::numbers::pi / 3.0;
      if (std::abs(x * std::cos(a) + y * std::sin(a)) > half) inside = false;
    }
    if (inside && std::hypot(x, y) >= min_d) return {site.x + x, site.y + y};
  }
}

template <typename Rng>
Point sample_in_disc(Point center, double radius, double min_d, Rng& rng) {
  std::uniform_real_distribution<double> u(-radius, radius);
  for (;;) {
    const double x = u(rng), y = u(rng);
    const double r = std::hypot(x, y);
    if (r <= radius && r >= min_d) return {center.x + x, center.y + y};
  }
}

}  // namespace detail

struct ChannelDrop {
  std::vector<BaseStation> bs;
  std::vector<UserEquipment> ue;
  std::vector<Point> external_sites;
  NetworkScenario scenario;
};

/// Deterministic function of (config, seed) for a given standard library.
inline ChannelDrop generate_channel(const ChannelConfig& cfg, std::uint64_t seed) {
  if (cfg.num_macro < 1) throw ConfigError("need at least one macro BS");
  if (cfg.num_ue < 1 || cfg.num_prb < 1) throw ConfigError("need N >= 1 and L >= 1");
  if (cfg.num_bs() > kMaxBs) throw ConfigError("cluster larger than 64 base stations");
  if (!cfg.macro_positions.empty() && cfg.macro_positions.size() != cfg.num_macro) {
    throw ConfigError("macro_positions must list exactly num_macro points");
  }
  if (cfg.hotspot_fraction < 0.0 || cfg.hotspot_fraction > 1.0) {
    throw ConfigError("hotspot fraction must be in [0,1]");
  }
  if (!cfg.macro_positions.empty() && cfg.out_of_cluster_ring) {
    throw ConfigError("out-of-cluster ring needs the hexagonal layout");
  }

  std::mt19937_64 rng(seed);
  const double isd = cfg.inter_site_distance_m;

  std::vector<Point> lattice;
  std::vector<Point> macros = cfg.macro_positions;
  std::vector<Point> external;
  if (macros.empty()) {
    int rings = 0;
    while (detail::hex_lattice(isd, rings).size() < cfg.num_macro) ++rings;
    lattice = detail::hex_lattice(isd, rings + 2);
    macros.assign(lattice.begin(), lattice.begin() + static_cast<long>(cfg.num_macro));
    for (std::size_t i = cfg.num_macro; i < lattice.size(); ++i) {
      const bool adjacent = std::any_of(macros.begin(), macros.end(), [&](Point m) {
        return distance(m, lattice[i]) <= isd * 1.01;
      });
      if (adjacent) external.push_back(lattice[i]);
    }
  }

  std::vector<BaseStation> bs;
  for (auto p : macros) bs.push_back({p, BsClass::macro});
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  for (std::size_t k = 0; k < cfg.num_pico; ++k) {
    const Point host = macros[k % cfg.num_macro];
    const double a = angle(rng);
    bs.push_back({{host.x + cfg.pico_offset_m * std::cos(a),
                   host.y + cfg.pico_offset_m * std::sin(a)},
                  BsClass::pico});
  }

  std::vector<UserEquipment> ue;
  ue.reserve(cfg.num_ue);
  std::size_t hotspot_ues = 0;
  if (cfg.num_pico > 0) {
    hotspot_ues = static_cast<std::size_t>(std::lround(cfg.hotspot_fraction * cfg.num_ue));
  }
  for (std::size_t k = 0; k < hotspot_ues; ++k) {
    const auto& pico = bs[cfg.num_macro + k % cfg.num_pico];
    ue.push_back({detail::sample_in_disc(pico.position, cfg.hotspot_radius_m,
                                         cfg.pico_path_loss.min_distance_m, rng)});
  }
  for (std::size_t k = 0; k < cfg.num_ue - hotspot_ues; ++k) {
    ue.push_back({detail::sample_in_cell(macros[k % cfg.num_macro], isd, cfg.min_ue_distance_m,
                                         rng)});
  }

  const auto n_count = ue.size(), m_count = bs.size(), l_count = cfg.num_prb;
  std::normal_distribution<double> shadow(0.0, cfg.shadowing_db);
  std::exponential_distribution<double> rayleigh(1.0);

  auto link_gain_db = [&](Point u, Point b, BsClass cls) {
    const auto& pl = cls == BsClass::pico ? cfg.pico_path_loss : cfg.macro_path_loss;
    return -pl.loss_db(distance(u, b)) + (cfg.shadowing_db > 0.0 ? shadow(rng) : 0.0);
  };

  std::vector<double> gain(n_count * m_count * l_count);
  for (std::size_t n = 0; n < n_count; ++n) {
    for (std::size_t m = 0; m < m_count; ++m) {
      const double large_scale = db_to_linear(link_gain_db(ue[n].position, bs[m].position, bs[m].cls));
      for (std::size_t l = 0; l < l_count; ++l) {
        const double fading = cfg.rayleigh_fading ? rayleigh(rng) : 1.0;
        gain[(n * m_count + m) * l_count + l] = large_scale * fading;
      }
    }
  }

  std::vector<double> tx(m_count * l_count);
  for (std::size_t m = 0; m < m_count; ++m) {
    const double p = db_to_linear(bs[m].cls == BsClass::pico ? cfg.pico_prb_power_dbm
                                                             : cfg.macro_prb_power_dbm);
    for (std::size_t l = 0; l < l_count; ++l) tx[m * l_count + l] = p;
  }

  std::vector<double> oc(n_count * l_count, 0.0);
  if (cfg.out_of_cluster_ring) {
    const double p = db_to_linear(cfg.macro_prb_power_dbm);
    for (std::size_t n = 0; n < n_count; ++n) {
      for (auto site : external) {
        const double large_scale = db_to_linear(link_gain_db(ue[n].position, site, BsClass::macro));
        for (std::size_t l = 0; l < l_count; ++l) {
          const double fading = cfg.rayleigh_fading ? rayleigh(rng) : 1.0;
          oc[n * l_count + l] += large_scale * fading * p;
        }
      }
    }
  } else {
    external.clear();
  }

  NetworkScenario scenario(bs, ue, l_count, std::move(tx), std::move(gain), cfg.noise_power_mw(),
                           std::move(oc));
  return {std::move(bs), std::move(ue), std::move(external), std::move(scenario)};
}

}  // namespace cosched
