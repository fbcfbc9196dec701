/**
 * Copyright 2026 The cdlink Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cdlink {

inline constexpr double kSpeedOfLight = 2.998e8;  // m/s

/// Overhead pass of a circular LEO orbit over a non-rotating Earth. The pass
/// peaks at zenith halfway through; its edges are set by pass_duration_s.
struct PassConfig {
  double altitude_m = 786e3;
  double orbital_period_s = 6000.0;
  double pass_duration_s = 900.0;
  double earth_radius_m = 6.371e6;

  void validate() const;
};

struct LinkConfig {
  double p_tx_w = 10.0;
  double g_tx_db = 32.13;
  double g_rx_db = 34.2;
  double f_c_hz = 20e9;
  double noise_power_db = -115.0;  // total in-band noise power, dBW
  double bandwidth_hz = 500e6;

  void validate() const;
};

struct Modcod {
  std::string name;
  double spectral_efficiency = 0.0;  // bit/s/Hz
  double gamma_min_db = 0.0;
};

/// MODCOD set sorted by threshold with strictly increasing efficiency, so the
/// best eligible entry is always the last one whose threshold is met.
class ModcodTable {
 public:
  explicit ModcodTable(std::vector<Modcod> entries);

  /// CSV with header `name,spectral_efficiency_bps_per_hz,gamma_min_db`.
  static ModcodTable parse_csv(std::string_view text);
  static ModcodTable load_csv(const std::filesystem::path& path);
  /// DVB-S2 normal-frame table shipped in data/dvbs2_modcod.csv.
  static ModcodTable dvbs2();

  const std::vector<Modcod>& entries() const noexcept { return entries_; }

 private:
  std::vector<Modcod> entries_;
};

struct Snr {
  double linear = 0.0;
  double db = 0.0;
};

struct RateChoice {
  double rate_bps = 0.0;
  Modcod modcod;
};

/// Satellite-gateway distance t seconds into the pass.
double slant_range(const PassConfig& pass, double t_s);

/// Free-space AWGN downlink SNR at distance d.
Snr snr(const LinkConfig& link, double distance_m);

/// Highest-efficiency entry with gamma_min_db <= gamma_db; nullopt means outage.
std::optional<RateChoice> select_rate(const ModcodTable& table, double gamma_db, double bandwidth_hz);

/// Link state at one instant of the pass.
struct LinkBudget {
  double t_s = 0.0;
  double slant_range_m = 0.0;
  Snr snr;
  std::optional<RateChoice> rate;
};

LinkBudget evaluate_link(const PassConfig& pass, const LinkConfig& link, const ModcodTable& table, double t_s);

double db_to_linear(double db);
double linear_to_db(double linear);

}  // namespace cdlink
