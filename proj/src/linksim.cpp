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
#include "cdlink/linksim.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "bundled_modcod.hpp"
#include "cdlink/error.hpp"
#include "cdlink/io.hpp"

namespace cdlink {

void PassConfig::validate() const {
  if (!(altitude_m > 0.0)) throw ConfigError("altitude must be positive");
  if (!(earth_radius_m > 0.0)) throw ConfigError("earth radius must be positive");
  if (!(pass_duration_s > 0.0 && pass_duration_s < orbital_period_s)) {
    throw ConfigError("pass duration must lie in (0, orbital period)");
  }
}

void LinkConfig::validate() const {
  for (double v : {p_tx_w, g_tx_db, g_rx_db, f_c_hz, noise_power_db, bandwidth_hz}) {
    if (!std::isfinite(v)) throw ConfigError("link parameters must be finite");
  }
  if (!(bandwidth_hz > 0.0)) throw ConfigError("bandwidth must be positive");
  if (!(f_c_hz > 0.0)) throw ConfigError("carrier frequency must be positive");
  if (!(p_tx_w > 0.0)) throw ConfigError("transmit power must be positive");
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
double linear_to_db(double linear) { return 10.0 * std::log10(linear); }

// ---------------------------------------------------------------------------
// ModcodTable

ModcodTable::ModcodTable(std::vector<Modcod> entries) : entries_(std::move(entries)) {
  if (entries_.empty()) throw DataError("MODCOD table is empty");
  for (std::size_t k = 0; k < entries_.size(); ++k) {
    const auto& e = entries_[k];
    if (!std::isfinite(e.gamma_min_db) || !(e.spectral_efficiency > 0.0) || !std::isfinite(e.spectral_efficiency)) {
      throw DataError("MODCOD '" + e.name + "' has invalid efficiency or threshold");
    }
    if (k == 0) continue;
    const auto& prev = entries_[k - 1];
    if (!(e.gamma_min_db > prev.gamma_min_db)) {
      throw DataError("MODCOD table not strictly ascending in gamma_min at '" + e.name + "'");
    }
    if (!(e.spectral_efficiency > prev.spectral_efficiency)) {
      throw DataError("MODCOD '" + e.name + "' is dominated by '" + prev.name + "'");
    }
  }
}

ModcodTable ModcodTable::parse_csv(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::vector<Modcod> entries;
  bool header_seen = false;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!header_seen) {
      if (line != "name,spectral_efficiency_bps_per_hz,gamma_min_db") {
        throw DataError("MODCOD CSV header must be 'name,spectral_efficiency_bps_per_hz,gamma_min_db'");
      }
      header_seen = true;
      continue;
    }
    const auto c1 = line.find(',');
    const auto c2 = c1 == std::string::npos ? c1 : line.find(',', c1 + 1);
    if (c2 == std::string::npos || line.find(',', c2 + 1) != std::string::npos) {
      throw DataError("MODCOD CSV line " + std::to_string(line_no) + ": expected 3 fields");
    }
    Modcod m;
    m.name = line.substr(0, c1);
    try {
      std::size_t used = 0;
      const std::string eff = line.substr(c1 + 1, c2 - c1 - 1);
      const std::string gmin = line.substr(c2 + 1);
      m.spectral_efficiency = std::stod(eff, &used);
      if (used != eff.size()) throw std::invalid_argument(eff);
      m.gamma_min_db = std::stod(gmin, &used);
      if (used != gmin.size()) throw std::invalid_argument(gmin);
    } catch (const std::logic_error&) {
      throw DataError("MODCOD CSV line " + std::to_string(line_no) + ": malformed number");
    }
    entries.push_back(std::move(m));
  }
  if (!header_seen) throw DataError("MODCOD CSV is empty");
  return ModcodTable(std::move(entries));
}

ModcodTable ModcodTable::load_csv(const std::filesystem::path& path) {
  try {
    return parse_csv(read_file(path));
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

ModcodTable ModcodTable::dvbs2() {
  static const ModcodTable table = parse_csv(detail::kBundledModcodCsv);
  return table;
}

// ---------------------------------------------------------------------------
// Geometry and link budget

double slant_range(const PassConfig& pass, double t_s) {
  pass.validate();
  if (!(t_s >= 0.0 && t_s <= pass.pass_duration_s)) {
    throw ConfigError("time " + std::to_string(t_s) + " s lies outside the pass");
  }
  const double phi = 2.0 * std::numbers::pi / pass.orbital_period_s * std::abs(t_s - pass.pass_duration_s / 2.0);
  const double re = pass.earth_radius_m;
  const double rs = pass.earth_radius_m + pass.altitude_m;
  // Written as h^2 + 2 Re Rs (1 - cos phi) to stay exact at zenith.
  const double d2 = pass.altitude_m * pass.altitude_m + 2.0 * re * rs * (1.0 - std::cos(phi));
  return std::sqrt(d2);
}

Snr snr(const LinkConfig& link, double distance_m) {
  link.validate();
  if (!(distance_m > 0.0)) throw ConfigError("distance must be positive");
  const double path = kSpeedOfLight / (4.0 * std::numbers::pi * distance_m * link.f_c_hz);
  const double gamma =
      db_to_linear(link.g_tx_db) * db_to_linear(link.g_rx_db) * link.p_tx_w * path * path / db_to_linear(link.noise_power_db);
  return Snr{gamma, linear_to_db(gamma)};
}

std::optional<RateChoice> select_rate(const ModcodTable& table, double gamma_db, double bandwidth_hz) {
  if (!(bandwidth_hz > 0.0)) throw ConfigError("bandwidth must be positive");
  const Modcod* best = nullptr;
  for (const auto& e : table.entries()) {
    if (gamma_db >= e.gamma_min_db) best = &e;
  }
  if (!best) return std::nullopt;
  return RateChoice{best->spectral_efficiency * bandwidth_hz, *best};
}

LinkBudget evaluate_link(const PassConfig& pass, const LinkConfig& link, const ModcodTable& table, double t_s) {
  LinkBudget out;
  out.t_s = t_s;
  out.slant_range_m = slant_range(pass, t_s);
  out.snr = snr(link, out.slant_range_m);
  out.rate = select_rate(table, out.snr.db, link.bandwidth_hz);
  return out;
}

}  // namespace cdlink
