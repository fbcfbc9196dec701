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
#include "cdlink/energy.hpp"

#include <cmath>

#include "cdlink/error.hpp"

namespace cdlink {

void EnergyConfig::validate() const {
  if (!(f_cpu_hz > 0.0)) throw ConfigError("f_cpu must be positive");
  if (!(p_proc_w >= 0.0)) throw ConfigError("p_proc must be non-negative");
  if (!(rho >= 1.0)) throw ConfigError("compression ratio rho must be at least 1");
  if (!(kappa > 0.0)) throw ConfigError("kappa must be positive");
  if (n_cpu < 1) throw ConfigError("n_cpu must be at least 1");
}

double cycle_energy(const EnergyConfig& config) {
  config.validate();
  return config.p_proc_w / config.f_cpu_hz;
}

double compression_complexity(const EnergyConfig& config) {
  config.validate();
  return std::exp(config.kappa * config.rho) - std::exp(config.kappa);
}

double processing_energy(double volume_bits, const EnergyConfig& config) {
  if (!(volume_bits >= 0.0)) throw ConfigError("volume must be non-negative");
  return volume_bits * compression_complexity(config) * cycle_energy(config);
}

double transmitted_bits(double volume_bits, const EnergyConfig& config) {
  config.validate();
  return config.compress_before_transmit ? volume_bits / config.rho : volume_bits;
}

double transmission_energy(double volume_bits, double rate_bps, double p_tx_w, const EnergyConfig& config) {
  if (!(rate_bps > 0.0)) throw LinkOutage("transmission rate must be positive");
  if (!(volume_bits >= 0.0)) throw ConfigError("volume must be non-negative");
  return p_tx_w * transmitted_bits(volume_bits, config) / rate_bps;
}

EnergyReport total_energy(const Selection& selection, const VolumeConfig& volume, double rate_bps,
                          const std::string& modcod_name, double p_tx_w, const EnergyConfig& config) {
  const auto energy_of = [&](double bits) {
    return processing_energy(bits, config) + transmission_energy(bits, rate_bps, p_tx_w, config);
  };

  EnergyReport r;
  r.volume_bits = selection.volume_bits;
  r.transmit_bits = transmitted_bits(static_cast<double>(selection.volume_bits), config);
  r.rate_bps = rate_bps;
  r.modcod_name = modcod_name;
  r.e_proc_j = processing_energy(static_cast<double>(selection.volume_bits), config);
  r.e_trans_j = transmission_energy(static_cast<double>(selection.volume_bits), rate_bps, p_tx_w, config);
  r.e_total_j = r.e_proc_j + r.e_trans_j;

  const auto full = BinaryMap::ones(selection.alpha.shape());
  r.baseline_total_j = energy_of(static_cast<double>(data_volume(full, volume)));
  r.savings_fraction = r.baseline_total_j > 0.0 ? 1.0 - r.e_total_j / r.baseline_total_j : 0.0;
  return r;
}

}  // namespace cdlink
