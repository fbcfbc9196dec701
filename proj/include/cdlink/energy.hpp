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

#include <cstdint>
#include <string>

#include "cdlink/selection.hpp"

namespace cdlink {

struct EnergyConfig {
  double f_cpu_hz = 1.8e9;
  double p_proc_w = 10.0;  // processing power at f_cpu
  double kappa = 0.1;      // compression-algorithm constant
  double rho = 5.0;        // compression ratio
  std::size_t n_cpu = 1;   // metadata only; energy per bit does not depend on it
  bool compress_before_transmit = false;

  void validate() const;
};

struct EnergyReport {
  std::uint64_t volume_bits = 0;
  double transmit_bits = 0.0;
  double rate_bps = 0.0;
  std::string modcod_name;
  double e_proc_j = 0.0;
  double e_trans_j = 0.0;
  double e_total_j = 0.0;
  double baseline_total_j = 0.0;  // same pipeline applied to every pixel
  double savings_fraction = 0.0;
};

/// Joules per CPU cycle: P_proc / f_cpu.
double cycle_energy(const EnergyConfig& config);

/// CPU cycles per compressed bit: exp(kappa * rho) - exp(kappa).
double compression_complexity(const EnergyConfig& config);

double processing_energy(double volume_bits, const EnergyConfig& config);

/// Bits actually put on the link: the volume, or volume / rho when compressing first.
double transmitted_bits(double volume_bits, const EnergyConfig& config);

/// P_tx * transmitted bits / rate. Rate must be positive (outage is handled upstream).
double transmission_energy(double volume_bits, double rate_bps, double p_tx_w, const EnergyConfig& config);

/// Processing + transmission energy of `selection`, with the all-pixels
/// selection of the same geometry as the savings baseline.
EnergyReport total_energy(const Selection& selection, const VolumeConfig& volume, double rate_bps,
                          const std::string& modcod_name, double p_tx_w, const EnergyConfig& config);

}  // namespace cdlink
