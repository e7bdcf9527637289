// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>

namespace mimonoma::units {

inline double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

inline double watt_to_dbm(double watt) { return 10.0 * std::log10(watt) + 30.0; }

// Noise power in watts over `bandwidth_hz` for a density given in dBm/Hz.
inline double noise_power_watt(double density_dbm_hz, double bandwidth_hz) {
    return dbm_to_watt(density_dbm_hz) * bandwidth_hz;
}

}  // namespace mimonoma::units
