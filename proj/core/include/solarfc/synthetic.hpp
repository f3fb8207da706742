#pragma once

#include <cstdint>

#include "solarfc/dataset.hpp"

namespace solarfc {

struct SyntheticConfig {
    int year = 2019;            // non-leap by default: 8760 hours
    double capacity_mw = 30.0;
    double latitude_deg = 39.9;
    double longitude_deg = -104.7;
    double noise_mw = 0.30;     // additive output noise, std
    std::uint64_t seed = 1234;
};

/// One synthetic plant-year of hourly data with four behavioural regimes
/// (night, shoulder hours, summer day, winter day). Deterministic per seed.
Dataset synthetic_year(const SyntheticConfig& cfg);

}  // namespace solarfc
