#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "solarfc/timestamp.hpp"

namespace solarfc {

struct SiteMeta {
    std::string name;
    double capacity_mw = 0.0;
    double latitude_deg = 0.0;
    double longitude_deg = 0.0;

    void check() const;  // throws ValidationError on bad metadata
};

/// Canonical feature order used everywhere downstream.
inline constexpr std::array<const char*, 8> kFeatureNames = {
    "dni", "dhi", "ghi", "temperature_c",
    "zenith_deg", "azimuth_deg", "cloud_okta", "albedo"};

inline constexpr int kNumFeatures = 8;

/// One hourly observation. Missing cells are stored as NaN.
struct SampleRecord {
    Timestamp timestamp;
    double dni = 0.0;
    double dhi = 0.0;
    double ghi = 0.0;
    double temperature_c = 0.0;
    double zenith_deg = 0.0;
    double azimuth_deg = 0.0;
    double cloud_okta = 0.0;
    double albedo = 0.0;
    double power_mw = 0.0;

    double feature(int idx) const;
    double& feature(int idx);
    bool has_missing() const;
};

struct Dataset {
    SiteMeta site;
    std::vector<SampleRecord> records;  // sorted by timestamp, strictly increasing

    std::size_t size() const { return records.size(); }
    /// Number of distinct calendar days covered.
    std::size_t day_count() const;
};

struct ValidationReport {
    std::size_t row_count = 0;
    std::vector<std::pair<std::size_t, std::string>> missing_cells;
    // (row, column, value)
    std::vector<std::tuple<std::size_t, std::string, double>> range_violations;
    // half-open hour gaps as (last timestamp before, first timestamp after)
    std::vector<std::pair<Timestamp, Timestamp>> gap_list;

    bool clean() const {
        return missing_cells.empty() && range_violations.empty();
    }
    std::string to_json() const;
};

/// Maps logical column names (timestamp, dni, ..., power_mw) to CSV headers.
using ColumnSchema = std::map<std::string, std::string>;

ColumnSchema identity_schema();

/// power_optional: forecast horizons carry no power column; missing power
/// cells then load as 0 instead of being a schema error.
Dataset load_csv(const std::string& path, const ColumnSchema& schema,
                 const SiteMeta& site, bool power_optional = false);

ValidationReport validate_dataset(const Dataset& d);

struct CleanPolicy {
    enum class Kind { Drop, Interpolate } kind = Kind::Drop;
    int max_gap_hours = 1;  // used by Interpolate only

    static CleanPolicy drop() { return {Kind::Drop, 1}; }
    static CleanPolicy interpolate_max_gap(int h) { return {Kind::Interpolate, h}; }
};

Dataset clean(const Dataset& d, const CleanPolicy& policy);

struct HoldoutSplit {
    Dataset train;
    Dataset holdout;
    std::vector<std::int64_t> holdout_days;  // day numbers, sorted
};

HoldoutSplit split_holdout(const Dataset& d, std::size_t n_days,
                           std::uint64_t seed);

/// Re-serialize in the canonical CSV layout (identity headers).
void write_csv(const Dataset& d, const std::string& path);

/// FNV-1a over the canonical CSV serialization; stable content fingerprint.
std::uint64_t fingerprint(const Dataset& d);

}  // namespace solarfc
