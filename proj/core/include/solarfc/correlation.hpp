#pragma once

#include <map>
#include <string>
#include <vector>

#include "solarfc/dataset.hpp"

namespace solarfc {

struct CorrelationEntry {
    double rho = 0.0;
    bool defined = true;  // false when the feature has zero variance
};

struct CorrelationReport {
    std::map<std::string, CorrelationEntry> entries;  // feature -> rho
    std::size_t sample_count = 0;

    std::string to_json() const;
    std::string to_csv() const;  // two columns: feature, rho
};

struct FeaturePolicy {
    double threshold = 0.10;
    std::vector<std::string> force_include = {"cloud_okta"};
    std::vector<std::string> force_exclude = {"albedo"};
};

struct FeatureSelection {
    std::vector<std::string> selected;  // canonical order
    FeaturePolicy policy;

    std::vector<int> indices() const;  // into kFeatureNames
    std::string to_json() const;
};

/// Sample Pearson correlation (divisor T-1), clamped to [-1, 1].
double pearson(const std::vector<double>& a, const std::vector<double>& b);

CorrelationReport correlation_report(const Dataset& d);

FeatureSelection select_features(const CorrelationReport& r,
                                 const FeaturePolicy& policy);

}  // namespace solarfc
