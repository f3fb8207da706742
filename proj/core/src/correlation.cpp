#include "solarfc/correlation.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

#include "solarfc/errors.hpp"

namespace solarfc {

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) throw LengthMismatchError("pearson input lengths");
    const std::size_t n = a.size();
    if (n < 2) throw TooFewPointsError("pearson needs at least 2 samples");

    double mu_a = 0, mu_b = 0;
    for (std::size_t i = 0; i < n; ++i) {
        mu_a += a[i];
        mu_b += b[i];
    }
    mu_a /= n;
    mu_b /= n;

    double var_a = 0, var_b = 0, cross = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double da = a[i] - mu_a;
        const double db = b[i] - mu_b;
        var_a += da * da;
        var_b += db * db;
        cross += da * db;
    }
    var_a /= (n - 1);
    var_b /= (n - 1);
    // constant columns can pick up ~1e-34 of spurious variance from the
    // mean's rounding; treat anything at that scale as zero
    const double floor_a = 1e-26 * (1.0 + mu_a * mu_a);
    const double floor_b = 1e-26 * (1.0 + mu_b * mu_b);
    if (!(var_a > floor_a) || !(var_b > floor_b))
        throw ZeroVarianceError("constant input to pearson");

    const double rho = cross / (n - 1) / (std::sqrt(var_a) * std::sqrt(var_b));
    return std::clamp(rho, -1.0, 1.0);
}

CorrelationReport correlation_report(const Dataset& d) {
    if (d.records.size() < 2)
        throw TooFewPointsError("correlation report needs at least 2 records");

    CorrelationReport rep;
    rep.sample_count = d.records.size();

    std::vector<double> power(d.records.size());
    for (std::size_t i = 0; i < d.records.size(); ++i)
        power[i] = d.records[i].power_mw;

    for (int f = 0; f < kNumFeatures; ++f) {
        std::vector<double> col(d.records.size());
        for (std::size_t i = 0; i < d.records.size(); ++i)
            col[i] = d.records[i].feature(f);
        CorrelationEntry e;
        try {
            e.rho = pearson(col, power);
        } catch (const ZeroVarianceError&) {
            e.rho = std::nan("");
            e.defined = false;
        }
        rep.entries[kFeatureNames[f]] = e;
    }
    return rep;
}

FeatureSelection select_features(const CorrelationReport& r,
                                 const FeaturePolicy& policy) {
    auto contains = [](const std::vector<std::string>& v, const std::string& s) {
        return std::find(v.begin(), v.end(), s) != v.end();
    };

    FeatureSelection sel;
    sel.policy = policy;
    for (const char* name : kFeatureNames) {
        if (contains(policy.force_exclude, name)) continue;
        bool take = contains(policy.force_include, name);
        if (!take) {
            auto it = r.entries.find(name);
            take = it != r.entries.end() && it->second.defined &&
                   std::abs(it->second.rho) >= policy.threshold;
        }
        if (take) sel.selected.push_back(name);
    }
    if (sel.selected.empty())
        throw EmptySelectionError("no feature passed the selection policy");
    return sel;
}

std::vector<int> FeatureSelection::indices() const {
    std::vector<int> out;
    for (int f = 0; f < kNumFeatures; ++f)
        if (std::find(selected.begin(), selected.end(), kFeatureNames[f]) !=
            selected.end())
            out.push_back(f);
    return out;
}

std::string CorrelationReport::to_json() const {
    nlohmann::json j;
    j["sample_count"] = sample_count;
    for (const auto& [name, e] : entries) {
        if (e.defined)
            j["entries"][name] = e.rho;
        else
            j["entries"][name] = nullptr;  // zero-variance feature
    }
    return j.dump(2);
}

std::string CorrelationReport::to_csv() const {
    std::string out = "feature,rho\n";
    for (const char* name : kFeatureNames) {
        auto it = entries.find(name);
        if (it == entries.end()) continue;
        out += name;
        out += ',';
        out += it->second.defined ? std::to_string(it->second.rho) : "undefined";
        out += '\n';
    }
    return out;
}

std::string FeatureSelection::to_json() const {
    nlohmann::json j;
    j["selected"] = selected;
    j["policy"] = {{"threshold", policy.threshold},
                   {"force_include", policy.force_include},
                   {"force_exclude", policy.force_exclude}};
    return j.dump(2);
}

}  // namespace solarfc
