#include "solarfc/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "solarfc/errors.hpp"
#include "solarfc/rng.hpp"

namespace solarfc {

// ---------------------------------------------------------------- Timestamp

// Howard Hinnant's civil day algorithms.
std::int64_t Timestamp::day_number() const {
    const int y = year - (month <= 2);
    const int era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy =
        (153u * (static_cast<unsigned>(month) + (month > 2 ? -3 : 9)) + 2) / 5 +
        static_cast<unsigned>(day) - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return static_cast<std::int64_t>(era) * 146097 +
           static_cast<std::int64_t>(doe) - 719468;
}

int Timestamp::day_of_year() const {
    Timestamp jan1{year, 1, 1, 0};
    return static_cast<int>(day_number() - jan1.day_number()) + 1;
}

Timestamp Timestamp::from_hour_number(std::int64_t h) {
    std::int64_t z = h / 24;
    int hour = static_cast<int>(h - z * 24);
    if (hour < 0) {
        hour += 24;
        --z;
    }
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    const unsigned d = doy - (153 * mp + 2) / 5 + 1;
    const unsigned m = mp + (mp < 10 ? 3 : -9);
    return Timestamp{static_cast<int>(y + (m <= 2)), static_cast<int>(m),
                     static_cast<int>(d), hour};
}

std::optional<Timestamp> Timestamp::parse(const std::string& text) {
    int y, mo, d, h, mi = 0;
    int n = std::sscanf(text.c_str(), "%d-%d-%dT%d:%d", &y, &mo, &d, &h, &mi);
    if (n < 4) {
        n = std::sscanf(text.c_str(), "%d-%d-%d %d:%d", &y, &mo, &d, &h, &mi);
        if (n < 4) return std::nullopt;
    }
    if (mo < 1 || mo > 12 || d < 1 || d > 31 || h < 0 || h > 23 || mi != 0)
        return std::nullopt;
    return Timestamp{y, mo, d, h};
}

std::string Timestamp::to_string() const {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:00", year, month, day,
                  hour);
    return buf;
}

// ----------------------------------------------------------------- SiteMeta

void SiteMeta::check() const {
    if (!(capacity_mw > 0))
        throw ValidationError("site capacity must be positive");
    if (std::abs(latitude_deg) > 90 || std::abs(longitude_deg) > 180)
        throw ValidationError("site coordinates out of range");
}

// ------------------------------------------------------------- SampleRecord

double SampleRecord::feature(int idx) const {
    return const_cast<SampleRecord*>(this)->feature(idx);
}

double& SampleRecord::feature(int idx) {
    switch (idx) {
        case 0: return dni;
        case 1: return dhi;
        case 2: return ghi;
        case 3: return temperature_c;
        case 4: return zenith_deg;
        case 5: return azimuth_deg;
        case 6: return cloud_okta;
        case 7: return albedo;
        default: throw DimensionMismatchError("bad feature index");
    }
}

bool SampleRecord::has_missing() const {
    for (int i = 0; i < kNumFeatures; ++i)
        if (std::isnan(feature(i))) return true;
    return std::isnan(power_mw);
}

std::size_t Dataset::day_count() const {
    std::set<std::int64_t> days;
    for (const auto& r : records) days.insert(r.timestamp.day_number());
    return days.size();
}

// ----------------------------------------------------------------- load_csv

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) {
        // trim whitespace and CR
        auto b = cell.find_first_not_of(" \t\r");
        auto e = cell.find_last_not_of(" \t\r");
        out.push_back(b == std::string::npos ? "" : cell.substr(b, e - b + 1));
    }
    if (!line.empty() && line.back() == ',') out.push_back("");
    return out;
}

double parse_cell(const std::string& s) {
    if (s.empty()) return std::nan("");
    char* end = nullptr;
    double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0') return std::nan("");
    return v;
}

const std::array<const char*, 10> kLogicalColumns = {
    "timestamp", "dni",        "dhi",        "ghi",       "temperature_c",
    "zenith_deg", "azimuth_deg", "cloud_okta", "albedo",   "power_mw"};

}  // namespace

ColumnSchema identity_schema() {
    ColumnSchema s;
    for (const char* c : kLogicalColumns) s[c] = c;
    return s;
}

Dataset load_csv(const std::string& path, const ColumnSchema& schema,
                 const SiteMeta& site, bool power_optional) {
    site.check();
    std::ifstream in(path);
    if (!in) throw FileNotFoundError(path);

    std::string header_line;
    if (!std::getline(in, header_line))
        throw EmptyDatasetError("no header row in " + path);
    const auto header = split_line(header_line);

    // logical column index -> CSV column index
    std::array<int, 10> col{};
    for (int li = 0; li < 10; ++li) {
        auto it = schema.find(kLogicalColumns[li]);
        const std::string mapped =
            it != schema.end() ? it->second : kLogicalColumns[li];
        auto hit = std::find(header.begin(), header.end(), mapped);
        if (hit == header.end()) {
            if (li == 9 && power_optional) {
                col[li] = -1;
                continue;
            }
            throw SchemaMismatchError("column '" + mapped + "' (for " +
                                      kLogicalColumns[li] + ") not in header of " +
                                      path);
        }
        col[li] = static_cast<int>(hit - header.begin());
    }

    Dataset d;
    d.site = site;
    std::string line;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const auto cells = split_line(line);
        auto cell_at = [&](int li) -> std::string {
            const int ci = col[li];
            return ci >= 0 && ci < static_cast<int>(cells.size()) ? cells[ci] : "";
        };
        auto ts = Timestamp::parse(cell_at(0));
        if (!ts) continue;  // rows without a valid timestamp cannot be placed
        SampleRecord r;
        r.timestamp = *ts;
        for (int f = 0; f < kNumFeatures; ++f)
            r.feature(f) = parse_cell(cell_at(1 + f));
        r.power_mw = col[9] < 0 ? 0.0 : parse_cell(cell_at(9));
        d.records.push_back(r);
    }
    if (d.records.empty()) throw EmptyDatasetError("no valid rows in " + path);

    std::stable_sort(d.records.begin(), d.records.end(),
                     [](const SampleRecord& a, const SampleRecord& b) {
                         return a.timestamp < b.timestamp;
                     });
    return d;
}

// --------------------------------------------------------- validate_dataset

ValidationReport validate_dataset(const Dataset& d) {
    ValidationReport rep;
    rep.row_count = d.records.size();
    const double cap_tol = d.site.capacity_mw * 1.01;

    for (std::size_t i = 0; i < d.records.size(); ++i) {
        const auto& r = d.records[i];
        auto check = [&](const char* name, double v, bool ok) {
            if (std::isnan(v)) {
                rep.missing_cells.emplace_back(i, name);
            } else if (!ok) {
                rep.range_violations.emplace_back(i, name, v);
            }
        };
        check("dni", r.dni, r.dni >= 0);
        check("dhi", r.dhi, r.dhi >= 0);
        check("ghi", r.ghi, r.ghi >= 0);
        check("temperature_c", r.temperature_c, true);
        check("zenith_deg", r.zenith_deg, r.zenith_deg >= 0 && r.zenith_deg <= 180);
        check("azimuth_deg", r.azimuth_deg,
              r.azimuth_deg >= 0 && r.azimuth_deg < 360);
        check("cloud_okta", r.cloud_okta,
              r.cloud_okta == std::floor(r.cloud_okta) && r.cloud_okta >= 0 &&
                  r.cloud_okta <= 9);
        check("albedo", r.albedo, r.albedo >= 0);
        check("power_mw", r.power_mw, r.power_mw >= 0 && r.power_mw <= cap_tol);

        if (i > 0) {
            const auto prev = d.records[i - 1].timestamp.hour_number();
            const auto cur = r.timestamp.hour_number();
            if (cur - prev > 1)
                rep.gap_list.emplace_back(d.records[i - 1].timestamp, r.timestamp);
        }
    }
    return rep;
}

std::string ValidationReport::to_json() const {
    nlohmann::json j;
    j["row_count"] = row_count;
    j["missing_cells"] = nlohmann::json::array();
    for (const auto& [row, colname] : missing_cells)
        j["missing_cells"].push_back({{"row", row}, {"column", colname}});
    j["range_violations"] = nlohmann::json::array();
    for (const auto& [row, colname, value] : range_violations)
        j["range_violations"].push_back(
            {{"row", row}, {"column", colname}, {"value", value}});
    j["gap_list"] = nlohmann::json::array();
    for (const auto& [a, b] : gap_list)
        j["gap_list"].push_back({{"start", a.to_string()}, {"end", b.to_string()}});
    return j.dump(2);
}

// -------------------------------------------------------------------- clean

namespace {

bool record_valid(const Dataset& d, std::size_t i) {
    Dataset one;
    one.site = d.site;
    one.records.push_back(d.records[i]);
    const auto rep = validate_dataset(one);
    return rep.clean();
}

}  // namespace

Dataset clean(const Dataset& d, const CleanPolicy& policy) {
    if (policy.kind == CleanPolicy::Kind::Interpolate && policy.max_gap_hours < 1)
        throw ValidationError("interpolation gap bound must be >= 1");

    Dataset out;
    out.site = d.site;

    if (policy.kind == CleanPolicy::Kind::Drop) {
        for (std::size_t i = 0; i < d.records.size(); ++i)
            if (record_valid(d, i)) out.records.push_back(d.records[i]);
    } else {
        // Valid rows become anchors; cell-level holes and whole missing hours
        // within the gap bound are filled linearly between anchors.
        std::vector<SampleRecord> valid;
        for (std::size_t i = 0; i < d.records.size(); ++i)
            if (record_valid(d, i)) valid.push_back(d.records[i]);
        for (std::size_t i = 0; i < valid.size(); ++i) {
            out.records.push_back(valid[i]);
            if (i + 1 == valid.size()) break;
            const auto h0 = valid[i].timestamp.hour_number();
            const auto h1 = valid[i + 1].timestamp.hour_number();
            const auto gap = h1 - h0 - 1;
            if (gap >= 1 && gap <= policy.max_gap_hours) {
                for (std::int64_t h = h0 + 1; h < h1; ++h) {
                    const double w =
                        static_cast<double>(h - h0) / static_cast<double>(h1 - h0);
                    SampleRecord r;
                    r.timestamp = Timestamp::from_hour_number(h);
                    for (int f = 0; f < kNumFeatures; ++f)
                        r.feature(f) = valid[i].feature(f) * (1 - w) +
                                       valid[i + 1].feature(f) * w;
                    // oktas are integers; round back after interpolation
                    r.cloud_okta = std::round(r.cloud_okta);
                    r.power_mw =
                        valid[i].power_mw * (1 - w) + valid[i + 1].power_mw * w;
                    out.records.push_back(r);
                }
            }
        }
    }
    if (out.records.empty()) throw AllRowsDroppedError("no valid rows remain");
    return out;
}

// ------------------------------------------------------------ split_holdout

HoldoutSplit split_holdout(const Dataset& d, std::size_t n_days,
                           std::uint64_t seed) {
    if (n_days < 1) throw InsufficientDaysError("n_days must be >= 1");
    std::set<std::int64_t> day_set;
    for (const auto& r : d.records) day_set.insert(r.timestamp.day_number());
    std::vector<std::int64_t> days(day_set.begin(), day_set.end());
    if (days.size() <= n_days)
        throw InsufficientDaysError(
            "dataset spans " + std::to_string(days.size()) +
            " days; need more than the requested " + std::to_string(n_days));

    std::mt19937_64 rng(seed);
    shuffle_indices(days, rng);
    std::set<std::int64_t> held(days.begin(), days.begin() + n_days);

    HoldoutSplit split;
    split.train.site = d.site;
    split.holdout.site = d.site;
    split.holdout_days.assign(held.begin(), held.end());
    for (const auto& r : d.records) {
        if (held.count(r.timestamp.day_number()))
            split.holdout.records.push_back(r);
        else
            split.train.records.push_back(r);
    }
    return split;
}

// -------------------------------------------------------------- write_csv

namespace {

void append_cell(std::string& out, double v) {
    if (std::isnan(v)) return;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    out += buf;
}

std::string serialize_csv(const Dataset& d) {
    std::string out =
        "timestamp,dni,dhi,ghi,temperature_c,zenith_deg,azimuth_deg,"
        "cloud_okta,albedo,power_mw\n";
    for (const auto& r : d.records) {
        out += r.timestamp.to_string();
        for (int f = 0; f < kNumFeatures; ++f) {
            out += ',';
            append_cell(out, r.feature(f));
        }
        out += ',';
        append_cell(out, r.power_mw);
        out += '\n';
    }
    return out;
}

}  // namespace

void write_csv(const Dataset& d, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path);
    out << serialize_csv(d);
}

std::uint64_t fingerprint(const Dataset& d) {
    const std::string s = serialize_csv(d);
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

}  // namespace solarfc
