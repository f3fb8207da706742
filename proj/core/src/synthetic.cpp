#include "solarfc/synthetic.hpp"

#include <cmath>
#include <numbers>

#include "solarfc/rng.hpp"

namespace solarfc {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double deg2rad(double d) { return d * kPi / 180.0; }

}  // namespace

Dataset synthetic_year(const SyntheticConfig& cfg) {
    Dataset d;
    d.site = SiteMeta{"synthetic", cfg.capacity_mw, cfg.latitude_deg,
                      cfg.longitude_deg};
    d.site.check();

    std::mt19937_64 rng(cfg.seed);
    const double lat = deg2rad(cfg.latitude_deg);

    const Timestamp jan1{cfg.year, 1, 1, 0};
    const Timestamp next_jan1{cfg.year + 1, 1, 1, 0};
    const std::int64_t hours = next_jan1.hour_number() - jan1.hour_number();

    // Cloudiness persists across a day; draw one level per day. Levels stay
    // moderate so daytime power varies mainly with season and sun height.
    std::vector<int> day_okta(static_cast<std::size_t>(hours / 24 + 1));
    for (auto& o : day_okta) {
        const double u = uniform_real(rng, 0.0, 1.0);
        o = u < 0.45 ? 0 : u < 0.65 ? 1 : u < 0.80 ? 2 : u < 0.93 ? 3 : 4;
    }

    for (std::int64_t h = 0; h < hours; ++h) {
        const Timestamp ts = Timestamp::from_hour_number(jan1.hour_number() + h);
        const int doy = ts.day_of_year();
        const int hour = ts.hour;

        // solar geometry, first-order
        const double decl = deg2rad(-23.44) * std::cos(2 * kPi * (doy + 10) / 365.0);
        const double hour_angle = deg2rad(15.0 * (hour - 12));
        const double cosz = std::sin(lat) * std::sin(decl) +
                            std::cos(lat) * std::cos(decl) * std::cos(hour_angle);
        const double zenith = std::acos(std::clamp(cosz, -1.0, 1.0));
        double azimuth =
            180.0 + 180.0 / kPi *
                        std::atan2(std::sin(hour_angle),
                                   std::cos(hour_angle) * std::sin(lat) -
                                       std::tan(decl) * std::cos(lat));
        azimuth = std::fmod(azimuth + 360.0, 360.0);

        const int okta = day_okta[static_cast<std::size_t>(h / 24)];
        const double cloud_atten = 1.0 - 0.06 * okta;

        const double cs_ghi = 1000.0 * std::pow(std::max(cosz, 0.0), 1.15);
        const double ghi = cs_ghi * cloud_atten;
        const double dni =
            cosz > 0.05 ? 0.85 * cs_ghi * (1.0 - okta / 8.0) / cosz * cosz : 0.0;
        const double dhi = std::max(ghi - dni * std::max(cosz, 0.0), 0.0);

        const double season = std::cos(2 * kPi * (doy - 196) / 365.0);  // 1 mid-July
        const double temp = 12.0 + 14.0 * season +
                            6.0 * std::max(cosz, 0.0) - 0.4 * okta +
                            uniform_real(rng, -0.8, 0.8);
        const double albedo = 0.2 + 0.12 * std::max(-season, 0.0);

        // Regime-dependent conversion efficiency: summer days run hotter and
        // derate, winter days have a lower sun but cleaner panels. Shoulder
        // hours behave differently from the midday plateau.
        const double elevation = std::max(cosz, 0.0);
        double gain;
        if (elevation <= 0.0) {
            gain = 0.0;
        } else if (elevation < 0.25) {
            gain = 0.78;  // shoulder hours: low sun, incidence losses
        } else {
            gain = season > 0 ? 0.92 - 0.002 * std::max(temp - 20.0, 0.0)
                              : 0.70;
        }

        double power = cfg.capacity_mw * (ghi / 1000.0) * gain;
        if (power > 0) power += uniform_real(rng, -1.0, 1.0) * cfg.noise_mw * 1.732;
        power = std::clamp(power, 0.0, cfg.capacity_mw);

        SampleRecord r;
        r.timestamp = ts;
        r.dni = std::max(dni, 0.0);
        r.dhi = dhi;
        r.ghi = std::max(ghi, 0.0);
        r.temperature_c = temp;
        r.zenith_deg = zenith * 180.0 / kPi;
        r.azimuth_deg = azimuth;
        r.cloud_okta = okta;
        r.albedo = albedo;
        r.power_mw = power;
        d.records.push_back(r);
    }
    return d;
}

}  // namespace solarfc
