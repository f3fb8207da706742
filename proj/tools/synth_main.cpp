// Emits a deterministic synthetic plant-year CSV for demos and testing.

#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "solarfc/dataset.hpp"
#include "solarfc/synthetic.hpp"

int main(int argc, char** argv) {
    CLI::App app{"synthetic solar plant-year generator"};
    std::string out = "synthetic_year.csv";
    solarfc::SyntheticConfig cfg;
    app.add_option("--out", out, "output CSV path");
    app.add_option("--year", cfg.year);
    app.add_option("--capacity-mw", cfg.capacity_mw);
    app.add_option("--latitude", cfg.latitude_deg);
    app.add_option("--seed", cfg.seed);
    app.add_option("--noise-mw", cfg.noise_mw);
    CLI11_PARSE(app, argc, argv);

    const auto d = solarfc::synthetic_year(cfg);
    solarfc::write_csv(d, out);
    std::printf("wrote %zu hourly records to %s\n", d.records.size(),
                out.c_str());
    return 0;
}
