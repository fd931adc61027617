// SPDX-License-Identifier: Apache-2.0
//
// lensmimo: link-level simulator for wideband mmWave MIMO with lens antenna
// arrays, plus fully digital and hybrid UPA benchmarks.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "lensmimo/array_models.hpp"
#include "lensmimo/harness.hpp"
#include "lensmimo/power_model.hpp"

namespace
{

struct SimulateArgs
{
    std::string config_path;
    std::int64_t trials = -1;
    std::int64_t seed = -1;
    std::string out_dir;
};

int run_simulate(const SimulateArgs& args)
{
    lensmimo::ExperimentConfig cfg = lensmimo::load_config(args.config_path);
    if (args.trials >= 0)
        cfg.num_trials = static_cast<std::size_t>(args.trials);
    if (args.seed >= 0)
        cfg.master_seed = static_cast<std::uint64_t>(args.seed);
    if (!args.out_dir.empty())
        cfg.output_dir = args.out_dir;

    const lensmimo::AggregateResult res = lensmimo::run_experiment(cfg);
    lensmimo::emit_results(res, cfg);

    std::cout << "scenario: " << cfg.scenario << ", " << cfg.num_trials << " trials, seed "
              << cfg.master_seed << "\n";
    for (const lensmimo::SchemeSummary& s : res.schemes)
    {
        std::cout << "  " << lensmimo::to_string(s.scheme) << " (m_rf=" << s.m_rf
                  << "): " << s.power_w << " W, " << s.energy_efficiency
                  << " bits/s/Hz/W at " << res.reference_snr_db << " dB\n";
    }
    std::cout << "wrote " << cfg.output_dir << "/results.csv and results.json\n";
    return 0;
}

struct PowerTableArgs
{
    double p_rf = 0.25;
    double p_ps = 0.015;
    double p_sw = 0.005;
    std::uint64_t m_upa = 400;
    std::uint64_t m_lens = 149;
    std::vector<std::uint64_t> m_rf_list = {3, 16};
    std::string csv_path;
};

int run_power_table(const PowerTableArgs& args)
{
    const lensmimo::PowerModel model{args.p_rf, args.p_ps, args.p_sw};

    struct Row
    {
        std::string architecture;
        std::uint64_t m_rf;
        double power_w;
    };
    std::vector<Row> rows;
    rows.push_back({"upa-digital", args.m_upa, lensmimo::power_digital(args.m_upa, model)});
    for (std::uint64_t m_rf : args.m_rf_list)
        rows.push_back({"upa-hybrid", m_rf, lensmimo::power_hybrid(args.m_upa, m_rf, model)});
    for (std::uint64_t m_rf : args.m_rf_list)
        rows.push_back({"lens", m_rf, lensmimo::power_lens(args.m_lens, m_rf, model)});

    std::cout << std::left << std::setw(14) << "architecture" << std::right << std::setw(8)
              << "m_rf" << std::setw(12) << "power_w" << "\n";
    for (const Row& r : rows)
        std::cout << std::left << std::setw(14) << r.architecture << std::right << std::setw(8)
                  << r.m_rf << std::setw(12) << r.power_w << "\n";

    std::string csv = "architecture,m_rf,power_w\n";
    for (const Row& r : rows)
        csv += r.architecture + "," + std::to_string(r.m_rf) + "," +
               lensmimo::format_double(r.power_w) + "\n";

    if (args.csv_path.empty())
    {
        std::cout << "\n" << csv;
    }
    else
    {
        std::ofstream out(args.csv_path, std::ios::binary);
        out << csv;
        if (!out)
            throw std::runtime_error("power-table: cannot write " + args.csv_path);
        std::cout << "wrote " << args.csv_path << "\n";
    }
    return 0;
}

struct LensResponseArgs
{
    double d_y = 10.0;
    double d_z = 10.0;
    double elevation_coverage_deg = 60.0;
    double azimuth_coverage_deg = 120.0;
    std::vector<std::string> dirs; // "theta,phi" in degrees
    std::string csv_path;
    std::string json_path;
};

int run_lens_response(const LensResponseArgs& args)
{
    std::vector<lensmimo::Direction> dirs;
    for (const std::string& spec : args.dirs)
    {
        const auto comma = spec.find(',');
        if (comma == std::string::npos)
            throw std::runtime_error("lens-response: --dir expects 'theta,phi' in degrees, got '" +
                                     spec + "'");
        lensmimo::Direction d;
        d.theta = lensmimo::deg2rad(std::stod(spec.substr(0, comma)));
        d.phi = lensmimo::deg2rad(std::stod(spec.substr(comma + 1)));
        dirs.push_back(d);
    }

    const lensmimo::LensArrayGeometry geom = lensmimo::build_lens_geometry(
        args.d_y, args.d_z, lensmimo::deg2rad(args.elevation_coverage_deg),
        lensmimo::deg2rad(args.azimuth_coverage_deg));
    const std::vector<lensmimo::DirectionPower> map = lensmimo::power_response_map(geom, dirs);

    std::string csv = "dir_index,m_e,m_a,power\n";
    for (std::size_t di = 0; di < map.size(); ++di)
        for (std::size_t i = 0; i < geom.elements.size(); ++i)
            csv += std::to_string(di) + "," + std::to_string(geom.elements[i].elev_index) + "," +
                   std::to_string(geom.elements[i].az_index) + "," +
                   lensmimo::format_double(map[di].power[i]) + "\n";

    nlohmann::json summary;
    summary["element_count"] = geom.num_elements();
    summary["directions"] = nlohmann::json::array();
    for (std::size_t di = 0; di < map.size(); ++di)
    {
        const lensmimo::DirectionPower& dp = map[di];
        const lensmimo::LensElement& el = geom.elements[dp.argmax_index];
        summary["directions"].push_back({{"dir_index", di},
                                         {"elevation_deg", lensmimo::rad2deg(dp.dir.theta)},
                                         {"azimuth_deg", lensmimo::rad2deg(dp.dir.phi)},
                                         {"in_coverage", dp.in_coverage},
                                         {"argmax_index", dp.argmax_index},
                                         {"argmax_m_e", el.elev_index},
                                         {"argmax_m_a", el.az_index},
                                         {"argmax_fraction", dp.argmax_fraction},
                                         {"total_power", dp.total_power}});
    }

    if (args.csv_path.empty())
    {
        std::cout << csv;
    }
    else
    {
        std::ofstream out(args.csv_path, std::ios::binary);
        out << csv;
        if (!out)
            throw std::runtime_error("lens-response: cannot write " + args.csv_path);
    }

    if (args.json_path.empty())
    {
        std::cout << summary.dump(2) << "\n";
    }
    else
    {
        std::ofstream out(args.json_path, std::ios::binary);
        out << summary.dump(2) << "\n";
        if (!out)
            throw std::runtime_error("lens-response: cannot write " + args.json_path);
    }
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"lens antenna array mmWave MIMO link simulator"};
    app.require_subcommand(1);

    SimulateArgs sim;
    CLI::App* simulate = app.add_subcommand("simulate-rate", "Monte Carlo spectral efficiency sweep");
    simulate->add_option("--config", sim.config_path, "scenario config file (JSON)")
        ->required()
        ->check(CLI::ExistingFile);
    simulate->add_option("--trials", sim.trials, "override num_trials");
    simulate->add_option("--seed", sim.seed, "override master_seed");
    simulate->add_option("--out", sim.out_dir, "override output directory");

    PowerTableArgs pt;
    CLI::App* power = app.add_subcommand("power-table", "BS power consumption per architecture");
    power->add_option("--p-rf", pt.p_rf, "watts per RF chain");
    power->add_option("--p-ps", pt.p_ps, "watts per phase shifter");
    power->add_option("--p-sw", pt.p_sw, "watts per switch");
    power->add_option("--m-upa", pt.m_upa, "UPA element count");
    power->add_option("--m-lens", pt.m_lens, "lens element count");
    power->add_option("--m-rf", pt.m_rf_list, "RF chain counts");
    power->add_option("--csv", pt.csv_path, "write CSV here instead of stdout");

    LensResponseArgs lr;
    CLI::App* lens = app.add_subcommand("lens-response", "lens array response diagnostics");
    lens->add_option("--d-y", lr.d_y, "aperture width, wavelengths");
    lens->add_option("--d-z", lr.d_z, "aperture height, wavelengths");
    lens->add_option("--elevation-coverage", lr.elevation_coverage_deg, "coverage angle, degrees");
    lens->add_option("--azimuth-coverage", lr.azimuth_coverage_deg, "coverage angle, degrees");
    lens->add_option("--dir", lr.dirs, "direction 'theta,phi' in degrees (repeatable)")->required();
    lens->add_option("--csv", lr.csv_path, "write per-element CSV here instead of stdout");
    lens->add_option("--json", lr.json_path, "write JSON summary here instead of stdout");

    CLI11_PARSE(app, argc, argv);

    try
    {
        if (simulate->parsed())
            return run_simulate(sim);
        if (power->parsed())
            return run_power_table(pt);
        if (lens->parsed())
            return run_lens_response(lr);
    }
    catch (const std::exception& e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
