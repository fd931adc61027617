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

#include "lensmimo/harness.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <thread>

#include "lensmimo/array_models.hpp"
#include "lensmimo/rng.hpp"

namespace lensmimo
{

std::string format_double(double v)
{
    std::array<char, 32> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), res.ptr);
}

static std::string to_string(PowerProfile p)
{
    return p == PowerProfile::uniform_random ? "uniform-random" : "exponential";
}

static PowerProfile profile_from_string(const std::string& s)
{
    if (s == "uniform-random")
        return PowerProfile::uniform_random;
    if (s == "exponential")
        return PowerProfile::exponential;
    throw std::invalid_argument("config: unknown power profile '" + s + "'");
}

static AngleInterval interval_from_deg(const nlohmann::json& j, const char* key)
{
    const nlohmann::json& pair = j.at(key);
    if (!pair.is_array() || pair.size() != 2)
        throw std::invalid_argument(std::string("config: ") + key + " must be [lo, hi] in degrees");
    return {deg2rad(pair[0].get<double>()), deg2rad(pair[1].get<double>())};
}

static nlohmann::json interval_to_deg(AngleInterval iv)
{
    return nlohmann::json::array({rad2deg(iv.lo), rad2deg(iv.hi)});
}

ExperimentConfig config_from_json(const nlohmann::json& j)
{
    ExperimentConfig cfg;
    cfg.scenario = j.value("scenario", cfg.scenario);
    cfg.master_seed = j.value("master_seed", cfg.master_seed);
    cfg.num_trials = j.value("num_trials", cfg.num_trials);
    cfg.reference_snr_db = j.value("reference_snr_db", cfg.reference_snr_db);
    cfg.output_dir = j.value("output_dir", cfg.output_dir);
    if (j.contains("snr_sweep_db"))
        cfg.snr_sweep_db = j.at("snr_sweep_db").get<std::vector<double>>();

    if (j.contains("channel"))
    {
        const nlohmann::json& jc = j.at("channel");
        cfg.channel.num_paths = jc.value("num_paths", cfg.channel.num_paths);
        if (jc.contains("azimuth_range_deg"))
            cfg.channel.azimuth_range = interval_from_deg(jc, "azimuth_range_deg");
        if (jc.contains("elevation_range_deg"))
            cfg.channel.elevation_range = interval_from_deg(jc, "elevation_range_deg");
        if (jc.contains("delay_max_ns"))
            cfg.channel.delay_max_s = jc.at("delay_max_ns").get<double>() * 1e-9;
        if (jc.contains("power_profile"))
            cfg.channel.power_profile = profile_from_string(jc.at("power_profile").get<std::string>());
        cfg.channel.exp_decay = jc.value("exp_decay", cfg.channel.exp_decay);
        cfg.channel.carrier_hz = jc.value("carrier_hz", cfg.channel.carrier_hz);
        cfg.channel.bandwidth_hz = jc.value("bandwidth_hz", cfg.channel.bandwidth_hz);
    }

    if (j.contains("bs_lens"))
    {
        const nlohmann::json& jl = j.at("bs_lens");
        cfg.bs_lens.d_y = jl.value("d_y", cfg.bs_lens.d_y);
        cfg.bs_lens.d_z = jl.value("d_z", cfg.bs_lens.d_z);
        if (jl.contains("elevation_coverage_deg"))
            cfg.bs_lens.theta_cov = deg2rad(jl.at("elevation_coverage_deg").get<double>());
        if (jl.contains("azimuth_coverage_deg"))
            cfg.bs_lens.phi_cov = deg2rad(jl.at("azimuth_coverage_deg").get<double>());
    }

    const auto read_upa = [](const nlohmann::json& ju, UpaSpec& spec)
    {
        spec.n_rows = ju.value("n_rows", spec.n_rows);
        spec.n_cols = ju.value("n_cols", spec.n_cols);
        spec.spacing = ju.value("spacing", spec.spacing);
    };
    if (j.contains("bs_upa"))
        read_upa(j.at("bs_upa"), cfg.bs_upa);
    if (j.contains("ms_upa"))
        read_upa(j.at("ms_upa"), cfg.ms_upa);

    if (j.contains("power"))
    {
        const nlohmann::json& jp = j.at("power");
        cfg.power.p_rf = jp.value("p_rf", cfg.power.p_rf);
        cfg.power.p_ps = jp.value("p_ps", cfg.power.p_ps);
        cfg.power.p_sw = jp.value("p_sw", cfg.power.p_sw);
        cfg.m_lens_power = jp.value("m_lens", cfg.m_lens_power);
    }

    SchemeConfig defaults;
    if (j.contains("ofdm"))
    {
        defaults.n_subcarriers = j.at("ofdm").value("n_subcarriers", defaults.n_subcarriers);
        defaults.cp_len = j.at("ofdm").value("cp_len", defaults.cp_len);
    }
    if (j.contains("codebook"))
    {
        const nlohmann::json& jb = j.at("codebook");
        defaults.codebook_size = jb.value("size", defaults.codebook_size);
        if (jb.contains("azimuth_range_deg"))
            defaults.codebook_azimuth = interval_from_deg(jb, "azimuth_range_deg");
        else
            defaults.codebook_azimuth = cfg.channel.azimuth_range;
        if (jb.contains("elevation_range_deg"))
            defaults.codebook_elevation = interval_from_deg(jb, "elevation_range_deg");
        else
            defaults.codebook_elevation = cfg.channel.elevation_range;
    }
    else
    {
        defaults.codebook_azimuth = cfg.channel.azimuth_range;
        defaults.codebook_elevation = cfg.channel.elevation_range;
    }

    if (j.contains("schemes"))
    {
        for (const nlohmann::json& js : j.at("schemes"))
        {
            SchemeConfig sc = defaults;
            sc.scheme = scheme_from_string(js.at("scheme").get<std::string>());
            sc.m_rf = js.value("m_rf", sc.scheme == SchemeKind::upa_digital_ofdm
                                           ? cfg.bs_upa.num_elements()
                                           : std::size_t{1});
            sc.n_subcarriers = js.value("n_subcarriers", sc.n_subcarriers);
            sc.cp_len = js.value("cp_len", sc.cp_len);
            sc.codebook_size = js.value("codebook_size", sc.codebook_size);
            if (js.contains("codebook_azimuth_range_deg"))
                sc.codebook_azimuth = interval_from_deg(js, "codebook_azimuth_range_deg");
            if (js.contains("codebook_elevation_range_deg"))
                sc.codebook_elevation = interval_from_deg(js, "codebook_elevation_range_deg");
            cfg.schemes.push_back(sc);
        }
    }
    return cfg;
}

nlohmann::json config_to_json(const ExperimentConfig& cfg)
{
    nlohmann::json schemes = nlohmann::json::array();
    for (const SchemeConfig& sc : cfg.schemes)
    {
        schemes.push_back({{"scheme", to_string(sc.scheme)},
                           {"m_rf", sc.m_rf},
                           {"n_subcarriers", sc.n_subcarriers},
                           {"cp_len", sc.cp_len},
                           {"codebook_size", sc.codebook_size},
                           {"codebook_azimuth_range_deg", interval_to_deg(sc.codebook_azimuth)},
                           {"codebook_elevation_range_deg", interval_to_deg(sc.codebook_elevation)}});
    }

    return {{"scenario", cfg.scenario},
            {"master_seed", cfg.master_seed},
            {"num_trials", cfg.num_trials},
            {"reference_snr_db", cfg.reference_snr_db},
            {"snr_sweep_db", cfg.snr_sweep_db},
            {"output_dir", cfg.output_dir},
            {"channel",
             {{"num_paths", cfg.channel.num_paths},
              {"azimuth_range_deg", interval_to_deg(cfg.channel.azimuth_range)},
              {"elevation_range_deg", interval_to_deg(cfg.channel.elevation_range)},
              {"delay_max_ns", cfg.channel.delay_max_s * 1e9},
              {"power_profile", to_string(cfg.channel.power_profile)},
              {"exp_decay", cfg.channel.exp_decay},
              {"carrier_hz", cfg.channel.carrier_hz},
              {"bandwidth_hz", cfg.channel.bandwidth_hz}}},
            {"bs_lens",
             {{"d_y", cfg.bs_lens.d_y},
              {"d_z", cfg.bs_lens.d_z},
              {"elevation_coverage_deg", rad2deg(cfg.bs_lens.theta_cov)},
              {"azimuth_coverage_deg", rad2deg(cfg.bs_lens.phi_cov)}}},
            {"bs_upa",
             {{"n_rows", cfg.bs_upa.n_rows}, {"n_cols", cfg.bs_upa.n_cols}, {"spacing", cfg.bs_upa.spacing}}},
            {"ms_upa",
             {{"n_rows", cfg.ms_upa.n_rows}, {"n_cols", cfg.ms_upa.n_cols}, {"spacing", cfg.ms_upa.spacing}}},
            {"power",
             {{"p_rf", cfg.power.p_rf},
              {"p_ps", cfg.power.p_ps},
              {"p_sw", cfg.power.p_sw},
              {"m_lens", cfg.m_lens_power}}},
            {"schemes", schemes}};
}

ExperimentConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("load_config: cannot open " + path);
    nlohmann::json j;
    try
    {
        in >> j;
    }
    catch (const nlohmann::json::exception& e)
    {
        throw std::runtime_error("load_config: " + path + ": " + e.what());
    }
    return config_from_json(j);
}

void validate_config(const ExperimentConfig& cfg)
{
    if (cfg.num_trials == 0)
        throw std::invalid_argument("config: num_trials must be at least 1");
    if (cfg.schemes.empty())
        throw std::invalid_argument("config: scheme list is empty");
    if (cfg.snr_sweep_db.empty())
        throw std::invalid_argument("config: snr_sweep_db is empty");
    if (cfg.channel.num_paths == 0)
        throw std::invalid_argument("config: channel.num_paths must be at least 1");
    if (cfg.channel.azimuth_range.width() < 0.0 || cfg.channel.elevation_range.width() < 0.0)
        throw std::invalid_argument("config: channel angle range with hi < lo");
    if (cfg.bs_upa.num_elements() == 0 || cfg.ms_upa.num_elements() == 0)
        throw std::invalid_argument("config: UPA with zero elements");

    bool ref_in_sweep = false;
    for (double snr : cfg.snr_sweep_db)
        ref_in_sweep = ref_in_sweep || std::abs(snr - cfg.reference_snr_db) < 1e-9;
    if (!ref_in_sweep)
        throw std::invalid_argument("config: reference_snr_db must be one of the sweep points");

    const long min_cp = boundary_ceil(cfg.channel.bandwidth_hz * cfg.channel.delay_max_s);
    bool any_lens = false;

    for (const SchemeConfig& sc : cfg.schemes)
    {
        if (sc.m_rf == 0)
            throw std::invalid_argument("config: scheme with m_rf = 0");
        switch (sc.scheme)
        {
        case SchemeKind::lens_sc_pdm:
            any_lens = true;
            break;
        case SchemeKind::upa_digital_ofdm:
            if (sc.m_rf != cfg.bs_upa.num_elements())
                throw std::invalid_argument(
                    "config: digital scheme must have one RF chain per element");
            break;
        case SchemeKind::upa_hybrid_ofdm:
            if (sc.m_rf > sc.codebook_size)
                throw std::invalid_argument("config: hybrid m_rf exceeds codebook size");
            break;
        }
        if (sc.scheme != SchemeKind::lens_sc_pdm)
        {
            if (sc.n_subcarriers == 0)
                throw std::invalid_argument("config: n_subcarriers must be at least 1");
            if (static_cast<long>(sc.cp_len) < min_cp)
                throw std::invalid_argument("config: cp_len shorter than the channel delay spread");
        }
    }

    if (any_lens)
    {
        // The lens geometry must cover the configured departure angles.
        const double half_az = 0.5 * cfg.bs_lens.phi_cov + boundary_tol;
        const double half_el = 0.5 * cfg.bs_lens.theta_cov + boundary_tol;
        if (cfg.channel.azimuth_range.lo < -half_az || cfg.channel.azimuth_range.hi > half_az ||
            cfg.channel.elevation_range.lo < -half_el || cfg.channel.elevation_range.hi > half_el)
            throw std::invalid_argument("config: channel angle ranges exceed the lens coverage");
    }
}

AggregateResult run_experiment(const ExperimentConfig& cfg)
{
    validate_config(cfg);

    const LensArrayGeometry lens =
        build_lens_geometry(cfg.bs_lens.d_y, cfg.bs_lens.d_z, cfg.bs_lens.theta_cov, cfg.bs_lens.phi_cov);
    const UpaGeometry bs_upa =
        make_aperture_equalized_upa(cfg.bs_upa.n_rows, cfg.bs_upa.n_cols, cfg.bs_upa.spacing);
    const ArrayGeometry ms =
        make_aperture_equalized_upa(cfg.ms_upa.n_rows, cfg.ms_upa.n_cols, cfg.ms_upa.spacing);

    // One codebook per hybrid scheme, built up front and shared by all
    // trials of that scheme.
    std::vector<Codebook> codebooks(cfg.schemes.size());
    for (std::size_t si = 0; si < cfg.schemes.size(); ++si)
        if (cfg.schemes[si].scheme == SchemeKind::upa_hybrid_ofdm)
            codebooks[si] = build_codebook(cfg.schemes[si].codebook_size,
                                           cfg.schemes[si].codebook_azimuth,
                                           cfg.schemes[si].codebook_elevation, bs_upa);

    const std::size_t n_schemes = cfg.schemes.size();
    const std::size_t n_snr = cfg.snr_sweep_db.size();
    const std::size_t n_trials = cfg.num_trials;

    std::vector<double> se(n_trials * n_schemes * n_snr);
    std::vector<std::uint64_t> hashes(n_trials);

    const auto run_range = [&](std::size_t t0, std::size_t t1)
    {
        for (std::size_t t = t0; t < t1; ++t)
        {
            RngStream rng(derive_stream_seed(cfg.master_seed, t));
            const MultipathChannel ch = sample_channel(cfg.channel, rng);
            hashes[t] = channel_hash(ch);

            for (std::size_t si = 0; si < n_schemes; ++si)
            {
                SchemeConfig sc = cfg.schemes[si];
                for (std::size_t ki = 0; ki < n_snr; ++ki)
                {
                    sc.snr_db = cfg.snr_sweep_db[ki];
                    SchemeResult r;
                    switch (sc.scheme)
                    {
                    case SchemeKind::lens_sc_pdm:
                        r = lens_sc_pdm_rate(ch, lens, ms, sc);
                        break;
                    case SchemeKind::upa_digital_ofdm:
                        r = ofdm_digital_rate(ch, bs_upa, ms, sc);
                        break;
                    case SchemeKind::upa_hybrid_ofdm:
                        r = hybrid_rate(ch, bs_upa, ms, sc, codebooks[si]);
                        break;
                    }
                    se[(t * n_schemes + si) * n_snr + ki] = r.spectral_efficiency;
                }
            }
        }
    };

    std::size_t n_threads = std::thread::hardware_concurrency();
    if (n_threads == 0)
        n_threads = 1;
    n_threads = std::min(n_threads, n_trials);

    if (n_threads <= 1)
    {
        run_range(0, n_trials);
    }
    else
    {
        std::vector<std::thread> pool;
        std::vector<std::exception_ptr> errors(n_threads);
        const std::size_t chunk = (n_trials + n_threads - 1) / n_threads;
        for (std::size_t w = 0; w < n_threads; ++w)
        {
            const std::size_t t0 = w * chunk;
            const std::size_t t1 = std::min(n_trials, t0 + chunk);
            pool.emplace_back(
                [&, w, t0, t1]
                {
                    try
                    {
                        run_range(t0, t1);
                    }
                    catch (...)
                    {
                        errors[w] = std::current_exception();
                    }
                });
        }
        for (std::thread& th : pool)
            th.join();
        for (const std::exception_ptr& e : errors)
            if (e)
                std::rethrow_exception(e);
    }

    AggregateResult res;
    res.reference_snr_db = cfg.reference_snr_db;
    res.trial_channel_hashes = std::move(hashes);

    const std::size_t m_lens_power = cfg.m_lens_power > 0 ? cfg.m_lens_power : lens.num_elements();
    for (std::size_t si = 0; si < n_schemes; ++si)
    {
        const SchemeConfig& sc = cfg.schemes[si];
        double power_w = 0.0;
        switch (sc.scheme)
        {
        case SchemeKind::lens_sc_pdm:
            power_w = power_lens(m_lens_power, sc.m_rf, cfg.power);
            break;
        case SchemeKind::upa_digital_ofdm:
            power_w = power_digital(cfg.bs_upa.num_elements(), cfg.power);
            break;
        case SchemeKind::upa_hybrid_ofdm:
            power_w = power_hybrid(cfg.bs_upa.num_elements(), sc.m_rf, cfg.power);
            break;
        }

        SchemeSummary summary;
        summary.scheme = sc.scheme;
        summary.m_rf = sc.m_rf;
        summary.power_w = power_w;

        for (std::size_t ki = 0; ki < n_snr; ++ki)
        {
            AggregateCell cell;
            cell.scheme = sc.scheme;
            cell.m_rf = sc.m_rf;
            cell.snr_db = cfg.snr_sweep_db[ki];
            cell.trials = n_trials;
            cell.power_w = power_w;

            double mean = 0.0;
            for (std::size_t t = 0; t < n_trials; ++t)
                mean += se[(t * n_schemes + si) * n_snr + ki];
            mean /= static_cast<double>(n_trials);

            double var = 0.0;
            if (n_trials > 1)
            {
                for (std::size_t t = 0; t < n_trials; ++t)
                {
                    const double d = se[(t * n_schemes + si) * n_snr + ki] - mean;
                    var += d * d;
                }
                var /= static_cast<double>(n_trials - 1);
            }
            cell.mean_se = mean;
            cell.stderr_se = std::sqrt(var / static_cast<double>(n_trials));
            res.cells.push_back(cell);

            if (std::abs(cell.snr_db - cfg.reference_snr_db) < 1e-9)
                summary.energy_efficiency = mean / power_w;
        }
        res.schemes.push_back(summary);
    }
    return res;
}

std::string results_to_csv(const AggregateResult& res)
{
    std::string csv = "scheme,m_rf,snr_db,mean_se,stderr_se,power_w\n";
    for (const AggregateCell& c : res.cells)
    {
        csv += to_string(c.scheme);
        csv += ',';
        csv += std::to_string(c.m_rf);
        csv += ',';
        csv += format_double(c.snr_db);
        csv += ',';
        csv += format_double(c.mean_se);
        csv += ',';
        csv += format_double(c.stderr_se);
        csv += ',';
        csv += format_double(c.power_w);
        csv += '\n';
    }
    return csv;
}

nlohmann::json results_to_json(const AggregateResult& res, const ExperimentConfig& cfg)
{
    nlohmann::json cells = nlohmann::json::array();
    for (const AggregateCell& c : res.cells)
    {
        cells.push_back({{"scheme", to_string(c.scheme)},
                         {"m_rf", c.m_rf},
                         {"snr_db", c.snr_db},
                         {"mean_se", c.mean_se},
                         {"stderr_se", c.stderr_se},
                         {"trials", c.trials},
                         {"power_w", c.power_w}});
    }
    nlohmann::json schemes = nlohmann::json::array();
    for (const SchemeSummary& s : res.schemes)
    {
        schemes.push_back({{"scheme", to_string(s.scheme)},
                           {"m_rf", s.m_rf},
                           {"power_w", s.power_w},
                           {"energy_efficiency", s.energy_efficiency}});
    }
    return {{"config", config_to_json(cfg)},
            {"reference_snr_db", res.reference_snr_db},
            {"cells", cells},
            {"schemes", schemes},
            {"trial_channel_hashes", res.trial_channel_hashes}};
}

AggregateResult results_from_json(const nlohmann::json& j)
{
    AggregateResult res;
    res.reference_snr_db = j.at("reference_snr_db").get<double>();
    for (const nlohmann::json& jc : j.at("cells"))
    {
        AggregateCell c;
        c.scheme = scheme_from_string(jc.at("scheme").get<std::string>());
        c.m_rf = jc.at("m_rf").get<std::size_t>();
        c.snr_db = jc.at("snr_db").get<double>();
        c.mean_se = jc.at("mean_se").get<double>();
        c.stderr_se = jc.at("stderr_se").get<double>();
        c.trials = jc.at("trials").get<std::size_t>();
        c.power_w = jc.at("power_w").get<double>();
        res.cells.push_back(c);
    }
    for (const nlohmann::json& js : j.at("schemes"))
    {
        SchemeSummary s;
        s.scheme = scheme_from_string(js.at("scheme").get<std::string>());
        s.m_rf = js.at("m_rf").get<std::size_t>();
        s.power_w = js.at("power_w").get<double>();
        s.energy_efficiency = js.at("energy_efficiency").get<double>();
        res.schemes.push_back(s);
    }
    res.trial_channel_hashes = j.at("trial_channel_hashes").get<std::vector<std::uint64_t>>();
    return res;
}

void emit_results(const AggregateResult& res, const ExperimentConfig& cfg)
{
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(cfg.output_dir, ec);
    if (ec)
        throw std::runtime_error("emit_results: cannot create " + cfg.output_dir + ": " + ec.message());

    const std::string csv_path = (fs::path(cfg.output_dir) / "results.csv").string();
    {
        std::ofstream out(csv_path, std::ios::binary);
        out << results_to_csv(res);
        if (!out)
            throw std::runtime_error("emit_results: cannot write " + csv_path);
    }

    const std::string json_path = (fs::path(cfg.output_dir) / "results.json").string();
    {
        std::ofstream out(json_path, std::ios::binary);
        out << results_to_json(res, cfg).dump(2) << '\n';
        if (!out)
            throw std::runtime_error("emit_results: cannot write " + json_path);
    }
}

} // namespace lensmimo
