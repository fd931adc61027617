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

#ifndef LENSMIMO_HARNESS_H
#define LENSMIMO_HARNESS_H

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lensmimo/channel.hpp"
#include "lensmimo/power_model.hpp"
#include "lensmimo/transceivers.hpp"

namespace lensmimo
{

struct LensSpec
{
    double d_y = 10.0;
    double d_z = 10.0;
    double theta_cov = deg2rad(60.0); // elevation coverage
    double phi_cov = deg2rad(120.0);  // azimuth coverage
};

struct UpaSpec
{
    std::size_t n_rows = 20;
    std::size_t n_cols = 20;
    double spacing = 0.5;

    std::size_t num_elements() const { return n_rows * n_cols; }
};

// Full description of one Monte Carlo experiment. Angles are radians here;
// the JSON config file uses degrees throughout.
struct ExperimentConfig
{
    std::string scenario = "default";
    ChannelSamplingParams channel;
    LensSpec bs_lens;
    UpaSpec bs_upa;            // 20x20 at lambda/2 = same 10x10 aperture as the lens
    UpaSpec ms_upa = {2, 2, 0.5};
    std::vector<SchemeConfig> schemes;
    std::vector<double> snr_sweep_db = {0, 5, 10, 15, 20, 25, 30};
    std::size_t num_trials = 1000;
    std::uint64_t master_seed = 1;
    double reference_snr_db = 10.0; // energy-efficiency operating point
    PowerModel power;
    std::size_t m_lens_power = 0; // 0: use the built lens element count
    std::string output_dir = ".";
};

ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ExperimentConfig& cfg);
ExperimentConfig load_config(const std::string& path);

// Throws std::invalid_argument describing the first violated constraint.
void validate_config(const ExperimentConfig& cfg);

// One (scheme, SNR) point of the sweep.
struct AggregateCell
{
    SchemeKind scheme = SchemeKind::lens_sc_pdm;
    std::size_t m_rf = 0;
    double snr_db = 0.0;
    double mean_se = 0.0;   // bits/s/Hz, averaged over trials
    double stderr_se = 0.0; // standard error of the mean
    std::size_t trials = 0;
    double power_w = 0.0;
};

// Per-scheme figures independent of SNR.
struct SchemeSummary
{
    SchemeKind scheme = SchemeKind::lens_sc_pdm;
    std::size_t m_rf = 0;
    double power_w = 0.0;
    double energy_efficiency = 0.0; // mean SE at the reference SNR / watts
};

struct AggregateResult
{
    std::vector<AggregateCell> cells; // scheme-major, SNR-minor, config order
    std::vector<SchemeSummary> schemes;
    std::vector<std::uint64_t> trial_channel_hashes; // one per trial
    double reference_snr_db = 10.0;
};

// Runs the paired Monte Carlo sweep: every trial samples one channel from
// its own derived RNG stream and evaluates every scheme at every SNR on
// that same realization. Trials may execute concurrently; the aggregation
// is ordered by trial index, so results do not depend on thread count.
AggregateResult run_experiment(const ExperimentConfig& cfg);

std::string results_to_csv(const AggregateResult& res);
nlohmann::json results_to_json(const AggregateResult& res, const ExperimentConfig& cfg);
AggregateResult results_from_json(const nlohmann::json& j);

// Writes results.csv and results.json into cfg.output_dir (created if
// missing). Throws std::runtime_error with the offending path on I/O
// failure.
void emit_results(const AggregateResult& res, const ExperimentConfig& cfg);

// Deterministic shortest-round-trip decimal formatting, used for all CSV
// numbers so identical runs produce byte-identical files.
std::string format_double(double v);

} // namespace lensmimo

#endif
