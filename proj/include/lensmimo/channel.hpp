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

#ifndef LENSMIMO_CHANNEL_H
#define LENSMIMO_CHANNEL_H

#include <armadillo>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <map>
#include <vector>

#include <nlohmann/json.hpp>

#include "lensmimo/array_models.hpp"
#include "lensmimo/common.hpp"
#include "lensmimo/rng.hpp"

namespace lensmimo
{

// One propagation path of the geometric multipath model.
struct PathComponent
{
    Direction bs_dir;                    // departure direction at the BS
    Direction ms_dir;                    // arrival direction at the MS
    double delay_s = 0.0;                // absolute delay, seconds
    std::complex<double> gain = {0, 0};  // complex path gain
};

// Frequency-selective multipath channel between a BS and an MS array.
// Per-path gains are normalized so sum_l |gain_l|^2 = 1 when produced by
// sample_channel.
struct MultipathChannel
{
    std::vector<PathComponent> paths;
    double carrier_hz = 28e9;
    double bandwidth_hz = 500e6;
    double t_max_s = 100e-9; // delay spread bound, tau_l in [0, t_max_s]

    std::size_t num_paths() const { return paths.size(); }

    // Time-bandwidth product of the delay spread; the minimum CP length of
    // an OFDM scheme over this channel.
    double time_bandwidth() const { return bandwidth_hz * t_max_s; }
};

enum class PowerProfile
{
    uniform_random, // |gain_l|^2 proportional to independent U(0,1] draws
    exponential     // |gain_l|^2 proportional to exp(-l / decay)
};

struct ChannelSamplingParams
{
    std::size_t num_paths = 3;
    AngleInterval azimuth_range = {deg2rad(-60.0), deg2rad(60.0)};   // both link ends
    AngleInterval elevation_range = {deg2rad(-30.0), deg2rad(30.0)}; // both link ends
    double delay_max_s = 100e-9;
    PowerProfile power_profile = PowerProfile::uniform_random;
    double exp_decay = 1.0; // decay constant of the exponential profile
    double carrier_hz = 28e9;
    double bandwidth_hz = 500e6;
    std::uint64_t seed = 0;
};

// Draws one channel realization. Per path, in order: BS elevation, BS
// azimuth, MS elevation, MS azimuth (all uniform over the configured
// ranges), then the delay (uniform over [0, delay_max_s)); afterwards the
// power profile weights and finally the phases (uniform over [0, 2 pi)).
// The draw order is part of the reproducibility contract.
MultipathChannel sample_channel(const ChannelSamplingParams& params, RngStream& rng);

// Convenience overload seeding a fresh stream from params.seed.
MultipathChannel sample_channel(const ChannelSamplingParams& params);

// Per-path response matrices (one column per path).
arma::cx_mat bs_response_matrix(const MultipathChannel& ch, const ArrayGeometry& bs);
arma::cx_mat ms_response_matrix(const MultipathChannel& ch, const ArrayGeometry& ms);

// Frequency response on n_subcarriers tones across the bandwidth,
//
//   H[k] = sum_l gain_l exp(-j 2 pi f_k tau_l) a_ms(l) a_bs(l)^T,
//   f_k  = k * bandwidth / n_subcarriers,
//
// returned as a vector of (M_ms x M_bs) matrices indexed by k.
std::vector<arma::cx_mat> freq_response(const MultipathChannel& ch, const ArrayGeometry& bs,
                                        const ArrayGeometry& ms, std::size_t n_subcarriers);

// Per-BS-element delay pre-compensation, element index -> compensated
// delay in seconds. Elements without an entry are not compensated.
using DelayCompensation = std::map<std::size_t, double>;

// Effective frequency-flat channel after per-element delay
// pre-compensation at the lens BS. A path whose delay is exactly matched
// by the compensation of element m contributes its plain response there;
// a mismatched path picks up the residual narrowband rotation
// exp(-j 2 pi f_eff (tau_l - tau_comp_m)) evaluated at the band center
// f_eff = bandwidth / 2. Returns an (M_ms x M_bs) matrix.
arma::cx_mat effective_flat_channel(const MultipathChannel& ch, const LensArrayGeometry& bs,
                                    const ArrayGeometry& ms, const DelayCompensation& comp);

// Fraction of the received power on the selected elements that originates
// from paths other than the one each element is assigned to. Zero means
// the selected elements separate the paths perfectly.
double leakage_ratio(const MultipathChannel& ch, const LensArrayGeometry& bs,
                     const std::vector<std::size_t>& selection,
                     const std::vector<std::size_t>& path_assignment);

// JSON serialization. Angles are stored in degrees, delays in
// nanoseconds, gains as {"re": ..., "im": ...}.
nlohmann::json channel_to_json(const MultipathChannel& ch);
MultipathChannel channel_from_json(const nlohmann::json& j);

// FNV-1a hash over the raw channel contents, for pairing checks across
// runs: equal hashes mean bit-identical realizations.
std::uint64_t channel_hash(const MultipathChannel& ch);

} // namespace lensmimo

#endif
