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

#ifndef LENSMIMO_TRANSCEIVERS_H
#define LENSMIMO_TRANSCEIVERS_H

#include <armadillo>
#include <cstddef>
#include <string>
#include <vector>

#include "lensmimo/array_models.hpp"
#include "lensmimo/channel.hpp"
#include "lensmimo/common.hpp"

namespace lensmimo
{

enum class SchemeKind
{
    lens_sc_pdm,      // lens array, single carrier, path-division multiplexing
    upa_digital_ofdm, // UPA, one RF chain per element, MIMO-OFDM
    upa_hybrid_ofdm   // UPA, m_rf RF chains behind phase shifters, MIMO-OFDM
};

std::string to_string(SchemeKind scheme);
SchemeKind scheme_from_string(const std::string& name);

struct SchemeConfig
{
    SchemeKind scheme = SchemeKind::lens_sc_pdm;
    std::size_t m_rf = 1;
    double snr_db = 0.0;
    std::size_t n_subcarriers = 512; // N
    std::size_t cp_len = 50;         // mu, CP symbols per OFDM block
    std::size_t codebook_size = 256;
    AngleInterval codebook_azimuth = {deg2rad(-60.0), deg2rad(60.0)};
    AngleInterval codebook_elevation = {deg2rad(-30.0), deg2rad(30.0)};
};

struct SchemeResult
{
    double spectral_efficiency = 0.0;          // bits/s/Hz
    std::vector<std::size_t> selected_antennas; // lens scheme
    std::vector<std::size_t> rf_beams;          // hybrid scheme, codebook indices
    double leakage = 0.0;                       // lens scheme, see leakage_ratio
    std::vector<double> per_stream_power;       // water-filling allocation summary
};

struct WaterfillResult
{
    std::vector<double> allocation; // same order as the input gains
    double rate_bits = 0.0;         // sum log2(1 + p_i g_i)
};

// Water-filling over parallel channels with power gains `gains` and a total
// power budget. The water level is found by bisection until the allocated
// power matches the budget to 1e-9 relative. Non-positive gains receive
// zero power. If no gain is positive the result is empty with zero rate.
WaterfillResult waterfill(const std::vector<double>& gains, double total_power);

struct AntennaSelection
{
    std::vector<std::size_t> indices;       // selected elements, descending power
    std::vector<std::size_t> assigned_path; // per selected element
    arma::vec element_power;                // all elements, selection metric
    double captured_fraction = 0.0;         // power on selection / total power
    bool truncated = false;                 // m_rf exceeded the element count
};

// Power-based antenna (element) selection. Elements are ranked by the total
// received power sum_l |gain_l|^2 |a_m(bs_dir_l)|^2; the top m_rf are kept,
// ties broken by element order. Each selected element is assigned the path
// that contributes the most power at it. Works for either array type; for a
// UPA the metric is constant across elements and the selection degenerates
// to the first m_rf indices.
AntennaSelection select_antennas(const MultipathChannel& ch, const ArrayGeometry& geom,
                                 std::size_t m_rf);

struct Codebook
{
    std::size_t n_azimuth = 0;
    std::size_t n_elevation = 0;
    std::vector<Direction> directions; // one per entry
    arma::cx_mat vectors;              // unit-norm columns, one per entry

    std::size_t size() const { return directions.size(); }
};

// Beamsteering codebook on a uniform angle grid over az_range x el_range.
// `size` must factor as n_az x n_el with the two counts proportional to a
// square grid (16 x 16 for the default 256); grid points sit at the
// midpoints of equal subdivisions of each range. Each entry is the
// conjugated, unit-normalized transmit steering vector of its direction.
Codebook build_codebook(std::size_t size, AngleInterval az_range, AngleInterval el_range,
                        const UpaGeometry& geom);

// Lens array with single-carrier path-division multiplexing: power-based
// antenna selection, per-element path delay pre-compensation, then
// water-filled eigenmode signaling over the effective flat channel.
SchemeResult lens_sc_pdm_rate(const MultipathChannel& ch, const LensArrayGeometry& bs_geom,
                              const ArrayGeometry& ms_geom, const SchemeConfig& cfg);

// Fully digital MIMO-OFDM over the UPA: water-filling jointly across the
// eigenmodes of all subcarriers, spectral efficiency discounted by the CP
// overhead N/(N + mu).
SchemeResult ofdm_digital_rate(const MultipathChannel& ch, const UpaGeometry& bs_geom,
                               const ArrayGeometry& ms_geom, const SchemeConfig& cfg);

// Hybrid precoding over the UPA: greedy Gram-Schmidt selection of m_rf
// codebook beams against the wideband transmit covariance, then MIMO-OFDM
// through the selected analog stage, evaluated as in ofdm_digital_rate.
SchemeResult hybrid_rate(const MultipathChannel& ch, const UpaGeometry& bs_geom,
                         const ArrayGeometry& ms_geom, const SchemeConfig& cfg);

// Same, with a caller-provided codebook (reused across Monte Carlo trials).
SchemeResult hybrid_rate(const MultipathChannel& ch, const UpaGeometry& bs_geom,
                         const ArrayGeometry& ms_geom, const SchemeConfig& cfg,
                         const Codebook& codebook);

} // namespace lensmimo

#endif
