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

#include "lensmimo/channel.hpp"

#include <cmath>
#include <cstring>
#include <stdexcept>

namespace lensmimo
{

MultipathChannel sample_channel(const ChannelSamplingParams& params, RngStream& rng)
{
    if (params.num_paths == 0)
        throw std::invalid_argument("sample_channel: num_paths must be at least 1");
    if (params.azimuth_range.width() < 0.0 || params.elevation_range.width() < 0.0)
        throw std::invalid_argument("sample_channel: angle range with hi < lo");
    if (params.delay_max_s < 0.0)
        throw std::invalid_argument("sample_channel: negative delay_max_s");
    if (params.power_profile == PowerProfile::exponential && !(params.exp_decay > 0.0))
        throw std::invalid_argument("sample_channel: exponential profile needs positive decay");

    MultipathChannel ch;
    ch.carrier_hz = params.carrier_hz;
    ch.bandwidth_hz = params.bandwidth_hz;
    ch.t_max_s = params.delay_max_s;
    ch.paths.resize(params.num_paths);

    for (PathComponent& p : ch.paths)
    {
        p.bs_dir.theta = rng.uniform(params.elevation_range.lo, params.elevation_range.hi);
        p.bs_dir.phi = rng.uniform(params.azimuth_range.lo, params.azimuth_range.hi);
        p.ms_dir.theta = rng.uniform(params.elevation_range.lo, params.elevation_range.hi);
        p.ms_dir.phi = rng.uniform(params.azimuth_range.lo, params.azimuth_range.hi);
        p.delay_s = rng.uniform(0.0, params.delay_max_s);
    }

    const std::size_t n = params.num_paths;
    std::vector<double> w(n);
    double sum = 0.0;
    for (std::size_t l = 0; l < n; ++l)
    {
        w[l] = params.power_profile == PowerProfile::uniform_random
                   ? rng.uniform_pos()
                   : std::exp(-static_cast<double>(l) / params.exp_decay);
        sum += w[l];
    }

    for (std::size_t l = 0; l < n; ++l)
    {
        const double phase = rng.uniform(0.0, 2.0 * pi);
        ch.paths[l].gain = std::polar(std::sqrt(w[l] / sum), phase);
    }
    return ch;
}

MultipathChannel sample_channel(const ChannelSamplingParams& params)
{
    RngStream rng(params.seed);
    return sample_channel(params, rng);
}

arma::cx_mat bs_response_matrix(const MultipathChannel& ch, const ArrayGeometry& bs)
{
    arma::cx_mat a(num_elements(bs), ch.num_paths());
    for (std::size_t l = 0; l < ch.num_paths(); ++l)
        a.col(l) = array_response(bs, ch.paths[l].bs_dir);
    return a;
}

arma::cx_mat ms_response_matrix(const MultipathChannel& ch, const ArrayGeometry& ms)
{
    arma::cx_mat a(num_elements(ms), ch.num_paths());
    for (std::size_t l = 0; l < ch.num_paths(); ++l)
        a.col(l) = array_response(ms, ch.paths[l].ms_dir);
    return a;
}

std::vector<arma::cx_mat> freq_response(const MultipathChannel& ch, const ArrayGeometry& bs,
                                        const ArrayGeometry& ms, std::size_t n_subcarriers)
{
    if (n_subcarriers == 0)
        throw std::invalid_argument("freq_response: n_subcarriers must be at least 1");
    if (ch.num_paths() == 0)
        throw std::invalid_argument("freq_response: channel has no paths");

    const arma::cx_mat a_bs = bs_response_matrix(ch, bs);
    const arma::cx_mat a_ms = ms_response_matrix(ch, ms);
    const std::size_t n_paths = ch.num_paths();

    std::vector<arma::cx_mat> h;
    h.reserve(n_subcarriers);

    arma::cx_vec c(n_paths);
    for (std::size_t k = 0; k < n_subcarriers; ++k)
    {
        const double f_k = static_cast<double>(k) * ch.bandwidth_hz / static_cast<double>(n_subcarriers);
        for (std::size_t l = 0; l < n_paths; ++l)
            c[l] = ch.paths[l].gain * std::polar(1.0, -2.0 * pi * f_k * ch.paths[l].delay_s);
        h.push_back(a_ms * arma::diagmat(c) * a_bs.st());
    }
    return h;
}

arma::cx_mat effective_flat_channel(const MultipathChannel& ch, const LensArrayGeometry& bs,
                                    const ArrayGeometry& ms, const DelayCompensation& comp)
{
    const std::size_t m_bs = bs.num_elements();
    const std::size_t m_ms = num_elements(ms);
    if (ch.num_paths() == 0)
        throw std::invalid_argument("effective_flat_channel: channel has no paths");
    for (const auto& [idx, delay] : comp)
    {
        if (idx >= m_bs)
            throw std::invalid_argument("effective_flat_channel: compensation index out of range");
        if (delay < 0.0)
            throw std::invalid_argument("effective_flat_channel: negative compensated delay");
    }

    const double f_eff = 0.5 * ch.bandwidth_hz;
    arma::cx_mat h(m_ms, m_bs, arma::fill::zeros);
    arma::cx_vec a_tx(m_bs);

    for (std::size_t l = 0; l < ch.num_paths(); ++l)
    {
        const PathComponent& p = ch.paths[l];
        const arma::vec a_bs = lens_response(bs, p.bs_dir);

        for (std::size_t m = 0; m < m_bs; ++m)
        {
            const auto it = comp.find(m);
            const double tau_comp = it != comp.end() ? it->second : 0.0;
            if (tau_comp == p.delay_s)
                a_tx[m] = a_bs[m];
            else
                a_tx[m] = a_bs[m] * std::polar(1.0, -2.0 * pi * f_eff * (p.delay_s - tau_comp));
        }
        h += p.gain * (array_response(ms, p.ms_dir) * a_tx.st());
    }
    return h;
}

double leakage_ratio(const MultipathChannel& ch, const LensArrayGeometry& bs,
                     const std::vector<std::size_t>& selection,
                     const std::vector<std::size_t>& path_assignment)
{
    if (selection.size() != path_assignment.size())
        throw std::invalid_argument("leakage_ratio: selection and assignment lengths differ");

    const std::size_t n_paths = ch.num_paths();
    arma::mat power(bs.num_elements(), n_paths);
    for (std::size_t l = 0; l < n_paths; ++l)
        power.col(l) = std::norm(ch.paths[l].gain) * arma::square(lens_response(bs, ch.paths[l].bs_dir));

    double assigned = 0.0, total = 0.0;
    for (std::size_t i = 0; i < selection.size(); ++i)
    {
        if (selection[i] >= bs.num_elements() || path_assignment[i] >= n_paths)
            throw std::invalid_argument("leakage_ratio: index out of range");
        assigned += power(selection[i], path_assignment[i]);
        total += arma::accu(power.row(selection[i]));
    }
    return total > 0.0 ? (total - assigned) / total : 0.0;
}

nlohmann::json channel_to_json(const MultipathChannel& ch)
{
    nlohmann::json paths = nlohmann::json::array();
    for (const PathComponent& p : ch.paths)
    {
        paths.push_back({{"bs_elevation_deg", rad2deg(p.bs_dir.theta)},
                         {"bs_azimuth_deg", rad2deg(p.bs_dir.phi)},
                         {"ms_elevation_deg", rad2deg(p.ms_dir.theta)},
                         {"ms_azimuth_deg", rad2deg(p.ms_dir.phi)},
                         {"delay_ns", p.delay_s * 1e9},
                         {"gain", {{"re", p.gain.real()}, {"im", p.gain.imag()}}}});
    }
    return {{"carrier_hz", ch.carrier_hz},
            {"bandwidth_hz", ch.bandwidth_hz},
            {"t_max_ns", ch.t_max_s * 1e9},
            {"paths", paths}};
}

MultipathChannel channel_from_json(const nlohmann::json& j)
{
    MultipathChannel ch;
    ch.carrier_hz = j.at("carrier_hz").get<double>();
    ch.bandwidth_hz = j.at("bandwidth_hz").get<double>();
    ch.t_max_s = j.at("t_max_ns").get<double>() * 1e-9;
    for (const nlohmann::json& jp : j.at("paths"))
    {
        PathComponent p;
        p.bs_dir.theta = deg2rad(jp.at("bs_elevation_deg").get<double>());
        p.bs_dir.phi = deg2rad(jp.at("bs_azimuth_deg").get<double>());
        p.ms_dir.theta = deg2rad(jp.at("ms_elevation_deg").get<double>());
        p.ms_dir.phi = deg2rad(jp.at("ms_azimuth_deg").get<double>());
        p.delay_s = jp.at("delay_ns").get<double>() * 1e-9;
        p.gain = {jp.at("gain").at("re").get<double>(), jp.at("gain").at("im").get<double>()};
        ch.paths.push_back(p);
    }
    return ch;
}

static void hash_double(std::uint64_t& h, double v)
{
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof(bits));
    for (int i = 0; i < 8; ++i)
    {
        h ^= (bits >> (8 * i)) & 0xFFu;
        h *= 0x100000001B3ull;
    }
}

std::uint64_t channel_hash(const MultipathChannel& ch)
{
    std::uint64_t h = 0xCBF29CE484222325ull;
    hash_double(h, ch.carrier_hz);
    hash_double(h, ch.bandwidth_hz);
    hash_double(h, ch.t_max_s);
    for (const PathComponent& p : ch.paths)
    {
        hash_double(h, p.bs_dir.theta);
        hash_double(h, p.bs_dir.phi);
        hash_double(h, p.ms_dir.theta);
        hash_double(h, p.ms_dir.phi);
        hash_double(h, p.delay_s);
        hash_double(h, p.gain.real());
        hash_double(h, p.gain.imag());
    }
    return h;
}

} // namespace lensmimo
