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

#include "lensmimo/transceivers.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numeric>
#include <stdexcept>

namespace lensmimo
{

std::string to_string(SchemeKind scheme)
{
    switch (scheme)
    {
    case SchemeKind::lens_sc_pdm:
        return "lens-sc-pdm";
    case SchemeKind::upa_digital_ofdm:
        return "upa-digital-ofdm";
    case SchemeKind::upa_hybrid_ofdm:
        return "upa-hybrid-ofdm";
    }
    throw std::invalid_argument("to_string: unknown scheme");
}

SchemeKind scheme_from_string(const std::string& name)
{
    if (name == "lens-sc-pdm")
        return SchemeKind::lens_sc_pdm;
    if (name == "upa-digital-ofdm")
        return SchemeKind::upa_digital_ofdm;
    if (name == "upa-hybrid-ofdm")
        return SchemeKind::upa_hybrid_ofdm;
    throw std::invalid_argument("scheme_from_string: unknown scheme '" + name + "'");
}

WaterfillResult waterfill(const std::vector<double>& gains, double total_power)
{
    if (!(total_power > 0.0))
        throw std::invalid_argument("waterfill: total_power must be positive");

    // Inverse gains of the usable channels, ascending, with prefix sums so
    // the allocated power at a given water level is evaluated in O(log n).
    std::vector<double> inv;
    inv.reserve(gains.size());
    for (double g : gains)
        if (g > 0.0)
            inv.push_back(1.0 / g);
    if (inv.empty())
        return {};
    std::sort(inv.begin(), inv.end());

    std::vector<double> prefix(inv.size() + 1, 0.0);
    for (std::size_t i = 0; i < inv.size(); ++i)
        prefix[i + 1] = prefix[i] + inv[i];

    const auto allocated = [&](double level)
    {
        const std::size_t j = static_cast<std::size_t>(
            std::upper_bound(inv.begin(), inv.end(), level) - inv.begin());
        return static_cast<double>(j) * level - prefix[j];
    };

    // allocated() is continuous and non-decreasing in the level, zero at
    // inv.front() and at least total_power at inv.front() + total_power.
    double lo = inv.front();
    double hi = inv.front() + total_power;
    double level = hi;
    for (int it = 0; it < 200; ++it)
    {
        level = 0.5 * (lo + hi);
        const double s = allocated(level);
        if (std::abs(s - total_power) <= 1e-9 * total_power)
            break;
        (s < total_power ? lo : hi) = level;
    }

    WaterfillResult res;
    res.allocation.assign(gains.size(), 0.0);
    for (std::size_t i = 0; i < gains.size(); ++i)
    {
        if (gains[i] <= 0.0)
            continue;
        const double p = level - 1.0 / gains[i];
        if (p > 0.0)
        {
            res.allocation[i] = p;
            res.rate_bits += std::log2(1.0 + p * gains[i]);
        }
    }
    return res;
}

AntennaSelection select_antennas(const MultipathChannel& ch, const ArrayGeometry& geom,
                                 std::size_t m_rf)
{
    if (m_rf == 0)
        throw std::invalid_argument("select_antennas: m_rf must be at least 1");
    if (ch.num_paths() == 0)
        throw std::invalid_argument("select_antennas: channel has no paths");

    const std::size_t m = num_elements(geom);
    const std::size_t n_paths = ch.num_paths();

    arma::mat pw(m, n_paths);
    for (std::size_t l = 0; l < n_paths; ++l)
        pw.col(l) = std::norm(ch.paths[l].gain) *
                    arma::square(arma::abs(array_response(geom, ch.paths[l].bs_dir)));

    AntennaSelection sel;
    sel.element_power = arma::sum(pw, 1);

    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b)
                     { return sel.element_power[a] > sel.element_power[b]; });

    if (m_rf > m)
    {
        std::cerr << "select_antennas: m_rf " << m_rf << " exceeds element count " << m
                  << ", selecting all elements\n";
        sel.truncated = true;
    }
    const std::size_t k = std::min(m_rf, m);
    sel.indices.assign(order.begin(), order.begin() + static_cast<long>(k));
    sel.assigned_path.resize(k);

    double captured = 0.0;
    for (std::size_t i = 0; i < k; ++i)
    {
        sel.assigned_path[i] = pw.row(sel.indices[i]).index_max();
        captured += sel.element_power[sel.indices[i]];
    }
    const double total = arma::accu(sel.element_power);
    sel.captured_fraction = total > 0.0 ? captured / total : 0.0;
    return sel;
}

Codebook build_codebook(std::size_t size, AngleInterval az_range, AngleInterval el_range,
                        const UpaGeometry& geom)
{
    if (size == 0)
        throw std::invalid_argument("build_codebook: empty codebook");
    const auto n = static_cast<std::size_t>(std::lround(std::sqrt(static_cast<double>(size))));
    if (n * n != size)
        throw std::invalid_argument("build_codebook: size must factor as a square angle grid");

    Codebook cb;
    cb.n_azimuth = n;
    cb.n_elevation = n;
    cb.directions.reserve(size);
    cb.vectors.set_size(geom.num_elements(), size);

    const double az_step = az_range.width() / static_cast<double>(n);
    const double el_step = el_range.width() / static_cast<double>(n);

    // Grid points at subdivision midpoints, elevation-major ordering. The
    // transmit-side channel couples through a^T, so the matched beam for a
    // direction is the conjugated steering vector.
    std::size_t idx = 0;
    for (std::size_t ie = 0; ie < n; ++ie)
    {
        for (std::size_t ia = 0; ia < n; ++ia, ++idx)
        {
            Direction dir;
            dir.theta = el_range.lo + (static_cast<double>(ie) + 0.5) * el_step;
            dir.phi = az_range.lo + (static_cast<double>(ia) + 0.5) * az_step;
            cb.directions.push_back(dir);
            cb.vectors.col(idx) = arma::normalise(arma::conj(upa_response(geom, dir)));
        }
    }
    return cb;
}

// Per-path frequency coefficients at tone k of n: gain_l e^{-j 2 pi f_k tau_l}.
static arma::cx_vec tone_coeffs(const MultipathChannel& ch, std::size_t k, std::size_t n)
{
    const double f_k = static_cast<double>(k) * ch.bandwidth_hz / static_cast<double>(n);
    arma::cx_vec c(ch.num_paths());
    for (std::size_t l = 0; l < ch.num_paths(); ++l)
        c[l] = ch.paths[l].gain * std::polar(1.0, -2.0 * pi * f_k * ch.paths[l].delay_s);
    return c;
}

// Eigenmode gains of every tone, one column per tone, descending. With
// H[k] = A_ms C_k B^T for any BS-side stage B (all elements, or the analog
// beams), H[k] H[k]^H = A_ms (kernel o c_k c_k^H) A_ms^H where
// kernel = B^T conj(B) is tone-independent; only the L x L Hadamard factor
// varies with k. This avoids materializing the M_ms x M_bs response per
// tone.
static arma::mat per_tone_eigs(const arma::cx_mat& a_ms, const arma::cx_mat& kernel,
                               const MultipathChannel& ch, std::size_t n_subcarriers)
{
    const std::size_t m_ms = a_ms.n_rows;
    arma::mat eigs(m_ms, n_subcarriers);
    arma::vec vals;
    for (std::size_t k = 0; k < n_subcarriers; ++k)
    {
        const arma::cx_vec c = tone_coeffs(ch, k, n_subcarriers);
        arma::cx_mat x = a_ms * (kernel % (c * c.t())) * a_ms.t();
        x = 0.5 * (x + x.t());
        if (!arma::eig_sym(vals, x))
            throw std::runtime_error("per_tone_eigs: eigendecomposition failed");
        vals.transform([](double v) { return v > 0.0 ? v : 0.0; });
        eigs.col(k) = arma::reverse(vals);
    }
    return eigs;
}

// Joint water-filling across all (tone, eigenmode) pairs under a total
// budget of one unit per tone, then the CP overhead discount.
static void fill_ofdm_result(SchemeResult& res, const arma::mat& eigs, const SchemeConfig& cfg)
{
    const std::size_t n = cfg.n_subcarriers;
    const std::size_t n_streams = eigs.n_rows;
    const double snr_lin = std::pow(10.0, cfg.snr_db / 10.0);

    std::vector<double> gains(n * n_streams);
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t s = 0; s < n_streams; ++s)
            gains[k * n_streams + s] = eigs(s, k) * snr_lin;

    const WaterfillResult wf = waterfill(gains, static_cast<double>(n));
    const double cp_factor = static_cast<double>(n) / static_cast<double>(n + cfg.cp_len);
    res.spectral_efficiency = cp_factor * wf.rate_bits / static_cast<double>(n);

    res.per_stream_power.assign(n_streams, 0.0);
    if (!wf.allocation.empty())
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t s = 0; s < n_streams; ++s)
                res.per_stream_power[s] += wf.allocation[k * n_streams + s] / static_cast<double>(n);
}

SchemeResult lens_sc_pdm_rate(const MultipathChannel& ch, const LensArrayGeometry& bs_geom,
                              const ArrayGeometry& ms_geom, const SchemeConfig& cfg)
{
    if (cfg.scheme != SchemeKind::lens_sc_pdm)
        throw std::invalid_argument("lens_sc_pdm_rate: config is for a different scheme");

    const AntennaSelection sel = select_antennas(ch, ArrayGeometry(bs_geom), cfg.m_rf);

    DelayCompensation comp;
    for (std::size_t i = 0; i < sel.indices.size(); ++i)
        comp[sel.indices[i]] = ch.paths[sel.assigned_path[i]].delay_s;

    const arma::cx_mat h_eff = effective_flat_channel(ch, bs_geom, ms_geom, comp);
    const arma::uvec cols(std::vector<arma::uword>(sel.indices.begin(), sel.indices.end()));
    const arma::vec sv = arma::svd(arma::cx_mat(h_eff.cols(cols)));

    const std::size_t n_streams =
        std::min({sel.indices.size(), static_cast<std::size_t>(h_eff.n_rows), ch.num_paths()});
    const double snr_lin = std::pow(10.0, cfg.snr_db / 10.0);
    std::vector<double> gains(n_streams);
    for (std::size_t s = 0; s < n_streams; ++s)
        gains[s] = sv[s] * sv[s] * snr_lin;

    const WaterfillResult wf = waterfill(gains, 1.0);

    SchemeResult res;
    res.spectral_efficiency = wf.rate_bits;
    res.selected_antennas = sel.indices;
    res.leakage = leakage_ratio(ch, bs_geom, sel.indices, sel.assigned_path);
    res.per_stream_power = wf.allocation;
    return res;
}

SchemeResult ofdm_digital_rate(const MultipathChannel& ch, const UpaGeometry& bs_geom,
                               const ArrayGeometry& ms_geom, const SchemeConfig& cfg)
{
    if (cfg.scheme != SchemeKind::upa_digital_ofdm)
        throw std::invalid_argument("ofdm_digital_rate: config is for a different scheme");
    if (cfg.n_subcarriers == 0)
        throw std::invalid_argument("ofdm_digital_rate: n_subcarriers must be at least 1");

    const arma::cx_mat a_bs = bs_response_matrix(ch, ArrayGeometry(bs_geom));
    const arma::cx_mat a_ms = ms_response_matrix(ch, ms_geom);
    const arma::cx_mat kernel = a_bs.st() * arma::conj(a_bs);

    SchemeResult res;
    fill_ofdm_result(res, per_tone_eigs(a_ms, kernel, ch, cfg.n_subcarriers), cfg);
    return res;
}

SchemeResult hybrid_rate(const MultipathChannel& ch, const UpaGeometry& bs_geom,
                         const ArrayGeometry& ms_geom, const SchemeConfig& cfg)
{
    return hybrid_rate(ch, bs_geom, ms_geom, cfg,
                       build_codebook(cfg.codebook_size, cfg.codebook_azimuth,
                                      cfg.codebook_elevation, bs_geom));
}

SchemeResult hybrid_rate(const MultipathChannel& ch, const UpaGeometry& bs_geom,
                         const ArrayGeometry& ms_geom, const SchemeConfig& cfg,
                         const Codebook& codebook)
{
    if (cfg.scheme != SchemeKind::upa_hybrid_ofdm)
        throw std::invalid_argument("hybrid_rate: config is for a different scheme");
    if (cfg.m_rf == 0)
        throw std::invalid_argument("hybrid_rate: m_rf must be at least 1");
    if (cfg.m_rf > codebook.size())
        throw std::invalid_argument("hybrid_rate: m_rf exceeds codebook size");
    if (codebook.vectors.n_rows != bs_geom.num_elements())
        throw std::invalid_argument("hybrid_rate: codebook built for a different array");
    if (cfg.n_subcarriers == 0)
        throw std::invalid_argument("hybrid_rate: n_subcarriers must be at least 1");

    const std::size_t m = bs_geom.num_elements();
    const std::size_t n_cb = codebook.size();
    const std::size_t n_paths = ch.num_paths();

    const arma::cx_mat a_bs = bs_response_matrix(ch, ArrayGeometry(bs_geom));
    const arma::cx_mat a_ms = ms_response_matrix(ch, ms_geom);

    // Wideband transmit covariance R = sum_k H[k]^H H[k] in its path-domain
    // factorization R = conj(A_bs) K_r A_bs^T: only the L x L core is
    // needed, since candidate energies v^H R v reduce to L-dimensional
    // quadratic forms through z = A_bs^T v.
    arma::cx_mat k_r(n_paths, n_paths, arma::fill::zeros);
    for (std::size_t k = 0; k < cfg.n_subcarriers; ++k)
    {
        const arma::cx_vec c = tone_coeffs(ch, k, cfg.n_subcarriers);
        k_r += arma::conj(c) * c.st();
    }
    k_r %= a_ms.t() * a_ms;

    // Greedy beam selection: each round picks the codebook vector with the
    // largest energy after projecting out the span of the already-chosen
    // beams, then extends the orthonormal basis (Gram-Schmidt). Projections
    // are tracked incrementally: z_c = A_bs^T v_c - Y (U^H v_c).
    const arma::cx_mat w = a_bs.st() * codebook.vectors; // L x n_cb
    arma::cx_mat u(m, cfg.m_rf);                         // orthonormal basis
    arma::cx_mat y(n_paths, cfg.m_rf);                   // A_bs^T U
    arma::cx_mat x(cfg.m_rf, n_cb);                      // U^H V
    std::size_t n_basis = 0;

    std::vector<std::size_t> selected;
    std::vector<char> used(n_cb, 0);

    for (std::size_t round = 0; round < cfg.m_rf; ++round)
    {
        long best = -1;
        double best_energy = -1.0;
        for (std::size_t cnd = 0; cnd < n_cb; ++cnd)
        {
            if (used[cnd])
                continue;
            arma::cx_vec z = w.col(cnd);
            if (n_basis > 0)
                z -= y.cols(0, n_basis - 1) * x.submat(0, cnd, n_basis - 1, cnd);
            const double energy = std::real(arma::cdot(z, k_r * z));
            if (energy > best_energy)
            {
                best_energy = energy;
                best = static_cast<long>(cnd);
            }
        }
        if (best < 0)
            break;
        used[best] = 1;
        selected.push_back(static_cast<std::size_t>(best));

        arma::cx_vec r = codebook.vectors.col(best);
        if (n_basis > 0)
            r -= u.cols(0, n_basis - 1) * (u.cols(0, n_basis - 1).t() * r);
        const double rn = arma::norm(r);
        if (rn > 1e-12)
        {
            r /= rn;
            u.col(n_basis) = r;
            y.col(n_basis) = a_bs.st() * r;
            x.row(n_basis) = r.t() * codebook.vectors;
            ++n_basis;
        }
    }

    // Spectral efficiency through the analog stage. The baseband precoder
    // is free, so the reachable signal space is the span of the selected
    // beams; evaluating on an orthonormal basis of that span keeps the
    // radiated power equal to the allocated power regardless of beam
    // cross-correlation.
    SchemeResult res;
    res.rf_beams = selected;
    if (n_basis == 0)
        return res;

    const arma::cx_mat p = y.cols(0, n_basis - 1); // A_bs^T Q, reusing the tracked products
    const arma::cx_mat kernel = p * p.t();
    fill_ofdm_result(res, per_tone_eigs(a_ms, kernel, ch, cfg.n_subcarriers), cfg);
    return res;
}

} // namespace lensmimo
