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

#include "lensmimo/array_models.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

namespace lensmimo
{

double sinc(double x)
{
    const double ax = std::abs(x);
    if (ax < 1e-12)
    {
        const double px = pi * x;
        return 1.0 - px * px / 6.0;
    }

    // sin(pi x) = (-1)^r sin(pi f) with x = r + f, r integer, |f| <= 0.5.
    // The subtraction x - r is exact, so integer x yields f = 0 and an
    // exact zero result.
    const double r = std::nearbyint(x);
    const double f = x - r;
    double s = std::sin(pi * f);
    if (std::fmod(std::abs(r), 2.0) == 1.0)
        s = -s;
    return s / (pi * x);
}

// Angle-to-grid conversions produce values like 4.999999999999999 where the
// exact result is 5; snap those onto the integer so grid directions line up
// with their elements bit-exactly.
static double snap_to_grid(double u)
{
    const double r = std::nearbyint(u);
    return std::abs(u - r) <= boundary_tol ? r : u;
}

long LensArrayGeometry::find_element(long elev_index, long az_index) const
{
    for (std::size_t i = 0; i < elements.size(); ++i)
        if (elements[i].elev_index == elev_index && elements[i].az_index == az_index)
            return static_cast<long>(i);
    return -1;
}

LensArrayGeometry build_lens_geometry(double d_y, double d_z, double theta_cov, double phi_cov)
{
    if (!(d_y > 0.0) || !(d_z > 0.0))
        throw std::invalid_argument("build_lens_geometry: aperture dimensions must be positive");
    if (theta_cov < 0.0 || theta_cov > pi + boundary_tol)
        throw std::invalid_argument("build_lens_geometry: theta_cov outside [0, pi]");
    if (phi_cov < 0.0 || phi_cov > pi + boundary_tol)
        throw std::invalid_argument("build_lens_geometry: phi_cov outside [0, pi]");

    LensArrayGeometry geom;
    geom.d_y = d_y;
    geom.d_z = d_z;
    geom.theta_cov = theta_cov;
    geom.phi_cov = phi_cov;

    const long me_max = boundary_floor(d_z * std::sin(0.5 * theta_cov));
    for (long me = -me_max; me <= me_max; ++me)
    {
        const double theta = std::asin(static_cast<double>(me) / d_z);
        const double ct = std::cos(theta);

        // At theta = +-pi/2 the azimuth grid degenerates to a single
        // broadside element.
        long ma_max = 0;
        if (ct > boundary_tol)
            ma_max = boundary_floor(d_y * ct * std::sin(0.5 * phi_cov));

        for (long ma = -ma_max; ma <= ma_max; ++ma)
        {
            LensElement el;
            el.elev_index = me;
            el.az_index = ma;
            el.theta = theta;
            el.phi = ct > boundary_tol ? std::asin(static_cast<double>(ma) / (d_y * ct)) : 0.0;
            geom.elements.push_back(el);
        }
    }
    return geom;
}

arma::vec lens_response(const LensArrayGeometry& geom, Direction dir)
{
    const double amp = std::sqrt(geom.d_y * geom.d_z);
    const double ue = snap_to_grid(geom.d_z * std::sin(dir.theta));
    const double ua = snap_to_grid(geom.d_y * std::cos(dir.theta) * std::sin(dir.phi));

    arma::vec a(geom.elements.size());
    for (std::size_t i = 0; i < geom.elements.size(); ++i)
    {
        const LensElement& el = geom.elements[i];
        a[i] = amp * sinc(static_cast<double>(el.elev_index) - ue) *
               sinc(static_cast<double>(el.az_index) - ua);
    }
    return a;
}

UpaGeometry make_aperture_equalized_upa(std::size_t n_rows, std::size_t n_cols, double spacing)
{
    if (n_rows == 0 || n_cols == 0)
        throw std::invalid_argument("make_aperture_equalized_upa: empty array");
    if (!(spacing > 0.0))
        throw std::invalid_argument("make_aperture_equalized_upa: spacing must be positive");

    UpaGeometry geom;
    geom.n_rows = n_rows;
    geom.n_cols = n_cols;
    geom.spacing = spacing;
    // ||a||^2 = n_rows n_cols scale^2 = aperture_y aperture_z
    geom.amplitude_scale =
        std::sqrt(geom.aperture_y() * geom.aperture_z() / static_cast<double>(n_rows * n_cols));
    return geom;
}

arma::cx_vec upa_response(const UpaGeometry& geom, Direction dir)
{
    if (geom.n_rows == 0 || geom.n_cols == 0)
        throw std::invalid_argument("upa_response: empty array");

    const double se = std::sin(dir.theta);
    const double cs = std::cos(dir.theta) * std::sin(dir.phi);
    const double step = 2.0 * pi * geom.spacing;

    arma::cx_vec a(geom.n_rows * geom.n_cols);
    for (std::size_t p = 0; p < geom.n_rows; ++p)
    {
        const double row_phase = step * static_cast<double>(p) * se;
        for (std::size_t q = 0; q < geom.n_cols; ++q)
        {
            const double phase = row_phase + step * static_cast<double>(q) * cs;
            a[p * geom.n_cols + q] = std::polar(geom.amplitude_scale, phase);
        }
    }
    return a;
}

std::size_t num_elements(const ArrayGeometry& geom)
{
    return std::visit([](const auto& g) { return g.num_elements(); }, geom);
}

arma::cx_vec array_response(const ArrayGeometry& geom, Direction dir)
{
    if (const auto* lens = std::get_if<LensArrayGeometry>(&geom))
        return arma::cx_vec(lens_response(*lens, dir), arma::vec(lens->num_elements(), arma::fill::zeros));
    return upa_response(std::get<UpaGeometry>(geom), dir);
}

std::vector<DirectionPower> power_response_map(const LensArrayGeometry& geom,
                                               const std::vector<Direction>& dirs)
{
    std::vector<DirectionPower> out;
    out.reserve(dirs.size());

    for (const Direction& dir : dirs)
    {
        DirectionPower dp;
        dp.dir = dir;
        dp.in_coverage = geom.contains(dir);
        dp.power = arma::square(lens_response(geom, dir));
        dp.total_power = arma::accu(dp.power);
        dp.argmax_index = dp.power.index_max(); // first index on ties
        dp.argmax_fraction = dp.total_power > 0.0 ? dp.power[dp.argmax_index] / dp.total_power : 0.0;
        out.push_back(std::move(dp));
    }
    return out;
}

} // namespace lensmimo
