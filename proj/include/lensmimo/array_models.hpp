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

#ifndef LENSMIMO_ARRAY_MODELS_H
#define LENSMIMO_ARRAY_MODELS_H

#include <armadillo>
#include <cstddef>
#include <variant>
#include <vector>

#include "lensmimo/common.hpp"

namespace lensmimo
{

// Normalized sinc, sinc(x) = sin(pi x)/(pi x). Evaluated through argument
// reduction so that exact integer inputs return exact zeros; a naive
// sin(pi*x)/(pi*x) leaves O(1e-16) residue at integers, which would break
// the one-sample-per-beam property of the lens array on its own grid.
double sinc(double x);

// One feed element of the lens array, addressed by its integer position on
// the elevation/azimuth index grid together with the beam direction it
// covers.
struct LensElement
{
    long elev_index = 0;  // m_e
    long az_index = 0;    // m_a
    double theta = 0.0;   // asin(m_e / d_z)
    double phi = 0.0;     // asin(m_a / (d_y cos(theta)))
};

// Lens antenna array. Feed elements sit on the focal surface at positions
// chosen so that each element is matched to one direction of a non-uniform
// angle grid:
//
//   sin(theta_m) = m_e / d_z,   m_e = 0, +-1, ..., +-floor(d_z sin(theta_cov/2))
//   sin(phi_m)   = m_a / (d_y cos(theta_m)),
//                               m_a = 0, +-1, ..., +-floor(d_y cos(theta_m) sin(phi_cov/2))
//
// d_y, d_z are the lens aperture dimensions in wavelengths; theta_cov and
// phi_cov are the full elevation/azimuth coverage angles.
struct LensArrayGeometry
{
    double d_y = 0.0;
    double d_z = 0.0;
    double theta_cov = 0.0;
    double phi_cov = 0.0;

    // Lexicographic in (elev_index, az_index), both ascending.
    std::vector<LensElement> elements;

    std::size_t num_elements() const { return elements.size(); }

    bool contains(Direction dir, double tol = boundary_tol) const
    {
        return std::abs(dir.theta) <= 0.5 * theta_cov + tol &&
               std::abs(dir.phi) <= 0.5 * phi_cov + tol;
    }

    // Position of element (m_e, m_a) in the element list, or -1 if the pair
    // is outside the grid.
    long find_element(long elev_index, long az_index) const;
};

// Enumerates the feed elements for the given aperture and coverage.
// Throws std::invalid_argument for non-positive aperture dimensions or
// coverage angles outside [0, pi].
LensArrayGeometry build_lens_geometry(double d_y, double d_z, double theta_cov, double phi_cov);

// Array response of the lens array for a plane wave from `dir`:
//
//   a_m = sqrt(d_y d_z) * sinc(m_e - d_z sin(theta))
//                       * sinc(m_a - d_y cos(theta) sin(phi))
//
// The response is real by construction (the lens performs the phase
// alignment), one entry per element in element order. Directions outside
// the coverage region are evaluated as-is; coverage is a property of the
// geometry, not a precondition here.
arma::vec lens_response(const LensArrayGeometry& geom, Direction dir);

// Uniform planar array in the y-z plane. Row index p runs along the
// elevation axis, column index q along the azimuth axis; element (p, q) is
// stored at p * n_cols + q.
struct UpaGeometry
{
    std::size_t n_rows = 1;       // elevation axis
    std::size_t n_cols = 1;       // azimuth axis
    double spacing = 0.5;         // element spacing in wavelengths
    double amplitude_scale = 1.0; // per-element amplitude

    std::size_t num_elements() const { return n_rows * n_cols; }
    double aperture_y() const { return static_cast<double>(n_cols) * spacing; }
    double aperture_z() const { return static_cast<double>(n_rows) * spacing; }
};

// UPA whose per-element amplitude is set so the squared response norm
// equals the aperture area d_y * d_z, matching the total captured power of
// a lens aperture of the same size.
UpaGeometry make_aperture_equalized_upa(std::size_t n_rows, std::size_t n_cols, double spacing = 0.5);

// Steering vector of the UPA:
//
//   a_{p,q} = amplitude_scale * exp(j 2 pi spacing (p sin(theta) + q cos(theta) sin(phi)))
arma::cx_vec upa_response(const UpaGeometry& geom, Direction dir);

// Either array type, where an algorithm is agnostic to the front end.
using ArrayGeometry = std::variant<LensArrayGeometry, UpaGeometry>;

std::size_t num_elements(const ArrayGeometry& geom);

// Response of either array type as a complex vector (real-valued lens
// responses are widened).
arma::cx_vec array_response(const ArrayGeometry& geom, Direction dir);

// Per-direction power diagnostics: which element captures a given incoming
// direction and how concentrated the response is.
struct DirectionPower
{
    Direction dir;
    bool in_coverage = false;
    arma::vec power;               // per-element |a_m|^2
    std::size_t argmax_index = 0;  // element with the largest power
    double argmax_fraction = 0.0;  // its share of the total power
    double total_power = 0.0;
};

std::vector<DirectionPower> power_response_map(const LensArrayGeometry& geom,
                                               const std::vector<Direction>& dirs);

} // namespace lensmimo

#endif
