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

#ifndef LENSMIMO_COMMON_H
#define LENSMIMO_COMMON_H

#include <cmath>

namespace lensmimo
{

constexpr double pi = 3.141592653589793238462643383279502884;

// Tolerance used wherever a continuous quantity is compared against an
// integer grid boundary (element placement, CP length, response arguments).
// Angle-to-index conversions carry O(1e-16) rounding noise; anything below
// this threshold is treated as sitting exactly on the boundary.
constexpr double boundary_tol = 1e-9;

constexpr double deg2rad(double deg) { return deg * (pi / 180.0); }
constexpr double rad2deg(double rad) { return rad * (180.0 / pi); }

// floor(x) with the boundary guard, so that e.g. 10*sin(30 deg) counts as 5
// even though it evaluates to 4.999999999999999 in double precision.
inline long boundary_floor(double x)
{
    return static_cast<long>(std::floor(x + boundary_tol));
}

// ceil(x) with the same guard on the other side.
inline long boundary_ceil(double x)
{
    return static_cast<long>(std::ceil(x - boundary_tol));
}

// Propagation direction seen from an array, radians.
struct Direction
{
    double theta = 0.0; // elevation, [-pi/2, pi/2]
    double phi = 0.0;   // azimuth, [-pi/2, pi/2]
};

// Closed angle interval, radians.
struct AngleInterval
{
    double lo = 0.0;
    double hi = 0.0;

    double width() const { return hi - lo; }
    bool contains(double x, double tol = boundary_tol) const
    {
        return x >= lo - tol && x <= hi + tol;
    }
};

} // namespace lensmimo

#endif
