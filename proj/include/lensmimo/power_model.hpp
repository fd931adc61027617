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

#ifndef LENSMIMO_POWER_MODEL_H
#define LENSMIMO_POWER_MODEL_H

#include <cstddef>

namespace lensmimo
{

// Per-component power figures of the BS front end, watts.
struct PowerModel
{
    double p_rf = 0.25;  // one RF chain
    double p_ps = 0.015; // one phase shifter
    double p_sw = 0.005; // one analog switch
};

// Fully digital: one RF chain per antenna element.
//   P = m * p_rf
double power_digital(std::size_t m, const PowerModel& model = {});

// Hybrid precoding: m_rf RF chains, each driving all m elements through
// phase shifters.
//   P = m_rf * p_rf + m * m_rf * p_ps
double power_hybrid(std::size_t m, std::size_t m_rf, const PowerModel& model = {});

// Lens array with antenna selection: m_rf RF chains and a full
// m_lens x m_rf switching network.
//   P = m_rf * p_rf + m_lens * m_rf * p_sw
double power_lens(std::size_t m_lens, std::size_t m_rf, const PowerModel& model = {});

} // namespace lensmimo

#endif
