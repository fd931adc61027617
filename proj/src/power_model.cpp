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

#include "lensmimo/power_model.hpp"

#include <stdexcept>

namespace lensmimo
{

static void check_model(const PowerModel& model)
{
    if (!(model.p_rf > 0.0) || !(model.p_ps > 0.0) || !(model.p_sw > 0.0))
        throw std::invalid_argument("PowerModel: all power constants must be positive");
}

double power_digital(std::size_t m, const PowerModel& model)
{
    check_model(model);
    if (m == 0)
        throw std::invalid_argument("power_digital: antenna count must be at least 1");
    return static_cast<double>(m) * model.p_rf;
}

double power_hybrid(std::size_t m, std::size_t m_rf, const PowerModel& model)
{
    check_model(model);
    if (m == 0 || m_rf == 0)
        throw std::invalid_argument("power_hybrid: counts must be at least 1");
    if (m_rf > m)
        throw std::invalid_argument("power_hybrid: m_rf exceeds antenna count");
    return static_cast<double>(m_rf) * model.p_rf +
           static_cast<double>(m * m_rf) * model.p_ps;
}

double power_lens(std::size_t m_lens, std::size_t m_rf, const PowerModel& model)
{
    check_model(model);
    if (m_lens == 0 || m_rf == 0)
        throw std::invalid_argument("power_lens: counts must be at least 1");
    if (m_rf > m_lens)
        throw std::invalid_argument("power_lens: m_rf exceeds antenna count");
    return static_cast<double>(m_rf) * model.p_rf +
           static_cast<double>(m_lens * m_rf) * model.p_sw;
}

} // namespace lensmimo
