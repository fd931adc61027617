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

#ifndef LENSMIMO_TEST_SUPPORT_H
#define LENSMIMO_TEST_SUPPORT_H

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <utility>
#include <vector>

#include "lensmimo/array_models.hpp"
#include "lensmimo/channel.hpp"
#include "lensmimo/rng.hpp"
#include "lensmimo/transceivers.hpp"

namespace lensmimo::testsup
{

// Closed-form water-filling reference: sorts the inverse gains, then walks
// the candidate active-set sizes and solves the level exactly. Independent
// of the bisection implementation under test.
inline WaterfillResult waterfill_closed_form(const std::vector<double>& gains, double p_total)
{
    std::vector<double> inv;
    for (double g : gains)
        if (g > 0.0)
            inv.push_back(1.0 / g);
    if (inv.empty())
        return {};
    std::sort(inv.begin(), inv.end());

    double level = 0.0;
    double prefix = 0.0;
    for (std::size_t j = 1; j <= inv.size(); ++j)
    {
        prefix += inv[j - 1];
        const double candidate = (p_total + prefix) / static_cast<double>(j);
        if (candidate > inv[j - 1] && (j == inv.size() || candidate <= inv[j]))
        {
            level = candidate;
            break;
        }
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

// Brute-force grid search over the power simplex, refined over several
// rounds. Allocations are compositions p_i = p_total * k_i / n with
// sum k_i = n; each refinement round triples the resolution and re-scans a
// box of two previous-level cells around the incumbent, which the concave
// objective never escapes in practice. The final resolution puts the
// quadratic rate error well below 1e-7 for gains up to 10.
class GridSearcher
{
  public:
    GridSearcher(std::vector<double> gains, double p_total)
        : gains_(std::move(gains)), p_total_(p_total)
    {
    }

    double search()
    {
        const std::size_t d = gains_.size();
        long n = 12;
        std::vector<long> lo(d, 0), hi(d, n);
        scan(n, lo, hi);
        for (int round = 0; round < 9; ++round)
        {
            n *= 3;
            for (std::size_t i = 0; i < d; ++i)
            {
                lo[i] = std::max(0L, 3 * best_k_[i] - 6);
                hi[i] = std::min(n, 3 * best_k_[i] + 6);
            }
            scan(n, lo, hi);
        }
        return best_rate_;
    }

  private:
    void scan(long n, const std::vector<long>& lo, const std::vector<long>& hi)
    {
        const std::size_t d = gains_.size();
        n_ = n;
        lo_ = lo;
        hi_ = hi;
        suffix_lo_.assign(d + 1, 0);
        suffix_hi_.assign(d + 1, 0);
        for (std::size_t i = d; i-- > 0;)
        {
            suffix_lo_[i] = suffix_lo_[i + 1] + lo[i];
            suffix_hi_[i] = suffix_hi_[i + 1] + hi[i];
        }
        k_.assign(d, 0);
        best_rate_ = -1.0;
        recurse(0, n);
    }

    void recurse(std::size_t i, long remaining)
    {
        if (i + 1 == gains_.size())
        {
            if (remaining < lo_[i] || remaining > hi_[i])
                return;
            k_[i] = remaining;
            evaluate();
            return;
        }
        const long v_lo = std::max(lo_[i], remaining - suffix_hi_[i + 1]);
        const long v_hi = std::min(hi_[i], remaining - suffix_lo_[i + 1]);
        for (long v = v_lo; v <= v_hi; ++v)
        {
            k_[i] = v;
            recurse(i + 1, remaining - v);
        }
    }

    void evaluate()
    {
        double rate = 0.0;
        for (std::size_t i = 0; i < gains_.size(); ++i)
            rate += std::log2(1.0 + p_total_ * static_cast<double>(k_[i]) /
                                        static_cast<double>(n_) * gains_[i]);
        if (rate > best_rate_)
        {
            best_rate_ = rate;
            best_k_ = k_;
        }
    }

    std::vector<double> gains_;
    double p_total_;
    long n_ = 0;
    std::vector<long> lo_, hi_, suffix_lo_, suffix_hi_;
    std::vector<long> k_, best_k_;
    double best_rate_ = -1.0;
};

inline double waterfill_grid_oracle(const std::vector<double>& gains, double p_total)
{
    return GridSearcher(gains, p_total).search();
}

// Second independent optimum finder, cheap enough for thousands of vectors:
// iterated exhaustive line searches over pairwise power exchanges. The
// objective is strictly concave and separable, so a point where no pairwise
// transfer helps satisfies the KKT conditions and is the global optimum;
// each line search is a ternary scan over the full feasible transfer
// interval. No water-filling theory enters anywhere.
inline double waterfill_exchange_oracle(const std::vector<double>& gains, double p_total)
{
    std::vector<std::size_t> pos;
    for (std::size_t i = 0; i < gains.size(); ++i)
        if (gains[i] > 0.0)
            pos.push_back(i);
    if (pos.empty())
        return 0.0;

    std::vector<double> p(gains.size(), 0.0);
    for (std::size_t i : pos)
        p[i] = p_total / static_cast<double>(pos.size());

    const auto pair_value = [](double gi, double gj, double pi, double pj)
    { return std::log2(1.0 + pi * gi) + std::log2(1.0 + pj * gj); };

    for (int sweep = 0; sweep < 400; ++sweep)
    {
        double sweep_gain = 0.0;
        for (std::size_t a = 0; a + 1 < pos.size(); ++a)
        {
            for (std::size_t b = a + 1; b < pos.size(); ++b)
            {
                const std::size_t i = pos[a], j = pos[b];
                const double base = pair_value(gains[i], gains[j], p[i], p[j]);

                // Transfer t moves power from j to i, t in [-p_i, p_j].
                double lo = -p[i], hi = p[j];
                int iter = 0;
                while (hi - lo > 1e-13 * p_total && iter++ < 200)
                {
                    const double m1 = lo + (hi - lo) / 3.0;
                    const double m2 = hi - (hi - lo) / 3.0;
                    if (pair_value(gains[i], gains[j], p[i] + m1, p[j] - m1) <
                        pair_value(gains[i], gains[j], p[i] + m2, p[j] - m2))
                        lo = m1;
                    else
                        hi = m2;
                }
                const double t = std::clamp(0.5 * (lo + hi), -p[i], p[j]);
                const double cand = pair_value(gains[i], gains[j], p[i] + t, p[j] - t);
                if (cand > base)
                {
                    p[i] += t;
                    p[j] -= t;
                    sweep_gain += cand - base;
                }
            }
        }
        if (sweep_gain < 1e-13)
            break;
    }

    double rate = 0.0;
    for (std::size_t i : pos)
        rate += std::log2(1.0 + p[i] * gains[i]);
    return rate;
}

// Multipath channel whose paths each depart exactly on a distinct BS lens
// grid direction and arrive exactly on a distinct MS lens grid direction,
// so both response vectors are one-hot and the paths occupy disjoint
// element pairs. Delays uniform, gains random with unit total power.
inline MultipathChannel one_hot_channel(const LensArrayGeometry& bs, const LensArrayGeometry& ms,
                                        const std::vector<std::pair<std::size_t, std::size_t>>& pairs,
                                        RngStream& rng, double delay_max_s = 100e-9)
{
    MultipathChannel ch;
    ch.t_max_s = delay_max_s;

    std::vector<double> w(pairs.size());
    double sum = 0.0;
    for (double& x : w)
    {
        x = rng.uniform_pos();
        sum += x;
    }

    for (std::size_t l = 0; l < pairs.size(); ++l)
    {
        PathComponent p;
        p.bs_dir = {bs.elements[pairs[l].first].theta, bs.elements[pairs[l].first].phi};
        p.ms_dir = {ms.elements[pairs[l].second].theta, ms.elements[pairs[l].second].phi};
        p.delay_s = rng.uniform(0.0, delay_max_s);
        p.gain = std::polar(std::sqrt(w[l] / sum), rng.uniform(0.0, 2.0 * pi));
        ch.paths.push_back(p);
    }
    return ch;
}

// Draws `count` distinct indices from [0, n).
inline std::vector<std::size_t> distinct_indices(std::size_t count, std::size_t n, RngStream& rng)
{
    std::vector<std::size_t> all(n);
    std::iota(all.begin(), all.end(), std::size_t{0});
    for (std::size_t i = 0; i < count; ++i)
    {
        const std::size_t j = i + static_cast<std::size_t>(rng.uniform() * static_cast<double>(n - i));
        std::swap(all[i], all[std::min(j, n - 1)]);
    }
    all.resize(count);
    return all;
}

} // namespace lensmimo::testsup

#endif
