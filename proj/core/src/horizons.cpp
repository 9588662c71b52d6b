// SPDX-License-Identifier: Apache-2.0

#include "lgas/horizons.hpp"

#include <algorithm>
#include <cmath>

namespace lgas::horizons {

HorizonSet principal_horizons(int d, double r) {
    HorizonSet set;
    if (d >= 2 && r >= 0.5) {
        set.incipient_or_closed = true;
        return set;
    }
    for_each_horizon(d, r, [&](const std::vector<int>& v, double L, double w) {
        Horizon h;
        h.vector.coords = v;
        std::int64_t n2 = 0;
        for (int c : v) n2 += static_cast<std::int64_t>(c) * c;
        h.vector.norm_squared = n2;
        h.vector.norm = L;
        h.norm = L;
        h.width = w;
        h.normal.resize(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) h.normal[i] = v[i] / L;
        h.perp_covolume = 1.0 / L;
        set.horizons.push_back(std::move(h));
    });
    std::stable_sort(set.horizons.begin(), set.horizons.end(), [](const Horizon& a, const Horizon& b) {
        return a.vector.norm_squared < b.vector.norm_squared;
    });
    return set;
}

std::size_t horizon_count_bound(int d, double r) {
    std::size_t count = 0;
    for_each_horizon(d, r, [&](const std::vector<int>&, double, double) { ++count; });
    return count;
}

}  // namespace lgas::horizons
