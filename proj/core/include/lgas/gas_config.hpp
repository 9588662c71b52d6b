// SPDX-License-Identifier: Apache-2.0

#ifndef LGAS_GAS_CONFIG_HPP
#define LGAS_GAS_CONFIG_HPP

#include <cmath>
#include <stdexcept>
#include <string>

#include "lgas/special_math.hpp"

namespace lgas {

/// One cubic Lorentz gas: a sphere of radius r centred in each unit cell of Z^d.
///
/// `packing` is V_d r^d, the scatterer volume fraction while spheres do not
/// overlap (r <= 1/2). For 1/2 < r < 1 it is only the nominal single-sphere
/// volume and may exceed 1; closed forms that need the true free volume
/// reject that regime.
struct GasConfig {
    int dim = 0;
    double radius = 0.0;
    double packing = 0.0;
    double covolume = 1.0;

    /// Validates 2 <= d <= 64 and 0 < r < 1. Throws std::invalid_argument.
    static GasConfig make(int d, double r) {
        if (d < 2 || d > 64) {
            throw std::invalid_argument("GasConfig: dimension must be in [2, 64], got " + std::to_string(d));
        }
        if (!(r > 0.0) || !(r < 1.0)) {
            throw std::invalid_argument("GasConfig: radius must be in (0, 1), got " + std::to_string(r));
        }
        GasConfig cfg;
        cfg.dim = d;
        cfg.radius = r;
        cfg.packing = special::ball_measure(d) * std::pow(r, d);
        return cfg;
    }

    bool overlapping() const { return radius > 0.5; }
};

}  // namespace lgas

#endif  // LGAS_GAS_CONFIG_HPP
