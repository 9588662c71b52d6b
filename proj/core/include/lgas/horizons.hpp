// SPDX-License-Identifier: Apache-2.0
//
// Principal (codimension-one) horizons of the cubic Lorentz gas with one
// sphere of radius r per unit cell. Each primitive dual vector l, taken
// modulo inversion, spans a family of scatterer-free slabs of width
// 1/|l| - 2r whenever that width is positive.

#ifndef LGAS_HORIZONS_HPP
#define LGAS_HORIZONS_HPP

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "lgas/lattice.hpp"

namespace lgas::horizons {

struct Horizon {
    lattice::DualVector vector;  ///< inversion representative l
    double norm = 0.0;           ///< L = |l|
    double width = 0.0;          ///< w_H = 1/L - 2r
    std::vector<double> normal;  ///< n_H = l / L
    double perp_covolume = 0.0;  ///< covolume of the projected lattice, 1/L
};

struct HorizonSet {
    std::vector<Horizon> horizons;
    /// Set when r >= 1/2: no principal horizon has positive width.
    bool incipient_or_closed = false;
};

/// Non-incipient principal horizons sorted by (L, lex).
/// Throws std::invalid_argument for d < 2 or r <= 0.
HorizonSet principal_horizons(int d, double r);

/// Number of horizons principal_horizons(d, r) would return, without
/// materialising them.
std::size_t horizon_count_bound(int d, double r);

/// Visits (coords, L, width) for each horizon in lexicographic order without
/// building Horizon records. Does nothing when r >= 1/2.
template <class Visitor>
void for_each_horizon(int d, double r, Visitor&& visit) {
    if (d < 2) throw std::invalid_argument("horizons: dimension must be >= 2");
    if (!(r > 0.0)) throw std::invalid_argument("horizons: radius must be > 0");
    if (r >= 0.5) return;
    lattice::for_each_primitive(d, 1.0 / (2.0 * r), true,
                                [&](const std::vector<int>& v, std::int64_t n2) {
                                    const double L = std::sqrt(static_cast<double>(n2));
                                    const double w = 1.0 / L - 2.0 * r;
                                    if (w > 0.0) visit(v, L, w);
                                });
}

}  // namespace lgas::horizons

#endif  // LGAS_HORIZONS_HPP
