// SPDX-License-Identifier: Apache-2.0
//
// Primitive vectors of the self-dual cubic lattice Z^d below a norm bound.

#ifndef LGAS_LATTICE_HPP
#define LGAS_LATTICE_HPP

#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

namespace lgas::lattice {

struct DualVector {
    std::vector<int> coords;
    std::int64_t norm_squared = 0;
    double norm = 0.0;
};

/// True iff v is nonzero and the gcd of its entries is 1.
/// Throws std::invalid_argument for an empty vector.
bool is_primitive(std::span<const int> v);

/// Mobius function. Throws std::domain_error for n < 1.
int moebius(std::int64_t n);

namespace detail {

inline bool first_nonzero_positive(const std::vector<int>& v) {
    for (int c : v) {
        if (c != 0) return c > 0;
    }
    return false;
}

template <class Visitor>
void enumerate_box(std::vector<int>& v, int axis, std::int64_t partial, std::int64_t bound2_exclusive,
                   int radius, bool modulo_inversion, Visitor& visit) {
    const int d = static_cast<int>(v.size());
    if (axis == d) {
        if (partial == 0) return;
        if (modulo_inversion && !first_nonzero_positive(v)) return;
        int g = 0;
        for (int c : v) g = std::gcd(g, c < 0 ? -c : c);
        if (g != 1) return;
        visit(static_cast<const std::vector<int>&>(v), partial);
        return;
    }
    const std::int64_t room = bound2_exclusive - 1 - partial;
    int reach = static_cast<int>(std::sqrt(static_cast<double>(room)));
    while (static_cast<std::int64_t>(reach) * reach > room) --reach;
    while (static_cast<std::int64_t>(reach + 1) * (reach + 1) <= room) ++reach;
    if (reach > radius) reach = radius;
    for (int c = -reach; c <= reach; ++c) {
        const std::int64_t next = partial + static_cast<std::int64_t>(c) * c;
        v[axis] = c;
        enumerate_box(v, axis + 1, next, bound2_exclusive, radius, modulo_inversion, visit);
    }
    v[axis] = 0;
}

}  // namespace detail

/// Smallest integer m with m >= max_norm^2, i.e. the exclusive bound on
/// |l|^2 for the strict condition |l| < max_norm.
std::int64_t exclusive_norm_squared_bound(double max_norm);

/// Calls visit(coords, norm_squared) for every primitive vector of Z^d with
/// 0 < |l| < max_norm, in lexicographic order of coordinates. With
/// modulo_inversion only the representative whose first nonzero coordinate
/// is positive is visited. Allocation-free apart from one scratch vector, so
/// it can sweep the millions of vectors needed at small radii.
template <class Visitor>
void for_each_primitive(int d, double max_norm, bool modulo_inversion, Visitor&& visit) {
    if (d < 1) throw std::invalid_argument("for_each_primitive: dimension must be >= 1");
    if (!(max_norm > 0.0)) return;
    const std::int64_t bound2 = exclusive_norm_squared_bound(max_norm);
    const int radius = static_cast<int>(std::ceil(max_norm));
    std::vector<int> v(static_cast<std::size_t>(d), 0);
    detail::enumerate_box(v, 0, 0, bound2, radius, modulo_inversion, visit);
}

/// All primitive vectors of Z^d with 0 < L < max_norm, sorted by (L, lex).
/// Throws std::invalid_argument for d < 2 or max_norm <= 0.
std::vector<DualVector> primitive_vectors_below(int d, double max_norm, bool modulo_inversion);

}  // namespace lgas::lattice

#endif  // LGAS_LATTICE_HPP
