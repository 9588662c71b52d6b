// SPDX-License-Identifier: Apache-2.0

#include "lgas/lattice.hpp"

#include <algorithm>
#include <string>

namespace lgas::lattice {

bool is_primitive(std::span<const int> v) {
    if (v.empty()) throw std::invalid_argument("is_primitive: empty vector");
    int g = 0;
    for (int c : v) g = std::gcd(g, c < 0 ? -c : c);
    return g == 1;
}

int moebius(std::int64_t n) {
    if (n < 1) throw std::domain_error("moebius: requires n >= 1, got " + std::to_string(n));
    int sign = 1;
    for (std::int64_t p = 2; p * p <= n; ++p) {
        if (n % p != 0) continue;
        n /= p;
        if (n % p == 0) return 0;
        sign = -sign;
    }
    if (n > 1) sign = -sign;
    return sign;
}

std::int64_t exclusive_norm_squared_bound(double max_norm) {
    const double sq = max_norm * max_norm;
    auto m = static_cast<std::int64_t>(std::ceil(sq));
    // Guard against ceil() landing one off around exact squares.
    while (static_cast<double>(m - 1) >= sq) --m;
    while (static_cast<double>(m) < sq) ++m;
    return m;
}

std::vector<DualVector> primitive_vectors_below(int d, double max_norm, bool modulo_inversion) {
    if (d < 2) throw std::invalid_argument("primitive_vectors_below: dimension must be >= 2");
    if (!(max_norm > 0.0)) throw std::invalid_argument("primitive_vectors_below: max_norm must be > 0");
    std::vector<DualVector> out;
    for_each_primitive(d, max_norm, modulo_inversion, [&](const std::vector<int>& v, std::int64_t n2) {
        out.push_back(DualVector{v, n2, std::sqrt(static_cast<double>(n2))});
    });
    // Enumeration is already lexicographic; a stable sort on |l|^2 yields (L, lex).
    std::stable_sort(out.begin(), out.end(), [](const DualVector& a, const DualVector& b) {
        return a.norm_squared < b.norm_squared;
    });
    return out;
}

}  // namespace lgas::lattice
