#include "treedb/analytics.hpp"

#include <cmath>

#include "treedb/errors.hpp"

namespace treedb::analytic {

namespace {
void require(bool ok, const char* what) {
    if (!ok) throw ConfigError(what);
}

std::uint64_t ipow(std::uint64_t base, std::int64_t exp) {
    std::uint64_t r = 1;
    for (std::int64_t i = 0; i < exp; ++i) r *= base;
    return r;
}

bool power_of_two(std::int64_t k) { return k > 0 && (k & (k - 1)) == 0; }
}  // namespace

Rational tree_worst(std::int64_t k) {
    require(k >= 1, "k must be positive");
    return Rational(2) - Rational(2, k);
}

Rational tree_cross_product(std::int64_t k, std::int64_t m) {
    require(k >= 2 && k % 2 == 0 && m >= 1, "cross product needs even k and m >= 1");
    return Rational(2, k) + Rational(2, m) - Rational(4, m * k);
}

Rational tree_best(std::int64_t k) {
    require(k >= 1, "k must be positive");
    return {2, k};
}

Rational collapse_best(std::int64_t p, std::int64_t k) {
    require(p >= 1 && k >= p, "need 1 <= p <= k");
    return {p, k};
}

Rational collapse_worst(std::int64_t p, std::int64_t k) {
    require(p >= 1 && k >= p, "need 1 <= p <= k");
    return Rational(1) + Rational(p, k);
}

Rational collapse_symmetric(std::int64_t p, std::int64_t m, std::int64_t s) {
    require(p >= 1 && m >= 1 && s >= 1, "need positive p, m, s");
    const auto n = static_cast<std::int64_t>(ipow(static_cast<std::uint64_t>(s), p));
    return Rational(p * n + p * m * s, n * p * m);
}

Rational collapse_symmetric_shared(std::int64_t p, std::int64_t m, std::int64_t s) {
    require(p >= 1 && m >= 1 && s >= 1, "need positive p, m, s");
    const auto n = static_cast<std::int64_t>(ipow(static_cast<std::uint64_t>(s), p));
    return Rational(p * n + m * s, n * p * m);
}

std::vector<double> optimal_level_entries(double n, std::int64_t k) {
    require(power_of_two(k) && k >= 2, "k must be a power of two >= 2");
    std::vector<double> levels;
    double nodes = 1;
    for (std::int64_t width = k; width >= 2; width /= 2) {
        levels.push_back(nodes * std::pow(n, 1.0 / nodes));
        nodes *= 2;
    }
    return levels;
}

std::vector<std::uint64_t> uniform_level_entries(std::uint64_t r, std::int64_t k) {
    require(power_of_two(k) && k >= 2, "k must be a power of two >= 2");
    std::vector<std::uint64_t> levels;
    std::uint64_t nodes = 1;
    for (std::int64_t width = k; width >= 2; width /= 2) {
        levels.push_back(nodes * ipow(r, width));
        nodes *= 2;
    }
    return levels;
}

Rational uniform_ratio(std::uint64_t r, std::int64_t k) {
    std::uint64_t entries = 0;
    for (auto e : uniform_level_entries(r, k)) entries += e;
    const std::uint64_t n = ipow(r, k);
    return Rational(static_cast<std::int64_t>(2 * entries), static_cast<std::int64_t>(n) * k);
}

std::uint64_t identical_entries(std::uint64_t n, std::int64_t k) {
    require(k >= 1, "k must be positive");
    return n * static_cast<std::uint64_t>(k - 1);
}

std::uint64_t cross_product_entries(std::uint64_t m, std::int64_t k) {
    require(k >= 2 && k % 2 == 0, "cross product needs an even k");
    const std::uint64_t j = static_cast<std::uint64_t>(k / 2);
    return m * m + 2 * (j - 1) * m;
}

}  // namespace treedb::analytic
