#pragma once

#include <cstdint>
#include <numeric>
#include <ostream>
#include <string>
#include <vector>

namespace treedb {

/// Exact fraction for closed-form ratio checks.
struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    constexpr Rational() = default;
    constexpr Rational(std::int64_t n, std::int64_t d = 1) : num(n), den(d) { normalize(); }

    constexpr void normalize() {
        if (den < 0) {
            num = -num;
            den = -den;
        }
        const std::int64_t g = std::gcd(num, den);
        if (g > 1) {
            num /= g;
            den /= g;
        }
    }

    constexpr double value() const { return static_cast<double>(num) / static_cast<double>(den); }

    friend constexpr Rational operator+(Rational a, Rational b) {
        return {a.num * b.den + b.num * a.den, a.den * b.den};
    }
    friend constexpr Rational operator-(Rational a, Rational b) {
        return {a.num * b.den - b.num * a.den, a.den * b.den};
    }
    friend constexpr Rational operator*(Rational a, Rational b) { return {a.num * b.num, a.den * b.den}; }
    friend constexpr Rational operator/(Rational a, Rational b) { return {a.num * b.den, a.den * b.num}; }
    friend constexpr bool operator==(Rational a, Rational b) { return a.num == b.num && a.den == b.den; }
    friend constexpr bool operator<(Rational a, Rational b) { return a.num * b.den < b.num * a.den; }

    std::string str() const { return std::to_string(num) + "/" + std::to_string(den); }
    friend std::ostream& operator<<(std::ostream& os, Rational r) { return os << r.str(); }
};

/// Counters of a store from which every reported ratio is derived.
///
/// Word units treat a slot and a reference as one word, so a node entry is
/// two words; byte figures include tags, side indices and slack.
struct CompressionStats {
    std::string store;
    std::uint64_t n = 0;  // distinct vectors
    std::uint64_t k = 0;
    std::uint64_t entries_total = 0;
    /// Tree stores: entries per tree level (root level first). Collapse:
    /// entries per block. Empty when entries cannot be attributed (merged table).
    std::vector<std::uint64_t> entries_per_part;
    std::string part_kind;
    std::uint64_t root_entries = 0;
    std::uint64_t words_compressed = 0;
    /// Bookkeeping words outside the payload, e.g. the side index of growable tables.
    std::uint64_t overhead_words = 0;
    /// Bytes held by the stored entries: payload words plus the per-entry
    /// tag share, side-index slot or memoized hash.
    std::uint64_t bytes_actual = 0;
    /// Bytes reserved by the store's tables, including free slots.
    std::uint64_t bytes_allocated = 0;
    double entry_stride_bytes = 0;

    std::uint64_t words_plain() const { return n * k; }

    Rational ratio_exact() const {
        if (n == 0) return {0, 1};
        return {static_cast<std::int64_t>(words_compressed), static_cast<std::int64_t>(words_plain())};
    }
    double ratio() const { return n == 0 ? 0.0 : static_cast<double>(words_compressed) / words_plain(); }
    double per_state_words() const {
        return n == 0 ? 0.0 : static_cast<double>(words_compressed) / static_cast<double>(n);
    }
    double per_state_bytes() const {
        return n == 0 ? 0.0 : static_cast<double>(bytes_actual) / static_cast<double>(n);
    }
};

}  // namespace treedb
