#include <doctest.h>

#include <cmath>

#include "treedb/analytics.hpp"
#include "treedb/errors.hpp"
#include "treedb/stats.hpp"

using namespace treedb;
namespace an = treedb::analytic;

TEST_CASE("rational arithmetic") {
    CHECK(Rational(2, 4) == Rational(1, 2));
    CHECK(Rational(3, -6) == Rational(-1, 2));
    CHECK(Rational(1, 3) + Rational(1, 6) == Rational(1, 2));
    CHECK(Rational(1, 2) - Rational(3, 4) == Rational(-1, 4));
    CHECK(Rational(2, 3) * Rational(3, 4) == Rational(1, 2));
    CHECK(Rational(1, 2) / Rational(1, 4) == Rational(2));
    CHECK(Rational(1, 3) < Rational(1, 2));
    CHECK(Rational(7, 8).str() == "7/8");
    CHECK(Rational(6, 3).str() == "2/1");
}

TEST_CASE("table of closed forms") {
    CHECK(an::tree_worst(4) == Rational(3, 2));
    CHECK(an::tree_worst(8) == Rational(7, 4));
    CHECK(an::tree_worst(16) == Rational(15, 8));
    CHECK(an::tree_best(16) == Rational(1, 8));
    CHECK(an::collapse_best(2, 8) == Rational(1, 4));
    CHECK(an::collapse_worst(2, 8) == Rational(5, 4));
    // 2/k + 2/m - 4/(mk) with k=16, m=64: 1/8 + 1/32 - 1/256
    CHECK(an::tree_cross_product(16, 64) == Rational(39, 256));
    CHECK(an::tree_cross_product(8, 16) == Rational(11, 32));
    CHECK_THROWS_AS(an::tree_cross_product(7, 4), ConfigError);
    CHECK_THROWS_AS(an::collapse_best(9, 8), ConfigError);
}

TEST_CASE("closed forms agree with direct entry counts") {
    for (std::int64_t k : {2, 4, 8, 16, 32}) {
        for (std::int64_t m : {1, 3, 16, 64, 256}) {
            const auto n = static_cast<std::uint64_t>(m * m);
            const Rational direct(static_cast<std::int64_t>(2 * an::cross_product_entries(std::uint64_t(m), k)),
                                  static_cast<std::int64_t>(n) * k);
            CHECK(direct == an::tree_cross_product(k, m));
        }
        const Rational worst(static_cast<std::int64_t>(2 * an::identical_entries(1000, k)), 1000 * k);
        CHECK(worst == an::tree_worst(k));
    }
}

TEST_CASE("limits") {
    // cross products approach the best case for large m
    CHECK(an::tree_cross_product(16, 1 << 20).value() == doctest::Approx(an::tree_best(16).value()).epsilon(1e-4));
    CHECK(an::collapse_symmetric(4, 4, 100).value() == doctest::Approx(an::collapse_best(4, 16).value()).epsilon(1e-5));
    // four blocks of four slots, ten values each: (4n + 4*4*10) / 16n with n = 10^4
    CHECK(an::collapse_symmetric(4, 4, 10) == Rational(4 * 10000 + 160, 16 * 10000));
    CHECK(an::collapse_symmetric_shared(4, 4, 10) == Rational(4 * 10000 + 40, 16 * 10000));
}

TEST_CASE("optimal level occupation") {
    const auto lv = an::optimal_level_entries(65536, 16);
    REQUIRE(lv.size() == 4);
    CHECK(lv[0] == doctest::Approx(65536));
    CHECK(lv[1] == doctest::Approx(2 * 256));
    CHECK(lv[2] == doctest::Approx(4 * 16));
    CHECK(lv[3] == doctest::Approx(8 * 4));
    const auto u = an::uniform_level_entries(2, 16);
    CHECK(u == std::vector<std::uint64_t>{65536, 512, 64, 32});
    // 4^8 vectors: levels of 65536, 2*256 and 4*16 entries
    CHECK(an::uniform_ratio(4, 8) == Rational(2 * (65536 + 512 + 64), 65536 * 8));
    CHECK(an::uniform_ratio(4, 8).value() <= an::tree_best(8).value() * 1.25);
    CHECK_THROWS_AS(an::optimal_level_entries(10, 6), ConfigError);
}

TEST_CASE("compression stats derive every ratio from counters") {
    CompressionStats s;
    s.n = 4;
    s.k = 8;
    s.words_compressed = 28;
    s.bytes_actual = 100;
    CHECK(s.words_plain() == 32);
    CHECK(s.ratio_exact() == Rational(7, 8));
    CHECK(s.ratio() == doctest::Approx(0.875));
    CHECK(s.per_state_words() == doctest::Approx(7));
    CHECK(s.per_state_bytes() == doctest::Approx(25));
    CompressionStats empty;
    CHECK(empty.ratio() == 0);
    CHECK(empty.ratio_exact() == Rational(0));
}
