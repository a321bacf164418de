#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "rmf/counts.hpp"

using namespace rmf;

namespace {

int trial_omega(u64 n) {
    int c = 0;
    for (u64 d = 2; d * d <= n; ++d)
        while (n % d == 0) {
            n /= d;
            ++c;
        }
    if (n > 1) ++c;
    return c;
}

// enumeration oracle, independent of the sieve
u64 oracle_count(u64 limit, int m) {
    u64 c = 0;
    for (u64 n = 1; n <= limit; ++n)
        if (trial_omega(n) == m) ++c;
    return c;
}

}  // namespace

TEST_CASE("count_E examples and oracle sweep") {
    FactorSieve sv(1000);
    CHECK(count_E(sv, 10, 0) == 1);
    CHECK(count_E(sv, 10, 1) == 4);
    CHECK(oracle_count(10, 1) == 4);
    CHECK(count_E(sv, 100, 2) == 34);
    CHECK(oracle_count(100, 2) == 34);

    for (u64 n = 1; n <= 300; ++n)
        for (int m = 0; m <= 9; ++m) CHECK(count_E(sv, n, m) == oracle_count(n, m));

    CHECK_THROWS_AS(count_E(sv, 0, 1), std::out_of_range);
    CHECK_THROWS_AS(count_E(sv, 1001, 1), std::out_of_range);
    CHECK_THROWS_AS(count_E(sv, 10, -1), std::invalid_argument);
}

TEST_CASE("count_E vanishes when 2^m > N") {
    FactorSieve sv(1000);
    CHECK(count_E(sv, 100, 7) == 0);
    CHECK(count_E(sv, 1000, 10) == 0);
    CHECK(count_E(sv, 1000, 200) == 0);
}

TEST_CASE("count_table") {
    FactorSieve sv(1000000);
    CountTable t10 = count_table(sv, 10);
    CHECK(t10.counts == std::vector<u64>{1, 4, 4, 1});

    CountTable t2 = count_table(sv, 2);
    CHECK(t2.counts == std::vector<u64>{1, 1});

    CountTable big = count_table(sv, 1000000);
    CHECK(std::accumulate(big.counts.begin(), big.counts.end(), u64(0)) == 1000000);
    for (size_t m = 0; m < big.counts.size(); ++m)
        CHECK(big.counts[m] == count_E(sv, 1000000, static_cast<int>(m)));
}

TEST_CASE("count_E is monotone in N and increments by the indicator") {
    FactorSieve sv(10000);
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<u64> dist(2, 10000);
    for (int t = 0; t < 120; ++t) {
        u64 n = dist(rng);
        int omega_n = sv.big_omega(n);
        for (int m = 0; m <= 13; ++m) {
            u64 prev = count_E(sv, n - 1, m);
            u64 cur = count_E(sv, n, m);
            CHECK(cur >= prev);
            CHECK(cur == prev + (omega_n == m ? 1 : 0));
        }
    }
}

TEST_CASE("count_prefix matches pointwise counts") {
    FactorSieve sv(500);
    auto prefix = count_prefix(sv, 500, 2);
    CHECK(prefix[0] == 0);
    for (u64 x : {u64(1), u64(10), u64(100), u64(250), u64(500)})
        CHECK(prefix[x] == count_E(sv, x, 2));
}

TEST_CASE("sathe_approx") {
    CHECK(sathe_approx(1000, 1) == doctest::Approx(1000.0 / std::log(1000.0)).epsilon(1e-12));
    CHECK(sathe_approx(1000000, 1) == doctest::Approx(72382.41365).epsilon(1e-9));
    CHECK_THROWS_AS(sathe_approx(2, 1), std::invalid_argument);
    CHECK_THROWS_AS(sathe_approx(1000, 0), std::invalid_argument);

    // direct formula at m = 3
    double logN = std::log(1.0e6), loglogN = std::log(logN);
    CHECK(sathe_approx(1000000, 3) ==
          doctest::Approx(1.0e6 * loglogN * loglogN / (2.0 * logN)).epsilon(1e-12));
}

TEST_CASE("bdn_approx") {
    CHECK(bdn_approx(1000, 1) == doctest::Approx(1000.0 / (2.0 * std::log(500.0))).epsilon(1e-12));
    double expected = (1.0e6 / (4.0 * std::log(250000.0))) *
                      (1.0 + 2.0 * std::log(std::log(250000.0)));
    CHECK(bdn_approx(1000000, 2) == doctest::Approx(expected).epsilon(1e-12));
    CHECK_THROWS_AS(bdn_approx(8, 3), std::invalid_argument);
    CHECK_THROWS_AS(bdn_approx(1000, 0), std::invalid_argument);
}

TEST_CASE("approx_ratio_table") {
    FactorSieve sv(1000000);

    SUBCASE("pinned 1e6 row") {
        std::vector<u64> limits{1000000};
        std::vector<int> ms{1};
        RatioReport r = approx_ratio_table(sv, limits, ms);
        REQUIRE(r.rows.size() == 1);
        CHECK(r.rows[0][2].str == "78498");
        CHECK(r.rows[0][5].num == doctest::Approx(78498.0 / 72382.41365).epsilon(1e-6));
        CHECK(r.rows[0][6].num > 0.0);
    }

    SUBCASE("empty limits yield empty report") {
        RatioReport r = approx_ratio_table(sv, {}, std::vector<int>{1, 2});
        CHECK(r.rows.empty());
    }

    SUBCASE("ratios finite and positive") {
        std::vector<u64> limits{10000, 100000};
        std::vector<int> ms{1, 2, 3};
        RatioReport r = approx_ratio_table(sv, limits, ms);
        for (const auto &row : r.rows) {
            CHECK(row[5].num > 0.0);
            CHECK(std::isfinite(row[5].num));
            CHECK(row[6].num > 0.0);
            CHECK(std::isfinite(row[6].num));
        }
    }
}

TEST_CASE("sathe ratio smoke window for small m") {
    FactorSieve sv(1000000);
    for (u64 n : {u64(10000), u64(100000), u64(1000000)}) {
        for (int m : {1, 2, 3}) {
            double ratio = static_cast<double>(count_E(sv, n, m)) / sathe_approx(n, m);
            CHECK(ratio > 0.3);
            CHECK(ratio < 3.0);
        }
    }
}
