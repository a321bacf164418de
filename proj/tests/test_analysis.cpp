#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>

#include "rmf/analysis.hpp"
#include "rmf/counts.hpp"
#include "rmf/errors.hpp"

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

u128 oracle_moment(u64 limit, int m, int k) {
    std::vector<u64> e;
    for (u64 n = 1; n <= limit; ++n)
        if (trial_omega(n) == m) e.push_back(n);
    std::map<u128, u64> products;
    if (k == 2) {
        for (u64 a : e)
            for (u64 b : e) ++products[static_cast<u128>(a) * b];
    } else {
        for (u64 a : e)
            for (u64 b : e)
                for (u64 c : e) ++products[static_cast<u128>(a) * b * c];
    }
    u128 total = 0;
    for (const auto &[p, c] : products) total += static_cast<u128>(c) * c;
    return total;
}

}  // namespace

TEST_CASE("theorem_ratios pinned row at (10, 2)") {
    FactorSieve sv(100);
    std::vector<u64> limits{10};
    std::vector<int> ms{0, 2};
    RatioReport r = theorem_ratios(sv, limits, ms);
    REQUIRE(r.rows.size() == 2);

    // m = 0 row: every moment is 1
    CHECK(r.rows[0][2].str == "1");
    CHECK(r.rows[0][4].str == "1");
    CHECK(r.rows[0][5].str == "1");
    CHECK(r.rows[0][6].num == 1.0);

    // m = 2 row: |E| = 4, M4 = 32, M6 = 340 (frozen from the triple oracle)
    CHECK(oracle_moment(10, 2, 2) == 32);
    CHECK(oracle_moment(10, 2, 3) == 340);
    CHECK(r.rows[1][2].str == "4");
    CHECK(r.rows[1][4].str == "32");
    CHECK(r.rows[1][5].str == "340");
    CHECK(r.rows[1][6].num == doctest::Approx(340.0 / 64.0).epsilon(1e-12));
}

TEST_CASE("theorem_ratios M6/E^3 is at least 1") {
    FactorSieve sv(300);
    std::vector<u64> limits{100, 200, 300};
    std::vector<int> ms{1, 2, 3};
    RatioReport r = theorem_ratios(sv, limits, ms);
    for (const auto &row : r.rows) CHECK(row[6].num >= 1.0);
}

TEST_CASE("lemma33_ratio") {
    FactorSieve sv(1000000);
    // (1/4 + 2/9 + 3/25 + 4/49) / 4
    double expected = (1.0 / 4 + 2.0 / 9 + 3.0 / 25 + 4.0 / 49) / 4.0;
    CHECK(lemma33_ratio(sv, 10, 1) == doctest::Approx(expected).epsilon(1e-12));

    // empty sum below 2^k
    CHECK(lemma33_ratio(sv, 7, 3) == 0.0);

    for (int k : {1, 2, 3}) {
        double r = lemma33_ratio(sv, 100000, k);
        CHECK(r > 0.0);
        CHECK(std::isfinite(r));
    }

    CHECK_THROWS_AS(lemma33_ratio(sv, 100, 0), std::invalid_argument);
}

TEST_CASE("lemma34_ratio") {
    FactorSieve sv(1000000);

    // enumeration oracle at (100, 1, 1): primes b in (10, 100], count primes <= 100/b
    FactorSieve small(100);
    u64 lhs = 0;
    for (u64 b = 11; b <= 100; ++b)
        if (small.is_prime(b)) lhs += count_E(small, 100 / b, 1);
    double denom = static_cast<double>(count_E(small, 100, 1)) *
                   std::log(std::log(100.0));  // k' = 1, 1! = 1
    CHECK(lemma34_ratio(sv, 100, 1, 1) ==
          doctest::Approx(static_cast<double>(lhs) / denom).epsilon(1e-12));

    // zero left side: floor(16/16) = 1 holds no integers with k' >= 1 factors
    CHECK(lemma34_ratio(sv, 16, 4, 1) == 0.0);

    double r = lemma34_ratio(sv, 1000000, 2, 2);
    CHECK(r > 0.0);
    CHECK(std::isfinite(r));

    CHECK_THROWS_AS(lemma34_ratio(sv, 15, 1, 1), std::invalid_argument);
    CHECK_THROWS_AS(lemma34_ratio(sv, 100, 0, 1), std::invalid_argument);
    CHECK_THROWS_AS(lemma34_ratio(sv, 16, 10, 1), ZeroDenominatorError);
}

TEST_CASE("lemma tables cover the grid") {
    FactorSieve sv(100000);
    std::vector<u64> limits{10000, 100000};
    std::vector<int> ks{1, 2, 3};
    RatioReport t33 = lemma33_table(sv, limits, ks);
    CHECK(t33.rows.size() == 6);
    RatioReport t34 = lemma34_table(sv, limits, ks, ks);
    CHECK(t34.rows.size() == 18);
    for (const auto &row : t34.rows) {
        CHECK(row[3].num >= 0.0);
        CHECK(std::isfinite(row[3].num));
    }
}

TEST_CASE("gaussian_ratios") {
    FactorSieve sv(2000);
    McConfig mc{400, 99};

    SUBCASE("k=1 ratio is exactly 1") {
        std::vector<u64> limits{100, 1000};
        std::vector<int> ms{1, 2};
        RatioReport r = gaussian_ratios(sv, limits, ms, 1, mc);
        for (const auto &row : r.rows) {
            CHECK(row[4].num == 1.0);
            CHECK(row[8].str == "exact");
        }
    }

    SUBCASE("k=2, m=1: exact moment is 2|E|^2 - |E|") {
        std::vector<u64> limits{500, 2000};
        std::vector<int> ms{1};
        RatioReport r = gaussian_ratios(sv, limits, ms, 2, mc);
        for (const auto &row : r.rows) {
            double e = std::stod(row[3].str);
            double expect = (2.0 * e * e - e) / (e * e);
            CHECK(row[4].num == doctest::Approx(expect).epsilon(1e-12));
            CHECK(row[6].num == 2.0);   // complex Gaussian constant k!
            CHECK(row[7].num == 3.0);   // (2k)!/(2^k k!)
        }
        u128 m4 = exact_moment(sv, 2000, 1, 2).value;
        u128 e = count_E(sv, 2000, 1);
        CHECK(m4 == 2 * e * e - e);
    }

    SUBCASE("k=3, m=1 ratio is at most 6") {
        std::vector<u64> limits{500};
        std::vector<int> ms{1};
        RatioReport r = gaussian_ratios(sv, limits, ms, 3, mc);
        CHECK(r.rows[0][4].num <= 6.0);
        CHECK(r.rows[0][6].num == 6.0);
        CHECK(r.rows[0][7].num == 15.0);
    }

    SUBCASE("mc fallback under a tiny budget") {
        std::vector<u64> limits{1500};
        std::vector<int> ms{2};
        WorkBudget tiny{10000};
        RatioReport r = gaussian_ratios(sv, limits, ms, 2, mc, tiny);
        REQUIRE(r.rows.size() == 1);
        CHECK(r.rows[0][8].str == "mc");
        CHECK(r.rows[0][4].num > 0.0);
        CHECK(r.rows[0][5].num > 0.0);
    }
}
