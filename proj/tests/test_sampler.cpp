#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <cstring>
#include <random>

#include "rmf/counts.hpp"
#include "rmf/sampler.hpp"

using namespace rmf;

TEST_CASE("sample_assignment determinism and value ranges") {
    FactorSieve sv(1000);
    auto primes = std::span<const u32>(sv.primes());

    CharacterAssignment s1 = sample_assignment(primes, Model::steinhaus, 99);
    CharacterAssignment s2 = sample_assignment(primes, Model::steinhaus, 99);
    REQUIRE(s1.values.size() == s2.values.size());
    for (size_t i = 0; i < s1.values.size(); ++i) CHECK(s1.values[i] == s2.values[i]);
    for (const auto &v : s1.values) CHECK(std::abs(std::abs(v) - 1.0) < 1e-12);

    CharacterAssignment r1 = sample_assignment(primes, Model::rademacher, 99);
    for (const auto &v : r1.values) {
        CHECK((v.real() == 1.0 || v.real() == -1.0));
        CHECK(v.imag() == 0.0);
    }

    CharacterAssignment s3 = sample_assignment(primes, Model::steinhaus, 100);
    bool any_diff = false;
    for (size_t i = 0; i < s1.values.size(); ++i)
        if (s1.values[i] != s3.values[i]) any_diff = true;
    CHECK(any_diff);

    CharacterAssignment s4 = sample_assignment(primes, Model::steinhaus, 99, 1);
    bool counter_diff = false;
    for (size_t i = 0; i < s1.values.size(); ++i)
        if (s1.values[i] != s4.values[i]) counter_diff = true;
    CHECK(counter_diff);
}

TEST_CASE("complete multiplicativity") {
    FactorSieve sv(100000);
    auto z = sample_assignment(sv.primes(), Model::steinhaus, 5);
    std::mt19937_64 rng(17);
    std::uniform_int_distribution<u64> dist(1, 316);
    for (int t = 0; t < 200; ++t) {
        u64 a = dist(rng), b = dist(rng);
        auto va = character_value_at(sv, z, a);
        auto vb = character_value_at(sv, z, b);
        auto vab = character_value_at(sv, z, a * b);
        CHECK(std::abs(vab - va * vb) < 1e-12);
    }

    auto table = character_values(sv, z, 1000);
    for (u64 n = 1; n <= 1000; ++n)
        CHECK(std::abs(table[n] - character_value_at(sv, z, n)) < 1e-12);
}

TEST_CASE("eval_S basics") {
    FactorSieve sv(1000);
    auto z = sample_assignment(sv.primes(), Model::steinhaus, 11);

    // m = 0: only n = 1 contributes, exactly
    CHECK(eval_S(sv, z, 500, 0) == std::complex<double>(1.0, 0.0));

    // constant character: S = |E|
    CharacterAssignment ones;
    ones.model = Model::steinhaus;
    ones.seed = 0;
    ones.values.assign(sv.primes().size(), {1.0, 0.0});
    for (int m : {1, 2, 3})
        CHECK(eval_S(sv, ones, 1000, m).real() ==
              doctest::Approx(static_cast<double>(count_E(sv, 1000, m))).epsilon(1e-12));

    // single term: S_{2,1} = z(2)
    CHECK(std::abs(eval_S(sv, z, 2, 1) - z.values[0]) < 1e-15);

    // |S| <= |E|
    for (int m : {1, 2, 3})
        CHECK(std::abs(eval_S(sv, z, 1000, m)) <=
              static_cast<double>(count_E(sv, 1000, m)) + 1e-9);

    // rademacher sums are real
    auto f = sample_assignment(sv.primes(), Model::rademacher, 11);
    CHECK(eval_S(sv, f, 1000, 2).imag() == 0.0);

    CHECK_THROWS_AS(eval_S(sv, z, 1001, 1), std::out_of_range);
    CHECK_THROWS_AS(eval_S(sv, z, 10, -1), std::invalid_argument);
}

TEST_CASE("mc_moment pinned cases") {
    FactorSieve sv(100);

    // single unimodular term: |S|^4 = 1 for every sample
    McEstimate one = mc_moment(sv, 2, 1, 4.0, 100, 7, Model::steinhaus);
    CHECK(one.mean == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(one.stderr_mean <= 1e-12);

    // m = 0: S = 1 exactly, any q
    McEstimate m0 = mc_moment(sv, 50, 0, 3.7, 64, 9, Model::steinhaus);
    CHECK(m0.mean == 1.0);
    CHECK(m0.stderr_mean == 0.0);

    CHECK_THROWS_AS(mc_moment(sv, 10, 1, 0.0, 10, 1, Model::steinhaus), std::invalid_argument);
    CHECK_THROWS_AS(mc_moment(sv, 10, 1, -1.0, 10, 1, Model::steinhaus), std::invalid_argument);
    CHECK_THROWS_AS(mc_moment(sv, 10, 1, 2.0, 1, 1, Model::steinhaus), std::invalid_argument);
}

TEST_CASE("mc_moment determinism is bit exact") {
    FactorSieve sv(2000);
    McEstimate a = mc_moment(sv, 2000, 2, 2.0, 200, 0xDEADBEEF, Model::steinhaus);
    McEstimate b = mc_moment(sv, 2000, 2, 2.0, 200, 0xDEADBEEF, Model::steinhaus);
    CHECK(std::memcmp(&a.mean, &b.mean, sizeof(double)) == 0);
    CHECK(std::memcmp(&a.stderr_mean, &b.stderr_mean, sizeof(double)) == 0);

    McEstimate c = mc_moment(sv, 2000, 2, 2.0, 200, 0xDEADBEF0, Model::steinhaus);
    CHECK(c.mean != a.mean);
}

TEST_CASE("q=2 estimate is consistent with orthogonality") {
    FactorSieve sv(1000);
    // E|S|^2 = |E_{N,m}| exactly; estimate should sit within 5 stderr
    for (int m : {1, 2}) {
        McEstimate est = mc_moment(sv, 1000, m, 2.0, 500, 31337, Model::steinhaus);
        double target = static_cast<double>(count_E(sv, 1000, m));
        CHECK(std::abs(est.mean - target) <= 5.0 * est.stderr_mean);
    }
}

TEST_CASE("steinhaus q=2 coverage calibration") {
    FactorSieve sv(10000);
    double target = static_cast<double>(count_E(sv, 10000, 3));
    int covered = 0;
    const int kSeeds = 50;
    for (int s = 0; s < kSeeds; ++s) {
        McEstimate est = mc_moment(sv, 10000, 3, 2.0, 300, 1000 + s, Model::steinhaus);
        if (std::abs(est.mean - target) <= 2.0 * est.stderr_mean) ++covered;
    }
    CHECK(covered >= (kSeeds * 80) / 100);
}

TEST_CASE("helson_trend") {
    FactorSieve sv(10000);

    std::vector<u64> one{1};
    RatioReport r1 = helson_trend(sv, one, 50, 3);
    REQUIRE(r1.rows.size() == 1);
    CHECK(r1.rows[0][1].num == 1.0);  // E|S_1| = 1 exactly
    CHECK(r1.rows[0][3].num == 1.0);

    std::vector<u64> limits{100, 1000, 10000};
    RatioReport r = helson_trend(sv, limits, 64, 3);
    REQUIRE(r.rows.size() == 3);
    for (const auto &row : r.rows) {
        CHECK(row[1].num > 0.0);
        CHECK(row[3].num > 0.0);
    }
}

TEST_CASE("pairwise_sum matches plain sum") {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<double> v(1000);
    for (auto &x : v) x = dist(rng);
    double plain = 0.0;
    for (double x : v) plain += x;
    CHECK(pairwise_sum(v) == doctest::Approx(plain).epsilon(1e-12));
}
