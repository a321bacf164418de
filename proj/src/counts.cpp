#include "rmf/counts.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

namespace rmf {

namespace {

void check_limit(const FactorSieve &sieve, u64 limit) {
    if (limit < 1 || limit > sieve.limit())
        throw std::out_of_range("limit outside sieve range");
}

}  // namespace

u64 count_E(const FactorSieve &sieve, u64 limit, int m) {
    check_limit(sieve, limit);
    if (m < 0) throw std::invalid_argument("m must be >= 0");
    if (m > 0 && (u64(1) << std::min(m, 63)) > limit) return 0;
    auto om = sieve.omega_table(limit);
    u64 count = 0;
    for (u64 n = 1; n <= limit; ++n)
        if (om[n] == m) ++count;
    return count;
}

CountTable count_table(const FactorSieve &sieve, u64 limit) {
    check_limit(sieve, limit);
    CountTable table;
    table.limit = limit;
    table.counts.assign(std::bit_width(limit), 0);  // m = 0..floor(log2 limit)
    auto om = sieve.omega_table(limit);
    for (u64 n = 1; n <= limit; ++n) ++table.counts[om[n]];
    return table;
}

std::vector<u64> count_prefix(const FactorSieve &sieve, u64 limit, int m) {
    check_limit(sieve, limit);
    if (m < 0) throw std::invalid_argument("m must be >= 0");
    auto om = sieve.omega_table(limit);
    std::vector<u64> prefix(limit + 1, 0);
    for (u64 n = 1; n <= limit; ++n) prefix[n] = prefix[n - 1] + (om[n] == m ? 1 : 0);
    return prefix;
}

double sathe_approx(u64 limit, int m) {
    if (m < 1) throw std::invalid_argument("sathe_approx requires m >= 1");
    if (limit <= 2) throw std::invalid_argument("sathe_approx requires limit > e");
    double logN = std::log(static_cast<double>(limit));
    double loglogN = std::log(logN);
    double fact = 1.0;
    for (int j = 2; j < m; ++j) fact *= j;  // (m-1)!
    return static_cast<double>(limit) * std::pow(loglogN, m - 1) / (fact * logN);
}

double bdn_approx(u64 limit, int m) {
    if (m < 1) throw std::invalid_argument("bdn_approx requires m >= 1");
    double x = std::ldexp(static_cast<double>(limit), -m);  // N / 2^m
    if (x <= std::exp(1.0)) throw std::invalid_argument("bdn_approx requires N/2^m > e");
    double logx = std::log(x);
    double t = 2.0 * std::log(logx);
    double sum = 0.0, term = 1.0;
    for (int j = 0; j < m; ++j) {
        sum += term;
        term *= t / (j + 1);
    }
    return static_cast<double>(limit) / (std::ldexp(1.0, m) * logx) * sum;
}

RatioReport approx_ratio_table(const FactorSieve &sieve, std::span<const u64> limits,
                               std::span<const int> m_values) {
    RatioReport report;
    report.name = "approx_ratios";
    report.columns = {"N", "m", "exact", "sathe", "bdn", "ratio_sathe", "ratio_bdn"};
    report.metadata = report_metadata({}, 0);
    for (u64 n : limits) {
        for (int m : m_values) {
            u64 exact = count_E(sieve, n, m);
            double sathe = sathe_approx(n, m);
            double bdn = bdn_approx(n, m);
            report.add_row({Value(n), Value(m), Value(exact), Value(sathe), Value(bdn),
                            Value(exact / sathe), Value(exact / bdn)});
        }
    }
    return report;
}

}  // namespace rmf
