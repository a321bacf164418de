#pragma once

#include <span>
#include <vector>

#include "rmf/report.hpp"
#include "rmf/sieve.hpp"

namespace rmf {

// |E_{N,m}| for every m at a fixed N. counts[m] = #{n <= limit : Omega(n) = m},
// m = 0..floor(log2 limit); the entries partition [1, limit].
struct CountTable {
    u64 limit = 0;
    std::vector<u64> counts;
};

// #{n in [1, limit] : Omega(n) = m}
u64 count_E(const FactorSieve &sieve, u64 limit, int m);

CountTable count_table(const FactorSieve &sieve, u64 limit);

// prefix[x] = |E_{x,m}| for x in [0, limit]
std::vector<u64> count_prefix(const FactorSieve &sieve, u64 limit, int m);

// N (loglog N)^(m-1) / ((m-1)! log N); natural logs throughout.
// Rejects limit <= e (loglog nonpositive) and m < 1.
double sathe_approx(u64 limit, int m);

// (N / (2^m log(N/2^m))) * sum_{j<m} (2 loglog(N/2^m))^j / j!
// Rejects N/2^m <= e and m < 1.
double bdn_approx(u64 limit, int m);

// Rows (N, m, exact, sathe, bdn, ratio_sathe, ratio_bdn) for every pair.
RatioReport approx_ratio_table(const FactorSieve &sieve, std::span<const u64> limits,
                               std::span<const int> m_values);

}  // namespace rmf
