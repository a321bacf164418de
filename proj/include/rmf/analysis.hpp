#pragma once

#include <span>

#include "rmf/moments.hpp"
#include "rmf/report.hpp"
#include "rmf/sieve.hpp"

namespace rmf {

// Rows (N, m, abs_E, M2, M4, M6, M6_over_E3, norm6_over_norm4) with the
// exact Steinhaus moments M_{2k}. The last two columns are the reported
// forms of the 6th/4th norm comparison; nothing is asserted about them.
RatioReport theorem_ratios(const FactorSieve &sieve, std::span<const u64> limits,
                           std::span<const int> m_values,
                           const WorkBudget &budget = WorkBudget::defaults());

// (sum over b in E_{N,k} of |E_{b,k}| / b^2) / 2^(2k)
double lemma33_ratio(const FactorSieve &sieve, u64 limit, int k);

// (sum over b in E_{N,k}, b > sqrt(N), of |E_{N/b,k'}|) divided by
// |E_{N,k}| (loglog N)^{k'} / k'!. Throws ZeroDenominatorError when
// E_{N,k} is empty.
double lemma34_ratio(const FactorSieve &sieve, u64 limit, int k, int k_prime);

RatioReport lemma33_table(const FactorSieve &sieve, std::span<const u64> limits,
                          std::span<const int> k_values);
RatioReport lemma34_table(const FactorSieve &sieve, std::span<const u64> limits,
                          std::span<const int> k_values, std::span<const int> kp_values);

struct McConfig {
    u64 n_samples = 2000;
    u64 seed = 42;
};

// M_{2k} / |E|^k next to the two candidate limit constants: k! (the 2k-th
// absolute moment of a standard complex Gaussian) and (2k)!/(2^k k!). Falls
// back to Monte Carlo where the exact moment exceeds the budget; the method
// column records which route produced each row.
RatioReport gaussian_ratios(const FactorSieve &sieve, std::span<const u64> limits,
                            std::span<const int> m_values, int k, const McConfig &mc,
                            const WorkBudget &budget = WorkBudget::defaults());

}  // namespace rmf
