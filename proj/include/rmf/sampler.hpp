#pragma once

#include <complex>
#include <optional>
#include <span>
#include <vector>

#include "rmf/report.hpp"
#include "rmf/sieve.hpp"

namespace rmf {

enum class Model { steinhaus, rademacher };

const char *model_name(Model m);
Model model_from_name(std::string_view name);  // throws std::invalid_argument

// One multiplicative character draw: an independent value per prime,
// extended to all integers completely multiplicatively. values[i] belongs
// to the i-th prime of the list the assignment was sampled from.
struct CharacterAssignment {
    Model model = Model::steinhaus;
    u64 seed = 0;
    std::vector<std::complex<double>> values;
};

// Counter-based draw: value(prime i, sample j) is a pure function of
// (seed, i, j), so sampling order and thread scheduling cannot change
// results. counter selects the sample index (0 for a standalone draw).
CharacterAssignment sample_assignment(std::span<const u32> primes, Model model, u64 seed,
                                      u64 counter = 0);

// value(n) for n in [1, limit] via one pass over the sieve's factorization:
// val[n] = val[spf(n)] * val[n / spf(n)]. Requires the assignment to cover
// every prime <= limit.
std::vector<std::complex<double>> character_values(const FactorSieve &sieve,
                                                   const CharacterAssignment &z, u64 limit);

std::complex<double> character_value_at(const FactorSieve &sieve, const CharacterAssignment &z,
                                        u64 n);

// S_{N,m}(z) = sum over n <= limit with Omega(n) = m of z(n)
std::complex<double> eval_S(const FactorSieve &sieve, const CharacterAssignment &z, u64 limit,
                            int m);

// S_N(z) = sum over all n <= limit of z(n)
std::complex<double> eval_S_unrestricted(const FactorSieve &sieve, const CharacterAssignment &z,
                                         u64 limit);

// Monte Carlo estimate of E|S|^q with its standard error. Bit-exactly
// reproducible from (seed, n_samples, limit, m, model, q).
struct McEstimate {
    u64 limit = 0;
    std::optional<int> m;  // empty: unrestricted S_N
    Model model = Model::steinhaus;
    double q = 0.0;
    u64 n_samples = 0;
    u64 seed = 0;
    double mean = 0.0;
    double stderr_mean = 0.0;  // sample standard deviation / sqrt(n_samples)
};

McEstimate mc_moment(const FactorSieve &sieve, u64 limit, int m, double q, u64 n_samples,
                     u64 seed, Model model);

McEstimate mc_moment_unrestricted(const FactorSieve &sieve, u64 limit, double q, u64 n_samples,
                                  u64 seed, Model model);

// Rows (N, mean_abs_S, stderr, ratio = mean/sqrt(N)) for the unrestricted
// first absolute moment; trend data only, nothing is asserted.
RatioReport helson_trend(const FactorSieve &sieve, std::span<const u64> limits, u64 n_samples,
                         u64 seed);

// Deterministic pairwise reduction; exposed for reuse in tests.
double pairwise_sum(std::span<const double> values);

}  // namespace rmf
