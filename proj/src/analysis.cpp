#include "rmf/analysis.hpp"

#include <cmath>
#include <stdexcept>

#include "rmf/counts.hpp"
#include "rmf/errors.hpp"

namespace rmf {

RatioReport theorem_ratios(const FactorSieve &sieve, std::span<const u64> limits,
                           std::span<const int> m_values, const WorkBudget &budget) {
    RatioReport report;
    report.name = "theorem_ratios";
    report.columns = {"N", "m", "abs_E", "M2", "M4", "M6", "M6_over_E3", "norm6_over_norm4"};
    report.metadata = report_metadata({}, budget.max_ops);
    report.metadata["commentary"] =
        "ratios are diagnostics, never asserted bounds: the comparison constants and the "
        "admissible-range thresholds (e.g. the conjectured value 1/4 for the sixth-moment "
        "range) are asymptotic and have no desk-scale test";
    for (u64 n : limits) {
        for (int m : m_values) {
            u128 m2 = exact_moment(sieve, n, m, 1, budget).value;
            u128 m4 = exact_moment(sieve, n, m, 2, budget).value;
            u128 m6 = exact_moment(sieve, n, m, 3, budget).value;
            double e = u128_to_double(m2);  // M2 = |E| by orthogonality
            double ratio = e > 0 ? u128_to_double(m6) / (e * e * e) : 0.0;
            double norm_ratio =
                m4 > 0 ? std::pow(u128_to_double(m6), 1.0 / 6.0) / std::pow(u128_to_double(m4), 0.25)
                       : 0.0;
            report.add_row({Value(n), Value(m), Value(m2), Value(m2), Value(m4), Value(m6),
                            Value(ratio), Value(norm_ratio)});
        }
    }
    return report;
}

double lemma33_ratio(const FactorSieve &sieve, u64 limit, int k) {
    if (k < 1) throw std::invalid_argument("k must be >= 1");
    if (limit < 1 || limit > sieve.limit()) throw std::out_of_range("limit outside sieve range");
    auto om = sieve.omega_table(limit);
    u64 running = 0;  // |E_{b,k}| accumulated as b grows
    double sum = 0.0;
    for (u64 b = 1; b <= limit; ++b) {
        if (om[b] != k) continue;
        ++running;
        sum += static_cast<double>(running) / (static_cast<double>(b) * static_cast<double>(b));
    }
    return sum / std::ldexp(1.0, 2 * k);
}

double lemma34_ratio(const FactorSieve &sieve, u64 limit, int k, int k_prime) {
    if (k < 1 || k_prime < 1) throw std::invalid_argument("k and k' must be >= 1");
    if (limit > sieve.limit()) throw std::out_of_range("limit outside sieve range");
    if (limit < 16) throw std::invalid_argument("lemma34_ratio requires limit >= 16");

    auto om = sieve.omega_table(limit);
    u64 e_count = 0;
    for (u64 n = 1; n <= limit; ++n)
        if (om[n] == k) ++e_count;
    if (e_count == 0)
        throw ZeroDenominatorError("E_{N,k} is empty: the lemma's denominator vanishes");

    u64 root = isqrt_u64(limit);
    auto prefix = count_prefix(sieve, root, k_prime);  // floor(N/b) <= sqrt(N) when b > sqrt(N)
    u64 lhs = 0;
    for (u64 b = root + 1; b <= limit; ++b)
        if (om[b] == k) lhs += prefix[limit / b];

    double loglog = std::log(std::log(static_cast<double>(limit)));
    double fact = 1.0;
    for (int j = 2; j <= k_prime; ++j) fact *= j;
    double denom = static_cast<double>(e_count) * std::pow(loglog, k_prime) / fact;
    return static_cast<double>(lhs) / denom;
}

RatioReport lemma33_table(const FactorSieve &sieve, std::span<const u64> limits,
                          std::span<const int> k_values) {
    RatioReport report;
    report.name = "lemma33_ratios";
    report.columns = {"N", "k", "ratio"};
    report.metadata = report_metadata({}, 0);
    for (u64 n : limits)
        for (int k : k_values)
            report.add_row({Value(n), Value(k), Value(lemma33_ratio(sieve, n, k))});
    return report;
}

RatioReport lemma34_table(const FactorSieve &sieve, std::span<const u64> limits,
                          std::span<const int> k_values, std::span<const int> kp_values) {
    RatioReport report;
    report.name = "lemma34_ratios";
    report.columns = {"N", "k", "k_prime", "ratio"};
    report.metadata = report_metadata({}, 0);
    for (u64 n : limits)
        for (int k : k_values)
            for (int kp : kp_values)
                report.add_row(
                    {Value(n), Value(k), Value(kp), Value(lemma34_ratio(sieve, n, k, kp))});
    return report;
}

RatioReport gaussian_ratios(const FactorSieve &sieve, std::span<const u64> limits,
                            std::span<const int> m_values, int k, const McConfig &mc,
                            const WorkBudget &budget) {
    if (k < 1 || k > 3) throw std::invalid_argument("k must be in {1,2,3}");
    RatioReport report;
    report.name = "gaussian_ratios";
    report.columns = {"N",          "m",           "k",      "abs_E",  "ratio",
                      "ratio_stderr", "const_complex", "const_real", "method"};
    report.metadata = report_metadata(std::span<const u64>(&mc.seed, 1), budget.max_ops);
    report.metadata["commentary"] =
        "both candidate limit constants are reported (k! for a complex Gaussian, (2k)!/(2^k k!) "
        "for a real one); no assertion is made about which, if either, is approached";

    double const_complex = 1.0;  // k! = E|G|^{2k} for standard complex Gaussian
    for (int j = 2; j <= k; ++j) const_complex *= j;
    double const_real = 1.0;  // (2k)!/(2^k k!) = (2k-1)!!
    for (int j = 3; j <= 2 * k; j += 2) const_real *= j;

    for (u64 n : limits) {
        for (int m : m_values) {
            u64 e_count = count_E(sieve, n, m);
            double ek = std::pow(static_cast<double>(e_count), k);
            double ratio = 0.0, stderr_ratio = 0.0;
            const char *method = "exact";
            try {
                u128 value = exact_moment(sieve, n, m, k, budget).value;
                if (e_count > 0) ratio = u128_to_double(value) / ek;
            } catch (const ResourceLimitError &) {
                method = "mc";
                McEstimate est = mc_moment(sieve, n, m, 2.0 * k, mc.n_samples, mc.seed,
                                           Model::steinhaus);
                if (e_count > 0) {
                    ratio = est.mean / ek;
                    stderr_ratio = est.stderr_mean / ek;
                }
            }
            report.add_row({Value(n), Value(m), Value(k), Value(e_count), Value(ratio),
                            Value(stderr_ratio), Value(const_complex), Value(const_real),
                            Value(method)});
        }
    }
    return report;
}

}  // namespace rmf
