#include "rmf/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace rmf {

const char *model_name(Model m) {
    return m == Model::steinhaus ? "steinhaus" : "rademacher";
}

Model model_from_name(std::string_view name) {
    if (name == "steinhaus") return Model::steinhaus;
    if (name == "rademacher") return Model::rademacher;
    throw std::invalid_argument("unknown model: " + std::string(name));
}

namespace {

u64 mix64(u64 x) {
    x ^= x >> 30;
    x *= 0xBF58476D1CE4E5B9ULL;
    x ^= x >> 27;
    x *= 0x94D049BB133111EBULL;
    x ^= x >> 31;
    return x;
}

// Stateless stream: one word per (seed, prime index, counter).
u64 draw_word(u64 seed, u64 prime_index, u64 counter) {
    u64 x = mix64(seed + 0x9E3779B97F4A7C15ULL * (prime_index + 1));
    x = mix64(x + 0x9E3779B97F4A7C15ULL * (counter + 1));
    return x;
}

std::complex<double> draw_value(Model model, u64 seed, u64 prime_index, u64 counter) {
    u64 w = draw_word(seed, prime_index, counter);
    if (model == Model::rademacher) return {(w >> 63) ? -1.0 : 1.0, 0.0};
    // 53-bit uniform angle in [0, 2*pi)
    double unit = static_cast<double>(w >> 11) * 0x1.0p-53;
    double angle = 2.0 * std::numbers::pi * unit;
    return {std::cos(angle), std::sin(angle)};
}

size_t primes_up_to(const FactorSieve &sieve, u64 limit) {
    const auto &ps = sieve.primes();
    return static_cast<size_t>(std::upper_bound(ps.begin(), ps.end(), limit) - ps.begin());
}

}  // namespace

CharacterAssignment sample_assignment(std::span<const u32> primes, Model model, u64 seed,
                                      u64 counter) {
    CharacterAssignment z;
    z.model = model;
    z.seed = seed;
    z.values.resize(primes.size());
    for (size_t i = 0; i < primes.size(); ++i) z.values[i] = draw_value(model, seed, i, counter);
    return z;
}

std::vector<std::complex<double>> character_values(const FactorSieve &sieve,
                                                   const CharacterAssignment &z, u64 limit) {
    if (limit < 1 || limit > sieve.limit()) throw std::out_of_range("limit outside sieve range");
    size_t np = primes_up_to(sieve, limit);
    if (z.values.size() < np)
        throw std::invalid_argument("assignment does not cover all primes up to limit");

    std::vector<std::complex<double>> val(limit + 1);
    val[1] = {1.0, 0.0};
    size_t pi = 0;
    for (u64 n = 2; n <= limit; ++n) {
        u32 s = sieve.spf(n);
        if (s == n) {
            val[n] = z.values[pi++];
        } else {
            val[n] = val[s] * val[n / s];
        }
    }
    return val;
}

std::complex<double> character_value_at(const FactorSieve &sieve, const CharacterAssignment &z,
                                        u64 n) {
    ProductKey key = sieve.factor_key(n);
    const auto &ps = sieve.primes();
    std::complex<double> out{1.0, 0.0};
    for (auto [p, e] : key.factors) {
        size_t idx = static_cast<size_t>(std::lower_bound(ps.begin(), ps.end(), p) - ps.begin());
        if (idx >= z.values.size()) throw std::invalid_argument("assignment missing prime value");
        std::complex<double> base = z.values[idx];
        for (u32 j = 0; j < e; ++j) out *= base;
    }
    return out;
}

namespace {

std::complex<double> sum_values(const std::vector<std::complex<double>> &val,
                                const std::vector<u8> *om, int m) {
    std::complex<double> s{0.0, 0.0};
    for (u64 n = 1; n < val.size(); ++n) {
        if (om && (*om)[n] != m) continue;
        s += val[n];
    }
    return s;
}

}  // namespace

std::complex<double> eval_S(const FactorSieve &sieve, const CharacterAssignment &z, u64 limit,
                            int m) {
    if (m < 0) throw std::invalid_argument("m must be >= 0");
    auto val = character_values(sieve, z, limit);
    auto om = sieve.omega_table(limit);
    return sum_values(val, &om, m);
}

std::complex<double> eval_S_unrestricted(const FactorSieve &sieve, const CharacterAssignment &z,
                                         u64 limit) {
    auto val = character_values(sieve, z, limit);
    return sum_values(val, nullptr, 0);
}

double pairwise_sum(std::span<const double> values) {
    if (values.size() <= 8) {
        double s = 0.0;
        for (double v : values) s += v;
        return s;
    }
    size_t half = values.size() / 2;
    return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

namespace {

McEstimate mc_core(const FactorSieve &sieve, u64 limit, std::optional<int> m, double q,
                   u64 n_samples, u64 seed, Model model) {
    if (!(q > 0.0)) throw std::invalid_argument("q must be > 0");
    if (n_samples < 2) throw std::invalid_argument("n_samples must be >= 2");
    if (limit < 1 || limit > sieve.limit()) throw std::out_of_range("limit outside sieve range");
    if (m && *m < 0) throw std::invalid_argument("m must be >= 0");

    size_t np = primes_up_to(sieve, limit);
    std::span<const u32> primes(sieve.primes().data(), np);
    std::vector<u8> om;
    if (m) om = sieve.omega_table(limit);

    std::vector<double> samples(n_samples);
    std::vector<std::complex<double>> val(limit + 1);
    CharacterAssignment z;
    z.model = model;
    z.seed = seed;
    z.values.resize(np);

    for (u64 j = 0; j < n_samples; ++j) {
        for (size_t i = 0; i < np; ++i) z.values[i] = draw_value(model, seed, i, j);

        val[1] = {1.0, 0.0};
        size_t pi = 0;
        for (u64 n = 2; n <= limit; ++n) {
            u32 s = sieve.spf(n);
            val[n] = (s == n) ? z.values[pi++] : val[s] * val[n / s];
        }

        std::complex<double> S{0.0, 0.0};
        if (m) {
            for (u64 n = 1; n <= limit; ++n)
                if (om[n] == *m) S += val[n];
        } else {
            for (u64 n = 1; n <= limit; ++n) S += val[n];
        }
        samples[j] = std::pow(std::norm(S), 0.5 * q);
    }

    McEstimate est;
    est.limit = limit;
    est.m = m;
    est.model = model;
    est.q = q;
    est.n_samples = n_samples;
    est.seed = seed;
    est.mean = pairwise_sum(samples) / static_cast<double>(n_samples);

    std::vector<double> devsq(n_samples);
    for (u64 j = 0; j < n_samples; ++j) {
        double d = samples[j] - est.mean;
        devsq[j] = d * d;
    }
    double var = pairwise_sum(devsq) / static_cast<double>(n_samples - 1);
    est.stderr_mean = std::sqrt(var / static_cast<double>(n_samples));
    return est;
}

}  // namespace

McEstimate mc_moment(const FactorSieve &sieve, u64 limit, int m, double q, u64 n_samples,
                     u64 seed, Model model) {
    return mc_core(sieve, limit, m, q, n_samples, seed, model);
}

McEstimate mc_moment_unrestricted(const FactorSieve &sieve, u64 limit, double q, u64 n_samples,
                                  u64 seed, Model model) {
    return mc_core(sieve, limit, std::nullopt, q, n_samples, seed, model);
}

RatioReport helson_trend(const FactorSieve &sieve, std::span<const u64> limits, u64 n_samples,
                         u64 seed) {
    RatioReport report;
    report.name = "helson_trend";
    report.columns = {"N", "mean_abs_S", "stderr", "mean_over_sqrtN"};
    report.metadata = report_metadata(std::span<const u64>(&seed, 1), 0);
    for (u64 n : limits) {
        McEstimate est = mc_moment_unrestricted(sieve, n, 1.0, n_samples, seed, Model::steinhaus);
        report.add_row({Value(n), Value(est.mean), Value(est.stderr_mean),
                        Value(est.mean / std::sqrt(static_cast<double>(n)))});
    }
    return report;
}

}  // namespace rmf
