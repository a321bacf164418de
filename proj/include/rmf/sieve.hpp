#pragma once

#include <filesystem>
#include <span>
#include <utility>
#include <vector>

#include "rmf/wide.hpp"

namespace rmf {

// Canonical prime-exponent signature of a positive integer: strictly
// increasing primes, all exponents >= 1. Equal keys <=> equal integers,
// so products of sieved numbers can be compared without ever forming
// the (possibly overflowing) numeric product. The empty key is 1.
struct ProductKey {
    std::vector<std::pair<u32, u32>> factors;

    static ProductKey one() { return {}; }

    bool is_one() const noexcept { return factors.empty(); }
    bool is_square() const noexcept;
    u64 total_exponent() const noexcept;  // Omega of the represented integer

    bool operator==(const ProductKey &) const = default;
    auto operator<=>(const ProductKey &) const = default;
};

ProductKey operator*(const ProductKey &a, const ProductKey &b);
ProductKey key_product(std::span<const ProductKey> keys);

struct ProductKeyHash {
    size_t operator()(const ProductKey &k) const noexcept;
};

// Smallest-prime-factor table over [2, limit] built by a linear sieve.
// Immutable after construction; all queries are read-only, so one sieve
// can be shared freely across threads.
class FactorSieve {
  public:
    explicit FactorSieve(u64 limit);

    u64 limit() const noexcept { return limit_; }
    const std::vector<u32> &primes() const noexcept { return primes_; }

    // n in [2, limit]
    u32 spf(u64 n) const;
    bool is_prime(u64 n) const;

    // n in [1, limit]; Omega counted with multiplicity, Omega(1) = 0
    int big_omega(u64 n) const;
    ProductKey factor_key(u64 n) const;

    // Omega(n) for n in [0, up_to] (index 0 unused), one O(up_to) pass
    std::vector<u8> omega_table(u64 up_to) const;

    // Binary spf cache: 8-byte magic, little-endian u64 limit, then
    // little-endian u32 records for n = 0..limit.
    void save_cache(const std::filesystem::path &path) const;
    static FactorSieve load_cache(const std::filesystem::path &path);

  private:
    FactorSieve() = default;

    u64 limit_ = 0;
    std::vector<u32> spf_;
    std::vector<u32> primes_;
};

inline FactorSieve build_sieve(u64 limit) { return FactorSieve(limit); }

}  // namespace rmf
