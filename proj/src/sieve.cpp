#include "rmf/sieve.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace rmf {

bool ProductKey::is_square() const noexcept {
    for (auto [p, e] : factors)
        if (e % 2 != 0) return false;
    return true;
}

u64 ProductKey::total_exponent() const noexcept {
    u64 t = 0;
    for (auto [p, e] : factors) t += e;
    return t;
}

ProductKey operator*(const ProductKey &a, const ProductKey &b) {
    ProductKey out;
    out.factors.reserve(a.factors.size() + b.factors.size());
    size_t i = 0, j = 0;
    while (i < a.factors.size() && j < b.factors.size()) {
        if (a.factors[i].first < b.factors[j].first) {
            out.factors.push_back(a.factors[i++]);
        } else if (a.factors[i].first > b.factors[j].first) {
            out.factors.push_back(b.factors[j++]);
        } else {
            out.factors.emplace_back(a.factors[i].first, a.factors[i].second + b.factors[j].second);
            ++i, ++j;
        }
    }
    while (i < a.factors.size()) out.factors.push_back(a.factors[i++]);
    while (j < b.factors.size()) out.factors.push_back(b.factors[j++]);
    return out;
}

ProductKey key_product(std::span<const ProductKey> keys) {
    ProductKey out = ProductKey::one();
    for (const auto &k : keys) out = out * k;
    return out;
}

size_t ProductKeyHash::operator()(const ProductKey &k) const noexcept {
    u64 h = 0xCBF29CE484222325ULL;
    for (auto [p, e] : k.factors) {
        h ^= (static_cast<u64>(p) << 32) | e;
        h *= 0x100000001B3ULL;
        h ^= h >> 29;
    }
    return static_cast<size_t>(h);
}

FactorSieve::FactorSieve(u64 limit) {
    if (limit < 2) throw std::invalid_argument("sieve limit must be >= 2");
    if (limit >= (u64(1) << 32))
        throw std::invalid_argument("sieve limit exceeds 32-bit table width");

    limit_ = limit;
    spf_.assign(limit + 1, 0);
    primes_.reserve(static_cast<size_t>(limit < 100 ? 32 : 1.2 * limit / std::max<double>(1.0, std::log(double(limit)))));

    // Linear sieve: every composite t = i*p is crossed exactly once, by its
    // smallest prime p <= spf(i).
    for (u64 i = 2; i <= limit; ++i) {
        if (spf_[i] == 0) {
            spf_[i] = static_cast<u32>(i);
            primes_.push_back(static_cast<u32>(i));
        }
        u32 s = spf_[i];
        for (u32 p : primes_) {
            if (p > s) break;
            u64 t = i * p;
            if (t > limit) break;
            spf_[t] = p;
        }
    }
}

u32 FactorSieve::spf(u64 n) const {
    if (n < 2 || n > limit_) throw std::out_of_range("spf query outside [2, limit]");
    return spf_[n];
}

bool FactorSieve::is_prime(u64 n) const {
    if (n < 2 || n > limit_) throw std::out_of_range("primality query outside [2, limit]");
    return spf_[n] == n;
}

int FactorSieve::big_omega(u64 n) const {
    if (n < 1 || n > limit_) throw std::out_of_range("big_omega query outside [1, limit]");
    int count = 0;
    while (n > 1) {
        n /= spf_[n];
        ++count;
    }
    return count;
}

ProductKey FactorSieve::factor_key(u64 n) const {
    if (n < 1 || n > limit_) throw std::out_of_range("factor_key query outside [1, limit]");
    ProductKey key;
    while (n > 1) {
        u32 p = spf_[n];
        u32 e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        key.factors.emplace_back(p, e);
    }
    return key;
}

std::vector<u8> FactorSieve::omega_table(u64 up_to) const {
    if (up_to > limit_) throw std::out_of_range("omega_table range exceeds sieve limit");
    std::vector<u8> om(up_to + 1, 0);
    for (u64 n = 2; n <= up_to; ++n) om[n] = static_cast<u8>(om[n / spf_[n]] + 1);
    return om;
}

namespace {

constexpr std::array<char, 8> kCacheMagic = {'R', 'M', 'F', 'S', 'P', 'F', '0', '1'};

void put_u64_le(std::ostream &os, u64 v) {
    char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
    os.write(b, 8);
}

void put_u32_le(std::ostream &os, u32 v) {
    char b[4];
    for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
    os.write(b, 4);
}

u64 get_u64_le(std::istream &is) {
    unsigned char b[8];
    is.read(reinterpret_cast<char *>(b), 8);
    u64 v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | b[i];
    return v;
}

}  // namespace

void FactorSieve::save_cache(const std::filesystem::path &path) const {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw std::runtime_error("cannot open cache file for writing: " + tmp.string());
        os.write(kCacheMagic.data(), kCacheMagic.size());
        put_u64_le(os, limit_);
        for (u32 v : spf_) put_u32_le(os, v);
        if (!os) throw std::runtime_error("short write to cache file: " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

FactorSieve FactorSieve::load_cache(const std::filesystem::path &path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open cache file: " + path.string());

    std::array<char, 8> magic{};
    is.read(magic.data(), magic.size());
    if (!is || magic != kCacheMagic)
        throw std::runtime_error("bad cache magic in " + path.string());

    u64 limit = get_u64_le(is);
    if (!is || limit < 2 || limit >= (u64(1) << 32))
        throw std::runtime_error("bad cache header in " + path.string());

    FactorSieve sv;
    sv.limit_ = limit;
    sv.spf_.resize(limit + 1);
    std::vector<unsigned char> raw(4 * (limit + 1));
    is.read(reinterpret_cast<char *>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (!is) throw std::runtime_error("truncated cache file: " + path.string());
    for (u64 n = 0; n <= limit; ++n) {
        sv.spf_[n] = static_cast<u32>(raw[4 * n]) | (static_cast<u32>(raw[4 * n + 1]) << 8) |
                     (static_cast<u32>(raw[4 * n + 2]) << 16) |
                     (static_cast<u32>(raw[4 * n + 3]) << 24);
    }

    for (u64 n = 2; n <= limit; ++n) {
        u32 s = sv.spf_[n];
        if (s < 2 || s > n || n % s != 0)
            throw std::runtime_error("corrupt spf record in " + path.string());
        if (s == n) sv.primes_.push_back(static_cast<u32>(n));
    }
    return sv;
}

}  // namespace rmf
