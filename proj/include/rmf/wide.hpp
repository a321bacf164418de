#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

namespace rmf {

using u8 = uint8_t;
using u32 = uint32_t;
using u64 = uint64_t;
using u128 = unsigned __int128;

std::string u128_to_string(u128 x);
u128 parse_u128(std::string_view s);  // throws std::invalid_argument on bad input

double u128_to_double(u128 x);

// floor(sqrt(n)) exactly
u64 isqrt_u64(u64 n);

// out = base^exp; false on overflow past 2^128-1
bool checked_pow_u128(u128 base, unsigned exp, u128 &out);

struct U128Hash {
    size_t operator()(u128 x) const noexcept {
        u64 lo = static_cast<u64>(x);
        u64 hi = static_cast<u64>(x >> 64);
        u64 h = lo ^ (hi * 0x9E3779B97F4A7C15ULL);
        h ^= h >> 30;
        h *= 0xBF58476D1CE4E5B9ULL;
        h ^= h >> 27;
        return static_cast<size_t>(h);
    }
};

}  // namespace rmf
