#include "rmf/wide.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rmf {

std::string u128_to_string(u128 x) {
    if (x == 0) return "0";
    std::string s;
    while (x > 0) {
        s += static_cast<char>('0' + static_cast<unsigned>(x % 10));
        x /= 10;
    }
    std::reverse(s.begin(), s.end());
    return s;
}

u128 parse_u128(std::string_view s) {
    if (s.empty()) throw std::invalid_argument("empty integer literal");
    constexpr u128 kMax = ~static_cast<u128>(0);
    u128 v = 0;
    for (char c : s) {
        if (c < '0' || c > '9') throw std::invalid_argument("bad digit in integer literal");
        unsigned d = static_cast<unsigned>(c - '0');
        if (v > (kMax - d) / 10) throw std::invalid_argument("integer literal overflows 128 bits");
        v = v * 10 + d;
    }
    return v;
}

double u128_to_double(u128 x) {
    u64 hi = static_cast<u64>(x >> 64);
    u64 lo = static_cast<u64>(x);
    return std::ldexp(static_cast<double>(hi), 64) + static_cast<double>(lo);
}

u64 isqrt_u64(u64 n) {
    if (n == 0) return 0;
    u64 r = static_cast<u64>(std::sqrt(static_cast<double>(n)));
    while (r > 0 && static_cast<u128>(r) * r > n) --r;
    while (static_cast<u128>(r + 1) * (r + 1) <= n) ++r;
    return r;
}

bool checked_pow_u128(u128 base, unsigned exp, u128 &out) {
    constexpr u128 kMax = ~static_cast<u128>(0);
    u128 r = 1;
    for (unsigned i = 0; i < exp; ++i) {
        if (base != 0 && r > kMax / base) return false;
        r *= base;
    }
    out = r;
    return true;
}

}  // namespace rmf
