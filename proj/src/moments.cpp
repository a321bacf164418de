#include "rmf/moments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <queue>
#include <stdexcept>
#include <unordered_map>

#include "rmf/counts.hpp"

namespace rmf {

WorkBudget WorkBudget::defaults() {
    WorkBudget b;
    if (const char *env = std::getenv("RMFLAB_BUDGET")) {
        char *end = nullptr;
        unsigned long long v = std::strtoull(env, &end, 0);
        if (end && *end == '\0' && v > 0) b.max_ops = v;
    }
    return b;
}

namespace {

struct BudgetGate {
    u64 budget;
    u64 used = 0;

    void require(u64 add, const char *what) {
        u64 next = (add > ~u64(0) - used) ? ~u64(0) : used + add;
        if (next > budget) {
            throw ResourceLimitError(std::string(what) + ": estimated " + std::to_string(next) +
                                         " elementary ops exceed budget " +
                                         std::to_string(budget) +
                                         " (raise --budget or RMFLAB_BUDGET)",
                                     next, budget);
        }
        used = next;
    }
};

struct MixHash {
    size_t operator()(u64 x) const noexcept {
        x ^= x >> 30;
        x *= 0xBF58476D1CE4E5B9ULL;
        x ^= x >> 27;
        x *= 0x94D049BB133111EBULL;
        x ^= x >> 31;
        return static_cast<size_t>(x);
    }
};

template <class P>
struct HashFor : MixHash {};
template <>
struct HashFor<u128> : U128Hash {};

std::vector<u32> gather_E(const FactorSieve &sieve, u64 limit, int m) {
    auto om = sieve.omega_table(limit);
    std::vector<u32> elems;
    for (u64 n = 1; n <= limit; ++n)
        if (om[n] == m) elems.push_back(static_cast<u32>(n));
    return elems;
}

std::vector<u32> gather_all(u64 limit) {
    std::vector<u32> elems(limit);
    std::iota(elems.begin(), elems.end(), u32(1));
    return elems;
}

size_t reserve_hint(size_t n_elems) {
    u64 pairs = static_cast<u64>(n_elems) * n_elems / 2 + n_elems;
    return static_cast<size_t>(std::min<u64>(pairs, u64(1) << 23));
}

// ---------------------------------------------------------------------
// Steinhaus moments: value = sum_p r_k(p)^2 with r_k(p) the number of
// ordered k-tuples from E multiplying to p.
//
// k=2 builds the r_2 table by a pair-product hash join. k=3 joins r_2
// against E a second time, but never materializes r_3: the per-element
// streams { q*a : q in r_2 } are each sorted, so a k-way heap merge emits
// the grouped r_3 counts in product order with O(|E|) memory.
// ---------------------------------------------------------------------

template <class P>
std::vector<std::pair<P, u64>> pair_table_numeric(const std::vector<u32> &elems,
                                                  BudgetGate &gate) {
    gate.require(static_cast<u64>(elems.size()) * elems.size(), "pair product join");
    std::unordered_map<P, u64, HashFor<P>> map;
    map.reserve(reserve_hint(elems.size()));
    for (u32 a : elems)
        for (u32 b : elems) ++map[static_cast<P>(a) * b];
    std::vector<std::pair<P, u64>> table(map.begin(), map.end());
    std::sort(table.begin(), table.end());
    return table;
}

template <class P>
u128 sum_squares(const std::vector<std::pair<P, u64>> &table) {
    u128 total = 0;
    for (const auto &[key, c] : table) total += static_cast<u128>(c) * c;
    return total;
}

template <class P>
u128 triple_merge_sum_squares(const std::vector<std::pair<P, u64>> &r2,
                              const std::vector<u32> &elems, BudgetGate &gate) {
    gate.require(static_cast<u64>(r2.size()) * elems.size(), "triple product merge");

    struct Item {
        P prod;
        u32 elem_idx;
        u32 r2_idx;
    };

    // min-heap with replace-top: advancing a stream is a single sift-down
    std::vector<Item> heap;
    heap.reserve(elems.size());
    for (u32 ei = 0; ei < elems.size(); ++ei)
        heap.push_back({static_cast<P>(r2[0].first) * elems[ei], ei, 0});
    auto greater = [](const Item &a, const Item &b) { return a.prod > b.prod; };
    std::make_heap(heap.begin(), heap.end(), greater);

    auto sift_down = [&heap]() {
        size_t n = heap.size();
        size_t i = 0;
        Item moving = heap[0];
        for (;;) {
            size_t child = 2 * i + 1;
            if (child >= n) break;
            if (child + 1 < n && heap[child + 1].prod < heap[child].prod) ++child;
            if (heap[child].prod >= moving.prod) break;
            heap[i] = heap[child];
            i = child;
        }
        heap[i] = moving;
    };

    u128 total = 0;
    P current{};
    u64 run = 0;
    bool have_run = false;
    while (!heap.empty()) {
        Item &top = heap[0];
        u64 c = r2[top.r2_idx].second;
        if (have_run && top.prod == current) {
            run += c;
        } else {
            if (have_run) total += static_cast<u128>(run) * run;
            current = top.prod;
            run = c;
            have_run = true;
        }
        if (++top.r2_idx < r2.size()) {
            top.prod = static_cast<P>(r2[top.r2_idx].first) * elems[top.elem_idx];
            sift_down();
        } else {
            std::pop_heap(heap.begin(), heap.end(), greater);
            heap.pop_back();
        }
    }
    if (have_run) total += static_cast<u128>(run) * run;
    return total;
}

template <class P>
u128 steinhaus_value_numeric(const std::vector<u32> &elems, int k, BudgetGate &gate) {
    if (elems.empty()) return 0;
    if (k == 1) return elems.size();
    auto r2 = pair_table_numeric<P>(elems, gate);
    if (k == 2) return sum_squares(r2);
    return triple_merge_sum_squares<P>(r2, elems, gate);
}

// Structural fallback: same joins keyed by canonical factorizations. Only
// reachable when the numeric product could overflow 128 bits, or when
// pinned for tests; r_3 is grouped in a hash table here.
u128 steinhaus_value_structural(const FactorSieve &sieve, const std::vector<u32> &elems, int k,
                                BudgetGate &gate) {
    if (elems.empty()) return 0;
    if (k == 1) return elems.size();

    std::vector<ProductKey> keys;
    keys.reserve(elems.size());
    for (u32 a : elems) keys.push_back(sieve.factor_key(a));

    gate.require(static_cast<u64>(elems.size()) * elems.size(), "pair product join");
    std::unordered_map<ProductKey, u64, ProductKeyHash> r2;
    r2.reserve(reserve_hint(elems.size()));
    for (const auto &ka : keys)
        for (const auto &kb : keys) ++r2[ka * kb];

    if (k == 2) {
        u128 total = 0;
        for (const auto &[key, c] : r2) total += static_cast<u128>(c) * c;
        return total;
    }

    gate.require(static_cast<u64>(r2.size()) * elems.size(), "triple product join");
    std::unordered_map<ProductKey, u64, ProductKeyHash> r3;
    r3.reserve(r2.size());
    for (const auto &[q, c] : r2)
        for (const auto &ka : keys) r3[q * ka] += c;
    u128 total = 0;
    for (const auto &[key, c] : r3) total += static_cast<u128>(c) * c;
    return total;
}

// ---------------------------------------------------------------------
// Rademacher moments: a 2k-tuple survives iff the total product is a
// perfect square, i.e. the odd-exponent (squarefree kernel) parts cancel.
// Kernels combine like an XOR in exponent space: ker(xy) =
// (ker x / g)(ker y / g) with g = gcd. value = sum_kappa s_k(kappa)^2.
// ---------------------------------------------------------------------

u128 gcd_u128(u128 a, u128 b) {
    while (b != 0) {
        u128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

u64 kernel_xor(u64 a, u64 b) {
    u64 g = std::gcd(a, b);
    return (a / g) * (b / g);
}

u128 kernel_xor(u128 a, u128 b) {
    u128 g = gcd_u128(a, b);
    return (a / g) * (b / g);
}

u64 kernel_of(const FactorSieve &sieve, u64 n) {
    ProductKey key = sieve.factor_key(n);
    u64 k = 1;
    for (auto [p, e] : key.factors)
        if (e % 2 != 0) k *= p;
    return k;
}

ProductKey kernel_key_of(const FactorSieve &sieve, u64 n) {
    ProductKey key = sieve.factor_key(n);
    ProductKey out;
    for (auto [p, e] : key.factors)
        if (e % 2 != 0) out.factors.emplace_back(p, 1);
    return out;
}

// symmetric difference of two squarefree keys
ProductKey kernel_xor(const ProductKey &a, const ProductKey &b) {
    ProductKey out;
    size_t i = 0, j = 0;
    while (i < a.factors.size() && j < b.factors.size()) {
        if (a.factors[i].first < b.factors[j].first) out.factors.push_back(a.factors[i++]);
        else if (a.factors[i].first > b.factors[j].first) out.factors.push_back(b.factors[j++]);
        else ++i, ++j;
    }
    while (i < a.factors.size()) out.factors.push_back(a.factors[i++]);
    while (j < b.factors.size()) out.factors.push_back(b.factors[j++]);
    return out;
}

template <class K, class Hash>
u128 rademacher_value_generic(const std::vector<K> &kernels, int k, BudgetGate &gate) {
    if (kernels.empty()) return 0;

    std::unordered_map<K, u64, Hash> s;
    if (k == 1) {
        s.reserve(kernels.size());
        for (const K &ka : kernels) ++s[ka];
    } else {
        gate.require(static_cast<u64>(kernels.size()) * kernels.size(), "kernel pair join");
        s.reserve(reserve_hint(kernels.size()));
        for (const K &ka : kernels)
            for (const K &kb : kernels) ++s[kernel_xor(ka, kb)];
        if (k == 3) {
            gate.require(static_cast<u64>(s.size()) * kernels.size(), "kernel triple join");
            std::unordered_map<K, u64, Hash> s3;
            s3.reserve(s.size());
            for (const auto &[kappa, c] : s)
                for (const K &ka : kernels) s3[kernel_xor(kappa, ka)] += c;
            s = std::move(s3);
        }
    }

    u128 total = 0;
    for (const auto &[kappa, c] : s) total += static_cast<u128>(c) * c;
    return total;
}

// ---------------------------------------------------------------------

bool pow_fits(u64 base, int exp, int bits) {
    u128 out;
    if (!checked_pow_u128(base, static_cast<unsigned>(exp), out)) return false;
    if (bits >= 128) return true;
    return out < (static_cast<u128>(1) << bits);
}

void check_moment_args(const FactorSieve &sieve, u64 limit, int k) {
    if (k < 1 || k > 3) throw std::invalid_argument("k must be in {1,2,3}");
    if (limit < 1 || limit > sieve.limit()) throw std::out_of_range("limit outside sieve range");
}

void check_value_bound(size_t n_elems, int k) {
    u128 out;
    if (!checked_pow_u128(static_cast<u128>(n_elems), static_cast<unsigned>(2 * k), out))
        throw std::overflow_error("moment upper bound |E|^(2k) exceeds 128-bit accumulator");
}

MomentValue make_moment(u64 limit, std::optional<int> m, int k, u128 value,
                        std::chrono::steady_clock::time_point t0, u64 ops) {
    MomentValue mv;
    mv.limit = limit;
    mv.m = m;
    mv.k = k;
    mv.value = value;
    mv.elapsed_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    mv.ops_used = ops;
    return mv;
}

MomentValue steinhaus_moment(const FactorSieve &sieve, u64 limit, std::optional<int> m, int k,
                             const WorkBudget &budget, KeyMode mode) {
    auto t0 = std::chrono::steady_clock::now();
    check_moment_args(sieve, limit, k);
    if (m && *m < 0) throw std::invalid_argument("m must be >= 0");

    BudgetGate gate{budget.max_ops};
    gate.require(limit, "element scan");
    std::vector<u32> elems = m ? gather_E(sieve, limit, *m) : gather_all(limit);
    check_value_bound(elems.size(), k);

    u128 value;
    if (mode == KeyMode::force_structural) {
        value = steinhaus_value_structural(sieve, elems, k, gate);
    } else if (pow_fits(limit, k, 64)) {
        value = steinhaus_value_numeric<u64>(elems, k, gate);
    } else if (pow_fits(limit, k, 127)) {
        value = steinhaus_value_numeric<u128>(elems, k, gate);
    } else {
        value = steinhaus_value_structural(sieve, elems, k, gate);
    }
    return make_moment(limit, m, k, value, t0, gate.used);
}

}  // namespace

MomentValue exact_moment(const FactorSieve &sieve, u64 limit, int m, int k,
                         const WorkBudget &budget, KeyMode mode) {
    return steinhaus_moment(sieve, limit, m, k, budget, mode);
}

MomentValue exact_moment_unrestricted(const FactorSieve &sieve, u64 limit, int k,
                                      const WorkBudget &budget, KeyMode mode) {
    return steinhaus_moment(sieve, limit, std::nullopt, k, budget, mode);
}

MomentValue exact_moment_rademacher(const FactorSieve &sieve, u64 limit, int m, int k,
                                    const WorkBudget &budget, KeyMode mode) {
    auto t0 = std::chrono::steady_clock::now();
    check_moment_args(sieve, limit, k);
    if (m < 0) throw std::invalid_argument("m must be >= 0");

    BudgetGate gate{budget.max_ops};
    gate.require(limit, "element scan");
    std::vector<u32> elems = gather_E(sieve, limit, m);
    check_value_bound(elems.size(), k);

    u128 value;
    if (mode != KeyMode::force_structural && pow_fits(limit, k, 64)) {
        std::vector<u64> kernels;
        kernels.reserve(elems.size());
        for (u32 a : elems) kernels.push_back(kernel_of(sieve, a));
        value = rademacher_value_generic<u64, MixHash>(kernels, k, gate);
    } else if (mode != KeyMode::force_structural && pow_fits(limit, k, 127)) {
        std::vector<u128> kernels;
        kernels.reserve(elems.size());
        for (u32 a : elems) kernels.push_back(kernel_of(sieve, a));
        value = rademacher_value_generic<u128, U128Hash>(kernels, k, gate);
    } else {
        std::vector<ProductKey> kernels;
        kernels.reserve(elems.size());
        for (u32 a : elems) kernels.push_back(kernel_key_of(sieve, a));
        value = rademacher_value_generic<ProductKey, ProductKeyHash>(kernels, k, gate);
    }
    return make_moment(limit, m, k, value, t0, gate.used);
}

nlohmann::json moment_record(const MomentValue &mv, Model model) {
    nlohmann::json j{{"N", mv.limit},
                     {"k", mv.k},
                     {"model", model_name(model)},
                     {"value", u128_to_string(mv.value)},
                     {"elapsed_ms", mv.elapsed_ms},
                     {"budget_used", mv.ops_used}};
    if (mv.m) j["m"] = *mv.m;
    else j["m"] = nullptr;
    return j;
}

namespace {

void check_bounds(const FactorSieve &sieve, std::initializer_list<u64> bounds,
                  std::initializer_list<int> levels) {
    for (u64 b : bounds) {
        if (b < 1) throw std::invalid_argument("bounds must be >= 1");
        if (b > sieve.limit()) throw std::out_of_range("bound outside sieve range");
    }
    for (int m : levels)
        if (m < 0) throw std::invalid_argument("levels must be >= 0");
}

// product -> count over ordered pairs from E1 x E2
std::unordered_map<u64, u64, MixHash> side_product_map(const FactorSieve &sieve, u64 n1, u64 n2,
                                                       int m1, int m2, BudgetGate &gate) {
    gate.require(n1 + n2, "element scan");
    std::vector<u32> e1 = gather_E(sieve, n1, m1);
    std::vector<u32> e2 = gather_E(sieve, n2, m2);
    gate.require(static_cast<u64>(e1.size()) * e2.size(), "pair product join");
    std::unordered_map<u64, u64, MixHash> map;
    map.reserve(static_cast<size_t>(
        std::min<u64>(static_cast<u64>(e1.size()) * e2.size() + 1, u64(1) << 23)));
    for (u32 a : e1)
        for (u32 b : e2) ++map[static_cast<u64>(a) * b];
    return map;
}

}  // namespace

u128 count_S(const FactorSieve &sieve, const SCountParams &p, const WorkBudget &budget) {
    check_bounds(sieve, {p.n1, p.n2, p.n1p, p.n2p}, {p.m1, p.m2, p.m1p, p.m2p});
    if (p.m1 + p.m2 != p.m1p + p.m2p) return 0;  // Omega is additive

    BudgetGate gate{budget.max_ops};
    auto a_side = side_product_map(sieve, p.n1, p.n2, p.m1, p.m2, gate);
    if (a_side.empty()) return 0;

    gate.require(p.n1p + p.n2p, "element scan");
    std::vector<u32> e1p = gather_E(sieve, p.n1p, p.m1p);
    std::vector<u32> e2p = gather_E(sieve, p.n2p, p.m2p);
    gate.require(static_cast<u64>(e1p.size()) * e2p.size(), "pair product probe");

    u128 total = 0;
    for (u32 a : e1p)
        for (u32 b : e2p) {
            auto it = a_side.find(static_cast<u64>(a) * b);
            if (it != a_side.end()) total += it->second;
        }
    return total;
}

u128 pair_second_moment(const FactorSieve &sieve, u64 n1, u64 n2, int m1, int m2,
                        const WorkBudget &budget) {
    check_bounds(sieve, {n1, n2}, {m1, m2});
    BudgetGate gate{budget.max_ops};
    auto map = side_product_map(sieve, n1, n2, m1, m2, gate);
    u128 total = 0;
    for (const auto &[prod, c] : map) total += static_cast<u128>(c) * c;
    return total;
}

double cs_bound(const FactorSieve &sieve, const SCountParams &p) {
    check_bounds(sieve, {p.n1, p.n2, p.n1p, p.n2p}, {p.m1, p.m2, p.m1p, p.m2p});
    u128 left = static_cast<u128>(p.n1) * p.n2;
    u128 right = static_cast<u128>(p.n1p) * p.n2p;
    if (right > left)
        throw std::invalid_argument(
            "cs_bound requires N1'*N2' <= N1*N2: swap the (N_i, m_i) side with the "
            "(N_i', m_i') side and call again");

    u128 n = right;  // N = N1'*N2'
    auto count = [&](u128 bound, int m) -> double {
        if (bound < 1) return 0.0;
        if (bound > sieve.limit()) throw std::out_of_range("bound outside sieve range");
        return static_cast<double>(count_E(sieve, static_cast<u64>(bound), m));
    };

    double c1p = count(p.n1p, p.m1p);
    double c2p = count(p.n2p, p.m2p);
    double c1 = count(p.n1, p.m1);
    double cn1 = count(n / p.n1, p.m2);
    double cn2 = count(n / p.n2, p.m1);
    double c2 = count(p.n2, p.m2);
    return std::sqrt(c1p * c2p * (c1 * cn1 + cn2 * c2));
}

double verify_identity_2_2(const FactorSieve &sieve, u64 limit, int m,
                           const CharacterAssignment &z, const WorkBudget &budget) {
    if (m < 0) throw std::invalid_argument("m must be >= 0");
    if (limit < 1 || limit > sieve.limit()) throw std::out_of_range("limit outside sieve range");

    BudgetGate gate{budget.max_ops};
    gate.require(limit, "character table");
    auto val = character_values(sieve, z, limit);
    auto om = sieve.omega_table(limit);

    std::complex<double> S{0.0, 0.0};
    u64 e_count = 0;
    for (u64 n = 1; n <= limit; ++n) {
        if (om[n] == m) {
            S += val[n];
            ++e_count;
        }
    }
    double lhs = std::norm(S);

    std::complex<double> rhs{static_cast<double>(e_count), 0.0};
    for (int k = 1; k <= m; ++k) {
        std::vector<u32> ek;
        for (u64 n = 1; n <= limit; ++n)
            if (om[n] == k) ek.push_back(static_cast<u32>(n));
        if (ek.empty()) continue;

        gate.require(static_cast<u64>(ek.size()) * ek.size(), "coprime pair sum");
        auto prefix = count_prefix(sieve, limit, m - k);
        for (u32 a : ek)
            for (u32 b : ek) {
                if (std::gcd(a, b) != 1) continue;
                u64 coeff = prefix[limit / std::max(a, b)];
                if (coeff == 0) continue;
                rhs += static_cast<double>(coeff) * val[a] * std::conj(val[b]);
            }
    }

    return std::abs(std::complex<double>(lhs, 0.0) - rhs) / std::max(1.0, lhs);
}

namespace {

constexpr u64 kProp21LimitCap = 256;
constexpr int kProp21LevelCap = 3;

// R_x(p) = sum over ordered splits x = u*v of the pair-product counts
// #{(s,t) : s <= N/u, t <= N/v, Omega(s) = m-Omega(u), Omega(t) = m-Omega(v), st = p},
// kept as a sorted (product, count) vector so pair sums are linear merges.
using SortedCounts = std::vector<std::pair<u64, u64>>;

std::vector<u64> divisors_of(const FactorSieve &sieve, u64 x) {
    ProductKey key = sieve.factor_key(x);
    std::vector<u64> divs{1};
    for (auto [p, e] : key.factors) {
        size_t old = divs.size();
        u64 pe = 1;
        for (u32 j = 1; j <= e; ++j) {
            pe *= p;
            for (size_t i = 0; i < old; ++i) divs.push_back(divs[i] * pe);
        }
    }
    return divs;
}

u128 merge_dot(const SortedCounts &a, const SortedCounts &b) {
    u128 total = 0;
    size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i].first < b[j].first) ++i;
        else if (a[i].first > b[j].first) ++j;
        else {
            total += static_cast<u128>(a[i].second) * b[j].second;
            ++i, ++j;
        }
    }
    return total;
}

}  // namespace

Prop21Result verify_prop_2_1(const FactorSieve &sieve, u64 limit, int m,
                             const WorkBudget &budget) {
    if (m < 0) throw std::invalid_argument("m must be >= 0");
    if (limit < 1 || limit > sieve.limit()) throw std::out_of_range("limit outside sieve range");
    if (limit > kProp21LimitCap)
        throw ResourceLimitError("verify_prop_2_1 capped at limit " +
                                     std::to_string(kProp21LimitCap),
                                 limit, kProp21LimitCap);
    if (m > kProp21LevelCap)
        throw ResourceLimitError("verify_prop_2_1 capped at m " + std::to_string(kProp21LevelCap),
                                 static_cast<u64>(m), kProp21LevelCap);

    Prop21Result out;
    out.lhs = exact_moment(sieve, limit, m, 3, budget).value;

    u128 m4 = exact_moment(sieve, limit, m, 2, budget).value;
    u64 e_count = count_E(sieve, limit, m);
    u128 rhs = m4 * e_count;

    BudgetGate gate{budget.max_ops};
    auto om = sieve.omega_table(limit);

    // elements of E_{A, j} for every A = floor(limit/d); collected lazily
    auto members = [&](u64 bound, int j) {
        std::vector<u32> v;
        if (j < 0) return v;
        for (u64 n = 1; n <= bound; ++n)
            if (om[n] == j) v.push_back(static_cast<u32>(n));
        return v;
    };

    for (int k = 1; k <= m; ++k) {
        std::vector<u32> ek;
        for (u64 n = 1; n <= limit; ++n)
            if (om[n] == k) ek.push_back(static_cast<u32>(n));
        if (ek.empty()) continue;

        auto prefix = count_prefix(sieve, limit, m - k);

        // Component pair-product vectors are shared across every x whose
        // split lands on the same (floor(N/u), m-Omega(u), floor(N/v),
        // m-Omega(v)) signature.
        struct ComponentKey {
            u64 a, b;
            int ma, mb;
            bool operator==(const ComponentKey &) const = default;
        };
        struct ComponentKeyHash {
            size_t operator()(const ComponentKey &c) const noexcept {
                MixHash h;
                return h(c.a * 0x9E3779B97F4A7C15ULL + c.b) ^
                       h((static_cast<u64>(c.ma) << 32) | static_cast<u32>(c.mb));
            }
        };
        std::unordered_map<ComponentKey, SortedCounts, ComponentKeyHash> components;

        auto component = [&](u64 bound_a, int ma, u64 bound_b, int mb) -> const SortedCounts & {
            ComponentKey ck{bound_a, bound_b, ma, mb};
            auto it = components.find(ck);
            if (it != components.end()) return it->second;
            std::vector<u32> ea = members(bound_a, ma);
            std::vector<u32> eb = members(bound_b, mb);
            gate.require(static_cast<u64>(ea.size()) * eb.size() + 1, "split pair join");
            SortedCounts sc;
            sc.reserve(ea.size() * eb.size());
            for (u32 s : ea)
                for (u32 t : eb) sc.emplace_back(static_cast<u64>(s) * t, 1);
            std::sort(sc.begin(), sc.end());
            // aggregate equal products
            size_t w = 0;
            for (size_t r = 0; r < sc.size(); ++r) {
                if (w > 0 && sc[w - 1].first == sc[r].first) sc[w - 1].second += sc[r].second;
                else sc[w++] = sc[r];
            }
            sc.resize(w);
            return components.emplace(ck, std::move(sc)).first->second;
        };

        // R_x for every x in E_k
        std::vector<SortedCounts> r_of(ek.size());
        for (size_t xi = 0; xi < ek.size(); ++xi) {
            u64 x = ek[xi];
            SortedCounts collected;
            for (u64 u : divisors_of(sieve, x)) {
                u64 v = x / u;
                int mu = m - sieve.big_omega(u);
                int mv = m - sieve.big_omega(v);
                if (mu < 0 || mv < 0) continue;
                const SortedCounts &comp = component(limit / u, mu, limit / v, mv);
                collected.insert(collected.end(), comp.begin(), comp.end());
            }
            gate.require(collected.size() + 1, "split merge");
            std::sort(collected.begin(), collected.end());
            size_t w = 0;
            for (size_t r = 0; r < collected.size(); ++r) {
                if (w > 0 && collected[w - 1].first == collected[r].first)
                    collected[w - 1].second += collected[r].second;
                else collected[w++] = collected[r];
            }
            collected.resize(w);
            r_of[xi] = std::move(collected);
        }

        // ordered coprime pairs (a, b); W is symmetric so each unordered
        // pair contributes twice
        for (size_t i = 0; i < ek.size(); ++i) {
            gate.require(r_of[i].size() * ek.size() / 2 + 1, "pair intersections");
            for (size_t j = i + 1; j < ek.size(); ++j) {
                if (std::gcd(ek[i], ek[j]) != 1) continue;
                u64 coeff = prefix[limit / std::max(ek[i], ek[j])];
                if (coeff == 0) continue;
                u128 w = merge_dot(r_of[i], r_of[j]);
                rhs += 2 * static_cast<u128>(coeff) * w;
            }
        }
    }

    out.rhs = rhs;
    out.holds = out.lhs <= out.rhs;
    return out;
}

}  // namespace rmf
