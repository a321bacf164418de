#pragma once

#include <optional>

#include <json.hpp>

#include "rmf/errors.hpp"
#include "rmf/sampler.hpp"
#include "rmf/sieve.hpp"
#include "rmf/wide.hpp"

namespace rmf {

// Elementary-operation budget for the counting joins. Operations estimate
// their work up front (|E|^2 for pair joins, |r2|*|E| for the triple
// merge) and refuse with ResourceLimitError instead of running away.
struct WorkBudget {
    u64 max_ops = 1'000'000'000ULL;

    // Default, overridden by the RMFLAB_BUDGET environment variable.
    static WorkBudget defaults();
};

// Exact even moment E|S|^(2k) as a solution count (orthogonality: the
// expectation of z(n) vanishes unless n = 1, so only product collisions
// a_1...a_k = b_1...b_k survive).
struct MomentValue {
    u64 limit = 0;
    std::optional<int> m;  // empty: no Omega restriction
    int k = 0;
    u128 value = 0;
    double elapsed_ms = 0.0;
    u64 ops_used = 0;
};

// Key representation for product equality tests. automatic picks a numeric
// key (64- or 128-bit) when limit^k provably fits, else falls back to
// canonical ProductKey equality; force_structural pins the fallback.
enum class KeyMode { automatic, force_structural };

MomentValue exact_moment(const FactorSieve &sieve, u64 limit, int m, int k,
                         const WorkBudget &budget = WorkBudget::defaults(),
                         KeyMode mode = KeyMode::automatic);

MomentValue exact_moment_unrestricted(const FactorSieve &sieve, u64 limit, int k,
                                      const WorkBudget &budget = WorkBudget::defaults(),
                                      KeyMode mode = KeyMode::automatic);

// 2k-tuples from E whose total product is a perfect square (the Rademacher
// expectation of f(n) is 1 iff n is a square).
MomentValue exact_moment_rademacher(const FactorSieve &sieve, u64 limit, int m, int k,
                                    const WorkBudget &budget = WorkBudget::defaults(),
                                    KeyMode mode = KeyMode::automatic);

nlohmann::json moment_record(const MomentValue &mv, Model model);

// Bounds and Omega-levels for the quadruple count S: a_1 a_2 = b_1 b_2 with
// Omega(a_i) = m_i, a_i <= N_i on the left and the primed constraints on
// the right.
struct SCountParams {
    u64 n1 = 1, n2 = 1;    // a-side bounds
    u64 n1p = 1, n2p = 1;  // b-side bounds
    int m1 = 0, m2 = 0;
    int m1p = 0, m2p = 0;
};

u128 count_S(const FactorSieve &sieve, const SCountParams &params,
             const WorkBudget &budget = WorkBudget::defaults());

// #{(n1,n2,n1'',n2'') : n1 n2 = n1'' n2''} with both pairs drawn under the
// (N1,m1),(N2,m2) constraints; the squared L2 norm of one side of S.
u128 pair_second_moment(const FactorSieve &sieve, u64 n1, u64 n2, int m1, int m2,
                        const WorkBudget &budget = WorkBudget::defaults());

// Order-of-magnitude bound for count_S with N = N1'*N2':
// sqrt(|E_{N1',m1'}| |E_{N2',m2'}| (|E_{N1,m1}| |E_{N/N1,m2}| + |E_{N/N2,m1}| |E_{N2,m2}|)).
// Requires N1'*N2' <= N1*N2; callers swap the sides otherwise.
double cs_bound(const FactorSieve &sieve, const SCountParams &params);

// Evaluates both sides of the |S_{N,m}|^2 expansion
//   |S|^2 = |E_{N,m}| + sum_{k=1..m} sum_{a,b in E_{N,k}, (a,b)=1}
//           |E_{N/max(a,b), m-k}| z(a) conj(z(b))
// at a concrete character and returns |LHS-RHS| / max(1, |LHS|).
double verify_identity_2_2(const FactorSieve &sieve, u64 limit, int m,
                           const CharacterAssignment &z,
                           const WorkBudget &budget = WorkBudget::defaults());

struct Prop21Result {
    u128 lhs = 0;
    u128 rhs = 0;
    bool holds = false;
};

// Checks the 6th-moment inequality: lhs = E|S|^6 exactly; rhs = the 4th
// moment times |E| plus the full ordered-factorization sum of S terms.
Prop21Result verify_prop_2_1(const FactorSieve &sieve, u64 limit, int m,
                             const WorkBudget &budget = WorkBudget::defaults());

}  // namespace rmf
