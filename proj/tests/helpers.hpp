#pragma once

// Shared fixtures and independent oracles for the test suites. Everything in
// here recomputes expectations from definitions, never through the library
// path under test.

#include <cstdint>
#include <vector>

#include "ergolab/averaging.hpp"
#include "ergolab/dynamics.hpp"
#include "ergolab/prob.hpp"

namespace testutil {

using namespace ergolab;

// Deterministic xorshift; tests must be bit-reproducible.
struct Rng {
    uint64_t state = 0x9e3779b97f4a7c15ull;
    uint64_t next() {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        return state;
    }
    int below(int n) { return static_cast<int>(next() % static_cast<uint64_t>(n)); }
    Rat rat(int span = 3, int dmax = 4) {
        return rat_frac(below(2 * span + 1) - span, 1 + below(dmax));
    }
    GaussRat gauss(int span = 3, int dmax = 4) { return {rat(span, dmax), rat(span, dmax)}; }
    Perm perm(int n) {
        Perm p = identity_perm(n);
        for (int i = n - 1; i > 0; --i) std::swap(p[i], p[below(i + 1)]);
        return p;
    }
};

inline SpacePtr uniform4() { return ProbSpace::uniform(4); }

inline Perm cycle_perm(int n) {  // x -> x+1 mod n
    Perm p(n);
    for (int i = 0; i < n; ++i) p[i] = (i + 1) % n;
    return p;
}

inline Perm swap01(int n) {
    Perm p = identity_perm(n);
    std::swap(p[0], p[1]);
    return p;
}

// d=2 system on two uniform points: T_1 the swap, T_2 as requested.
inline GdSystem two_point_swap_system(bool second_identity) {
    SpacePtr x = ProbSpace::uniform(2);
    Perm s = swap01(2);
    Perm id = identity_perm(2);
    return GdSystem::lazy_z(x, {s, second_identity ? id : s});
}

// Two commuting involutions on four points (the regular Klein action).
inline GdSystem klein_lazy() {
    return GdSystem::lazy_z(uniform4(), {Perm{1, 0, 3, 2}, Perm{2, 3, 0, 1}});
}

// Table-mode Z/2 system acting on two points by the swap.
inline GdSystem z2_swap_table(int d) {
    SpacePtr x = ProbSpace::uniform(2);
    std::vector<std::vector<Perm>> acts(d, {identity_perm(2), swap01(2)});
    return GdSystem::from_actions(x, Group::cyclic(2), std::move(acts));
}

// All set partitions of {0..n-1} as cell lists, via restricted growth strings.
inline std::vector<std::vector<std::vector<int>>> all_partitions(int n) {
    std::vector<std::vector<std::vector<int>>> out;
    std::vector<int> rgs(n, 0);
    while (true) {
        int cells = 0;
        for (int v : rgs) cells = std::max(cells, v + 1);
        std::vector<std::vector<int>> part(cells);
        for (int i = 0; i < n; ++i) part[rgs[i]].push_back(i);
        out.push_back(part);
        int i = n - 1;
        for (; i > 0; --i) {
            int cap = 0;
            for (int k = 0; k < i; ++k) cap = std::max(cap, rgs[k]);
            if (rgs[i] <= cap) {
                ++rgs[i];
                break;
            }
            rgs[i] = 0;
        }
        if (i == 0) break;
    }
    return out;
}

// Independent evaluation of the d-fold average at one point: explicit loop
// over g with freshly computed window permutations.
inline GaussRat brute_lambda_at(const GdSystem& s, const std::vector<Obs>& fs, long long n,
                                int x) {
    GaussRat acc;
    if (s.lazy()) {
        for (long long g = 0; g < n; ++g) {
            GaussRat prod(1);
            for (int i = 1; i <= s.d(); ++i) {
                Perm w = identity_perm(s.points());
                for (int a = 1; a <= i; ++a) w = compose(perm_pow(s.lazy_gen(a), g), w);
                prod *= fs[i - 1].value(w[x]);
            }
            acc += prod;
        }
        acc /= rat_of(n);
    } else {
        const long long m = s.group()->size();
        for (int g = 0; g < m; ++g) {
            GaussRat prod(1);
            for (int i = 1; i <= s.d(); ++i) {
                Perm w = identity_perm(s.points());
                for (int a = 1; a <= i; ++a) w = compose(s.action(a, g), w);
                prod *= fs[i - 1].value(w[x]);
            }
            acc += prod;
        }
        acc /= rat_of(m);
    }
    return acc;
}

}  // namespace testutil
