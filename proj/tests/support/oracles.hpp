#pragma once

// Deliberately naive reference implementations used only by tests. Each one
// recomputes a quantity through brute force so the optimized library path has
// an independent cross-check.

#include <algorithm>
#include <map>
#include <set>
#include <vector>

#include "kitbench/groupoid.hpp"
#include "kitbench/subgroups.hpp"

namespace kitbench::oracle {

/// Every subgroup of a group table by testing all 2^n subsets containing the
/// identity. Only usable for n <= 12 or so.
inline std::vector<std::vector<int>> naive_subgroups(const GroupTable& t) {
    std::vector<std::vector<int>> out;
    const int n = t.n;
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << n); ++bits) {
        if (!((bits >> t.identity) & 1)) continue;
        std::vector<int> elems;
        for (int i = 0; i < n; ++i)
            if ((bits >> i) & 1) elems.push_back(i);
        bool closed = true;
        for (int x : elems) {
            if (!((bits >> t.inv[static_cast<std::size_t>(x)]) & 1)) closed = false;
            for (int y : elems)
                if (!((bits >> t.at(x, y)) & 1)) closed = false;
            if (!closed) break;
        }
        if (closed) out.push_back(std::move(elems));
    }
    std::sort(out.begin(), out.end());
    return out;
}

/// Labels for {0..n-1} under the equivalence generated by `pairs`, via
/// repeated relabeling sweeps (no union-find); equal label = same class.
inline std::vector<int> naive_partition_labels(int n,
                                               const std::vector<std::pair<int, int>>& pairs) {
    std::vector<int> label(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) label[static_cast<std::size_t>(i)] = i;
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& [x, y] : pairs) {
            int lx = label[static_cast<std::size_t>(x)];
            int ly = label[static_cast<std::size_t>(y)];
            if (lx == ly) continue;
            int lo = std::min(lx, ly);
            for (auto& l : label)
                if (l == lx || l == ly) l = lo;
            changed = true;
        }
    }
    return label;
}

/// Number of classes of {0..n-1} under the equivalence generated by `pairs`.
inline int naive_partition_classes(int n, const std::vector<std::pair<int, int>>& pairs) {
    const std::vector<int> label = naive_partition_labels(n, pairs);
    std::set<int> distinct(label.begin(), label.end());
    return static_cast<int>(distinct.size());
}

/// Family-level orthogonal of a set of subgroups (masks over End(a) local
/// indices): every subgroup of the full lattice meeting each member only at
/// the identity. The library computes this through the element-wise power
/// rule; the oracle stays at the subgroup level.
inline std::vector<int> naive_orthogonal_family(const SubgroupLattice& lat,
                                                const std::vector<int>& family_indices) {
    std::vector<int> out;
    for (int gi = 0; gi < static_cast<int>(lat.groups.size()); ++gi) {
        bool ortho = true;
        for (int hi : family_indices) {
            Mask inter = mask_and(lat.masks[static_cast<std::size_t>(gi)],
                                  lat.masks[static_cast<std::size_t>(hi)]);
            if (mask_popcount(inter) != 1) {  // identity always shared
                ortho = false;
                break;
            }
        }
        if (ortho) out.push_back(gi);
    }
    return out;
}

/// Orbit count of F(n) x X^n under the relation identifying (p, tuple after
/// sigma) with (sigma.p, tuple), computed by canonicalizing every pair over
/// all sigma. `act[sigma_rank][p]` gives the permutation action on F(n).
inline int naive_symmetrized_orbits(int fn_size, int x_size, int n,
                                    const std::vector<std::vector<int>>& act) {
    auto perms = all_permutations(n);
    std::set<std::vector<int>> canon;
    std::vector<int> tuple(static_cast<std::size_t>(n), 0);
    const std::int64_t total = [&] {
        std::int64_t t = 1;
        for (int i = 0; i < n; ++i) t *= x_size;
        return t;
    }();
    for (int p = 0; p < fn_size; ++p) {
        for (std::int64_t code = 0; code < total; ++code) {
            std::int64_t c = code;
            for (int i = 0; i < n; ++i) {
                tuple[static_cast<std::size_t>(i)] = static_cast<int>(c % x_size);
                c /= x_size;
            }
            std::vector<int> best;
            for (std::size_t s = 0; s < perms.size(); ++s) {
                // (p, t) ~ (sigma.p, t after sigma^{-1})
                std::vector<int> key;
                key.push_back(act[s][static_cast<std::size_t>(p)]);
                const auto inv = invert_perm(perms[s]);
                for (int i = 0; i < n; ++i)
                    key.push_back(tuple[static_cast<std::size_t>(inv[static_cast<std::size_t>(i)])]);
                if (best.empty() || key < best) best = std::move(key);
            }
            canon.insert(best);
        }
    }
    return static_cast<int>(canon.size());
}

} // namespace kitbench::oracle
