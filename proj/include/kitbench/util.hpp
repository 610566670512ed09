#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "kitbench/errors.hpp"

namespace kitbench {

/// Disjoint-set forest with path compression and union by rank.
class UnionFind {
public:
    explicit UnionFind(int n) : parent_(n), rank_(n, 0), classes_(n) {
        std::iota(parent_.begin(), parent_.end(), 0);
    }

    int find(int i) {
        while (parent_[i] != i) {
            parent_[i] = parent_[parent_[i]];
            i = parent_[i];
        }
        return i;
    }

    /// Returns true when the call actually merged two classes.
    bool unite(int i, int j) {
        i = find(i);
        j = find(j);
        if (i == j) return false;
        if (rank_[i] < rank_[j]) std::swap(i, j);
        parent_[j] = i;
        if (rank_[i] == rank_[j]) ++rank_[i];
        --classes_;
        return true;
    }

    int size() const { return static_cast<int>(parent_.size()); }
    int class_count() const { return classes_; }

private:
    std::vector<int> parent_;
    std::vector<unsigned char> rank_;
    int classes_;
};

// --- permutations --------------------------------------------------------
// A permutation of [0, n) is its image vector: p[i] is where i goes.

inline std::vector<int> identity_perm(int n) {
    std::vector<int> p(n);
    std::iota(p.begin(), p.end(), 0);
    return p;
}

/// (g after f): result[i] = g[f[i]].
inline std::vector<int> compose_perm(const std::vector<int>& g,
                                     const std::vector<int>& f) {
    std::vector<int> r(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) r[i] = g[static_cast<std::size_t>(f[i])];
    return r;
}

inline std::vector<int> invert_perm(const std::vector<int>& p) {
    std::vector<int> r(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) r[static_cast<std::size_t>(p[i])] = static_cast<int>(i);
    return r;
}

inline bool is_permutation_vec(const std::vector<int>& p) {
    std::vector<char> seen(p.size(), 0);
    for (int v : p) {
        if (v < 0 || v >= static_cast<int>(p.size()) || seen[static_cast<std::size_t>(v)]) return false;
        seen[static_cast<std::size_t>(v)] = 1;
    }
    return true;
}

/// All permutations of [0, n) in lexicographic order of their image vectors.
inline std::vector<std::vector<int>> all_permutations(int n) {
    std::vector<std::vector<int>> out;
    std::vector<int> p(static_cast<std::size_t>(n));
    std::iota(p.begin(), p.end(), 0);
    do {
        out.push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));
    return out;
}

/// Length of the cycle of `i` under `p` (smallest k > 0 with p^k(i) = i).
inline int cycle_length(const std::vector<int>& p, int i) {
    if (i < 0 || i >= static_cast<int>(p.size()))
        fail(ErrorKind::IndexOutOfRange,
             "cycle index " + std::to_string(i) + " outside [0, " +
                 std::to_string(p.size()) + ")");
    int k = 1;
    int j = p[static_cast<std::size_t>(i)];
    while (j != i) {
        j = p[static_cast<std::size_t>(j)];
        ++k;
    }
    return k;
}

// --- sorted int vectors as sets ------------------------------------------

inline bool sorted_contains(const std::vector<std::int32_t>& v, std::int32_t x) {
    return std::binary_search(v.begin(), v.end(), x);
}

inline std::vector<std::int32_t> sorted_intersection(const std::vector<std::int32_t>& a,
                                                     const std::vector<std::int32_t>& b) {
    std::vector<std::int32_t> out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

inline std::vector<std::int32_t> sorted_union(const std::vector<std::int32_t>& a,
                                              const std::vector<std::int32_t>& b) {
    std::vector<std::int32_t> out;
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

inline bool sorted_subset(const std::vector<std::int32_t>& small,
                          const std::vector<std::int32_t>& big) {
    return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

// --- bit masks over local element indices --------------------------------

using Mask = std::vector<std::uint64_t>;

inline Mask make_mask(int bits) { return Mask((static_cast<std::size_t>(bits) + 63) / 64, 0); }
inline void mask_set(Mask& m, int i) { m[static_cast<std::size_t>(i) >> 6] |= (std::uint64_t{1} << (i & 63)); }
inline bool mask_test(const Mask& m, int i) {
    return (m[static_cast<std::size_t>(i) >> 6] >> (i & 63)) & 1;
}

inline bool mask_subset(const Mask& small, const Mask& big) {
    for (std::size_t w = 0; w < small.size(); ++w)
        if (small[w] & ~big[w]) return false;
    return true;
}

inline Mask mask_and(const Mask& a, const Mask& b) {
    Mask out(a.size());
    for (std::size_t w = 0; w < a.size(); ++w) out[w] = a[w] & b[w];
    return out;
}

inline Mask mask_or(const Mask& a, const Mask& b) {
    Mask out(a.size());
    for (std::size_t w = 0; w < a.size(); ++w) out[w] = a[w] | b[w];
    return out;
}

inline int mask_popcount(const Mask& m) {
    int n = 0;
    for (std::uint64_t w : m) n += static_cast<int>(__builtin_popcountll(w));
    return n;
}

// --- deterministic hashing / seeding --------------------------------------

/// FNV-1a over bytes; used to derive per-law RNG seeds deterministically
/// across platforms (std::hash is implementation-defined).
inline std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

} // namespace kitbench
