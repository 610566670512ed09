#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "kitbench/groupoid.hpp"
#include "kitbench/util.hpp"

namespace kitbench {

/// Multiplication table of a finite group over local indices 0..n-1.
/// Used both for endomorphism groups of concrete groupoids and for
/// endomorphism sets produced structurally (sequence morphisms).
struct GroupTable {
    int n = 0;
    int identity = 0;
    std::vector<int> mult;   // n*n, mult[i*n+j] = i after j
    std::vector<int> inv;    // n
    bool abelian = false;

    int at(int i, int j) const { return mult[static_cast<std::size_t>(i) * n + j]; }
    int power(int i, int k) const;          // k >= 0
    int element_order(int i) const;
};

/// Builds the table for an arbitrary finite set of elements closed under a
/// composition function. `elems` supplies stable external labels; `compose`
/// must be total on the set and every product must be in the set.
GroupTable group_table(int n, int identity_index,
                       const std::function<int(int, int)>& compose);

/// Table of End(a) with local index = position in g.endos(a).
GroupTable endo_table(const Groupoid& g, ObjId a);

/// All subgroups of a group given by its table, each a sorted list of local
/// indices. Generated as the join-closure of the cyclic subgroups; throws
/// GroupTooLarge past `max_order` elements.
std::vector<std::vector<int>> all_subgroups(const GroupTable& t, int max_order = 120);

/// Closure of a generating set as sorted local indices.
std::vector<int> subgroup_closure_local(const GroupTable& t, std::vector<int> gens);

/// Subgroup lattice of End(a) with bit masks for fast intersection tests.
/// Computed once per object and cached on the groupoid.
struct SubgroupLattice {
    ObjId object = 0;
    std::vector<MorId> endo_elems;            // ascending; local index = position
    GroupTable table;
    std::vector<Subgroup> groups;             // canonically sorted
    std::vector<Mask> masks;                  // per group, over local indices

    int local_index(MorId m) const;           // -1 if not an endo of the object
    int find(const Subgroup& s) const;        // index in `groups`, -1 if absent
    Mask to_mask(const Subgroup& s) const;
    Subgroup from_local(const std::vector<int>& locals) const;
};

/// Lattice for End(a), from the cache when already computed.
std::shared_ptr<const SubgroupLattice> subgroup_lattice(const Groupoid& g, ObjId a,
                                                        int max_order = 120);

/// Multiplication table for End(a), built once and cached on the groupoid.
/// Usable even where the subgroup lattice would be out of reach.
std::shared_ptr<const GroupTable> shared_endo_table(const Groupoid& g, ObjId a);

// --- subgroup operations ------------------------------------------------

Subgroup endo_group(const Groupoid& g, ObjId a);

/// Least subgroup of End(a) containing `gens`.
Subgroup subgroup_closure(const Groupoid& g, ObjId a, const std::vector<MorId>& gens);

/// Every subgroup of End(a), canonically sorted and deduplicated.
std::vector<Subgroup> enumerate_subgroups(const Groupoid& g, ObjId a, int max_order = 120);

/// alpha . H . alpha^{-1} at tgt(alpha); requires src(alpha) = base of H.
Subgroup conjugate_subgroup(const Groupoid& g, const Subgroup& h, MorId alpha);

/// Checks the Subgroup invariants (sortedness, closure, identity, inverses).
bool is_subgroup(const Groupoid& g, const Subgroup& h);

} // namespace kitbench
