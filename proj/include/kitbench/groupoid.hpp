#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "kitbench/errors.hpp"

namespace kitbench {

using ObjId = std::int32_t;
using MorId = std::int32_t;

struct MorphismRec {
    std::string name;
    ObjId src = 0;
    ObjId tgt = 0;
};

/// Raw tables prior to validation; mirrors the on-disk JSON shape.
struct RawGroupoid {
    std::vector<std::string> object_names;
    std::vector<MorphismRec> morphisms;            // index is the morphism id
    std::vector<std::array<MorId, 3>> compose;     // {g, f, g_after_f}
    std::vector<std::array<MorId, 2>> inverse;     // {f, f_inverse}
    std::vector<MorId> identities;                 // per object
};

/// A subset of some endomorphism group, stored canonically: sorted ids,
/// closed under composition and inverse, containing the identity.
struct Subgroup {
    ObjId base_object = 0;
    std::vector<MorId> elements;  // ascending

    bool operator==(const Subgroup& o) const {
        return base_object == o.base_object && elements == o.elements;
    }
    bool operator<(const Subgroup& o) const {
        if (base_object != o.base_object) return base_object < o.base_object;
        return elements < o.elements;
    }
    int order() const { return static_cast<int>(elements.size()); }
    bool contains(MorId m) const;
};

struct SubgroupLattice;  // defined in subgroups.hpp
struct GroupTable;       // defined in subgroups.hpp

/// A finite groupoid with exact composition tables. Instances are immutable
/// after validation and shared via shared_ptr; all queries are const and
/// safe under concurrent reads.
class Groupoid {
public:
    /// Checks every axiom (totality, associativity, identities, inverses)
    /// and reports the first violation by morphism id.
    static std::shared_ptr<const Groupoid> validate(RawGroupoid raw);

    /// For tables produced by our own constructions: all structural checks
    /// except the cubic associativity sweep, which holds by construction.
    static std::shared_ptr<const Groupoid> from_trusted_tables(RawGroupoid raw);

    int object_count() const { return static_cast<int>(object_names_.size()); }
    int morphism_count() const { return static_cast<int>(morphisms_.size()); }

    const std::string& object_name(ObjId a) const { return object_names_[check_obj(a)]; }
    const MorphismRec& morphism(MorId m) const { return morphisms_[check_mor(m)]; }
    const std::string& name_of(MorId m) const { return morphisms_[check_mor(m)].name; }
    ObjId src(MorId m) const { return morphisms_[check_mor(m)].src; }
    ObjId tgt(MorId m) const { return morphisms_[check_mor(m)].tgt; }

    MorId identity(ObjId a) const { return identity_[check_obj(a)]; }

    /// g after f; requires tgt(f) == src(g).
    MorId compose(MorId g, MorId f) const;
    MorId inverse(MorId f) const { return inverse_[check_mor(f)]; }

    bool composable(MorId g, MorId f) const { return tgt(f) == src(g); }

    /// Morphisms from `a` to `b`, ascending by id.
    const std::vector<MorId>& hom(ObjId a, ObjId b) const;
    const std::vector<MorId>& endos(ObjId a) const { return hom(a, a); }

    /// Position of an endomorphism within endos(src(m)); -1 if not an endo.
    int endo_index(MorId m) const;

    /// Connected-component id per object (least object id in the component).
    ObjId component_rep(ObjId a) const { return component_[check_obj(a)]; }

    ObjId object_id(const std::string& name) const;  // UnknownObject on miss

    const RawGroupoid& raw() const { return raw_; }

    // Per-object subgroup lattices are expensive; they are computed on first
    // use (by subgroups.cpp) and cached here under a mutex.
    std::shared_ptr<const SubgroupLattice> cached_lattice(ObjId a) const;
    void cache_lattice(ObjId a, std::shared_ptr<const SubgroupLattice> lattice) const;

    // Endomorphism multiplication tables are cheap relative to lattices and
    // needed even where the lattice would be out of reach; cached separately.
    std::shared_ptr<const GroupTable> cached_endo_table(ObjId a) const;
    void cache_endo_table(ObjId a, std::shared_ptr<const GroupTable> table) const;

    // The opposite-groupoid builder stores back-links here so that taking
    // opposites twice returns the exact original instance.
    std::shared_ptr<const Groupoid> cached_opposite() const;
    void cache_opposite(std::shared_ptr<const Groupoid> op) const;

private:
    Groupoid() = default;

    static std::shared_ptr<const Groupoid> build(RawGroupoid raw, bool check_associativity);

    std::size_t check_obj(ObjId a) const;
    std::size_t check_mor(MorId m) const;

    std::vector<std::string> object_names_;
    std::vector<MorphismRec> morphisms_;
    std::vector<MorId> identity_;
    std::vector<MorId> inverse_;

    // Dense table when morphism_count^2 is small, sorted pairs otherwise.
    bool dense_ = true;
    std::vector<MorId> compose_dense_;                       // m*m entries, -1 = not composable
    std::vector<std::pair<std::uint64_t, MorId>> compose_sparse_;  // sorted by key

    std::vector<std::vector<MorId>> hom_;    // (a * nobj + b) -> ids
    std::vector<ObjId> component_;
    std::map<std::string, ObjId> object_by_name_;
    RawGroupoid raw_;

    mutable std::mutex cache_mutex_;
    mutable std::map<ObjId, std::shared_ptr<const SubgroupLattice>> lattice_cache_;
    mutable std::map<ObjId, std::shared_ptr<const GroupTable>> endo_table_cache_;
    mutable std::weak_ptr<const Groupoid> opposite_cache_;
};

using GroupoidPtr = std::shared_ptr<const Groupoid>;

// --- constructions ---------------------------------------------------------

/// Same morphism ids with src/tgt swapped and composition reversed;
/// applying it twice reproduces the input tables exactly.
GroupoidPtr opposite(const GroupoidPtr& g);

/// Product groupoid with object ids a*nB+b and morphism ids f*mB+g.
struct ProductStructure {
    GroupoidPtr result;
    GroupoidPtr left, right;

    ObjId pair_obj(ObjId a, ObjId b) const;
    std::pair<ObjId, ObjId> obj_pair(ObjId p) const;
    MorId pair_mor(MorId f, MorId g) const;
    std::pair<MorId, MorId> mor_pair(MorId m) const;
};
ProductStructure product(const GroupoidPtr& a, const GroupoidPtr& b);

/// Coproduct groupoid; objects and morphisms of the right summand are
/// offset past the left summand.
struct CoproductStructure {
    GroupoidPtr result;
    GroupoidPtr left, right;

    ObjId inj_obj(int side, ObjId a) const;               // side 0 = left
    std::pair<int, ObjId> obj_case(ObjId c) const;
    MorId inj_mor(int side, MorId f) const;
    std::pair<int, MorId> mor_case(MorId m) const;
};
CoproductStructure coproduct(const GroupoidPtr& a, const GroupoidPtr& b);

// --- built-in groupoids -----------------------------------------------------

GroupoidPtr one_groupoid();                 // single object, single morphism
GroupoidPtr cyclic_groupoid(int n);         // one object, morphisms g0..g{n-1}
GroupoidPtr iso2_groupoid();                // two isomorphic objects, 4 morphisms
GroupoidPtr discrete_groupoid(const std::vector<std::string>& names);
GroupoidPtr s3_groupoid();                  // one object, the six permutations of 3

} // namespace kitbench
