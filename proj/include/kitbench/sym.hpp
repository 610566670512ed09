#pragma once

// The free symmetric construction on a groupoid: objects are finite words of
// base objects, morphisms pair a position permutation with a per-position
// base morphism. Two layers are provided. The structural layer works on
// views (SymObjectV / SymMorphismV) without ever materializing the whole
// groupoid; the materialized layer builds an honest Groupoid up to a length
// bound so that kits, profunctors and presheaves can run on it unchanged.

#include <functional>
#include <map>
#include <memory>
#include <vector>

#include "kitbench/groupoid.hpp"

namespace kitbench {

struct SymObjectV {
    std::vector<ObjId> items;
    auto operator<=>(const SymObjectV&) const = default;
    int length() const { return static_cast<int>(items.size()); }
};

/// A morphism u -> v: `perm` in image form sends position i of u to position
/// perm[i] of v, and parts[i] : u[i] -> v[perm[i]] in the base.
struct SymMorphismV {
    std::vector<int> perm;
    std::vector<MorId> parts;
    auto operator<=>(const SymMorphismV&) const = default;
    int length() const { return static_cast<int>(perm.size()); }
};

// --- structural operations ----------------------------------------------------

SymMorphismV sym_identity(const Groupoid& base, const SymObjectV& u);

/// g after f, position-wise: the permutations compose and each part of f is
/// followed by the part of g at the position f sends it to.
SymMorphismV sym_compose(const Groupoid& base, const SymMorphismV& g, const SymMorphismV& f);

SymMorphismV sym_inverse(const Groupoid& base, const SymMorphismV& f);

/// The word f maps u onto.
SymObjectV sym_target(const Groupoid& base, const SymObjectV& u, const SymMorphismV& f);

/// Does f typecheck as a morphism u -> v?
bool sym_valid(const Groupoid& base, const SymObjectV& u, const SymObjectV& v,
               const SymMorphismV& f);

/// All morphisms u -> v, ordered by permutation (lexicographic image form)
/// and then by parts as an odometer over base hom sets.
std::vector<SymMorphismV> sym_hom(const Groupoid& base, const SymObjectV& u,
                                  const SymObjectV& v);

/// Length of the permutation cycle through `position`.
int cycle_order(const SymMorphismV& endo, int position);

/// The base endomorphism obtained by following the parts of `endo` once
/// around the permutation cycle through `position`; lives on the base object
/// at that position.
MorId loop_endomorphism(const Groupoid& base, const SymObjectV& u, const SymMorphismV& endo,
                        int position);

// --- materialized layer --------------------------------------------------------

struct SymGroupoid {
    GroupoidPtr base;
    GroupoidPtr carrier;
    int max_length = 0;

    std::vector<SymObjectV> objects;      // by carrier object id
    std::vector<SymMorphismV> morphisms;  // by carrier morphism id

    const SymObjectV& object_view(ObjId o) const { return objects[static_cast<std::size_t>(o)]; }
    const SymMorphismV& morphism_view(MorId m) const {
        return morphisms[static_cast<std::size_t>(m)];
    }

    /// Carrier id of a word; UnknownObject if out of range or filtered away.
    ObjId object_id(const SymObjectV& u) const;
    /// Carrier id, or -1 when absent.
    ObjId find_object(const SymObjectV& u) const;

    /// Carrier id of a view based at carrier object `src`; UnknownElement on miss.
    MorId morphism_id(ObjId src, const SymMorphismV& f) const;

private:
    std::map<SymObjectV, ObjId> object_index_;
    std::map<std::pair<ObjId, SymMorphismV>, MorId> morphism_index_;
    friend std::shared_ptr<const SymGroupoid> materialize_sym(
        GroupoidPtr, int, std::size_t, const std::function<bool(const SymObjectV&)>&);
};

using SymGroupoidPtr = std::shared_ptr<const SymGroupoid>;

/// Build the symmetric groupoid over `base` for all words of length at most
/// `max_length` (optionally only words passing `keep`, which must be
/// invariant under reordering and base isomorphism for the result to be a
/// groupoid). Throws BudgetExceeded when the morphism count would pass
/// `morphism_budget`.
std::shared_ptr<const SymGroupoid> materialize_sym(
    GroupoidPtr base, int max_length, std::size_t morphism_budget = 500'000,
    const std::function<bool(const SymObjectV&)>& keep = {});

} // namespace kitbench
