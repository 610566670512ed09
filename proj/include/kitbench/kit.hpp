#pragma once

// Kits: conjugation-closed assignments of subgroup families to the objects of
// a groupoid, together with the orthogonality operators that carve out the
// Boolean ones.
//
// Representation note. A Boolean kit is fully determined by the union of its
// family at each object: the family is exactly the set of subgroups contained
// in that union, and the union is "saturated" in the sense computed by
// `phi_saturate` below. All Boolean-kit operators in this library therefore
// work on per-object element masks instead of enumerating subgroup lattices,
// which keeps them usable on endomorphism groups far too large for lattice
// enumeration. The mask calculus is cross-checked against naive family-level
// computations in the test suite.

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "kitbench/groupoid.hpp"
#include "kitbench/subgroups.hpp"
#include "kitbench/util.hpp"

namespace kitbench {

enum class Known : std::uint8_t { no, yes, unknown };

// --- element-mask calculus ---------------------------------------------------
// Masks are over local End(a) indices (position within the ascending endo
// bucket). `s` plays the role of the union of a family.

/// True when every power of `alpha` either is the identity or has itself a
/// nontrivial power inside `s`.
bool phi_condition(const GroupTable& t, const Mask& s, int alpha);

/// All elements satisfying `phi_condition` — the union of the double
/// orthogonal of any family whose union is `s`.
Mask phi_saturate(const GroupTable& t, const Mask& s);

/// Elements all of whose nontrivial powers avoid `s` — the union of the
/// orthogonal of any family whose union is `s`.
Mask orth_union_mask(const GroupTable& t, const Mask& s);

/// Elements of `s` whose every power stays in `s` (the largest power-closed
/// subset). Used to turn an element-wise predicate into a union mask.
Mask cyclic_interior(const GroupTable& t, const Mask& s);

/// True when `s` is closed under powers, conjugation by every element, and
/// equals its own phi-saturation: exactly the masks that arise as unions of
/// Boolean kit families.
bool is_boolean_mask(const GroupTable& t, const Mask& s);

// --- kits --------------------------------------------------------------------

class Kit {
public:
    /// Build from an explicit family per object. Validates that every entry
    /// is a subgroup based at its object and that the assignment is closed
    /// under conjugation along every morphism. Throws NotSubgroup /
    /// NotConjugationClosed.
    static Kit from_family(GroupoidPtr base, std::vector<std::vector<Subgroup>> family);

    /// Boolean kit from per-object union masks. The masks are checked to be
    /// power-closed, conjugation-invariant, transported correctly along the
    /// groupoid's isomorphisms, and saturated. Throws NotBoolean on failure.
    static Kit boolean_from_masks(GroupoidPtr base, std::vector<Mask> masks);

    /// Identity-only family at every object; Boolean.
    static Kit trivial(GroupoidPtr base);

    /// Every subgroup at every object; Boolean. Materializing its family
    /// still requires a lattice, but the kit itself never does.
    static Kit maximal(GroupoidPtr base);

    /// Fast path for masks produced by the operators in this module, which
    /// are saturated by construction; skips the boolean_from_masks checks.
    static Kit from_verified_masks(GroupoidPtr base, std::vector<Mask> masks, Known flag);

    const GroupoidPtr& base() const { return base_; }

    /// Union of the family at `a`, as a mask over local End(a) indices.
    const Mask& union_mask(ObjId a) const;

    /// Membership of a morphism (by global id) in the union at its object.
    bool union_contains(MorId m) const;

    /// The family at `a`. Explicit kits return their stored family; Boolean
    /// kits materialize all subgroups under the mask, which needs the
    /// subgroup lattice and hence only works on small endomorphism groups.
    std::vector<Subgroup> family(ObjId a) const;

    /// Family membership without materializing: mask containment for Boolean
    /// kits, stored-family lookup otherwise.
    bool family_member(const Subgroup& h) const;

    Known boolean_known() const { return boolean_; }
    bool has_explicit_family() const { return family_.has_value(); }

    /// Mask-level equality (bases must agree on morphism ids).
    bool same_masks(const Kit& other) const;

private:
    Kit() = default;

    GroupoidPtr base_;
    std::vector<Mask> masks_;                                  // by ObjId
    std::optional<std::vector<std::vector<Subgroup>>> family_; // by ObjId, sorted
    Known boolean_ = Known::unknown;
};

/// Non-throwing variant of Kit::from_family: collects every defect instead.
struct KitValidation {
    bool ok = true;
    std::vector<std::string> problems;
};
KitValidation validate_kit(const GroupoidPtr& base,
                           const std::vector<std::vector<Subgroup>>& family);

/// "trivial" or "maximal".
Kit canonical_kit(const GroupoidPtr& base, const std::string& which);

// --- orthogonality -----------------------------------------------------------

/// The orthogonal kit, based on the opposite groupoid. Always Boolean.
Kit orthogonal_kit(const Kit& k);

/// Orthogonal twice: the Boolean closure, based on the original groupoid.
Kit double_orth(const Kit& k);

/// Outcome of the Boolean test, with the two defining conditions separated:
/// the family must contain every subgroup inside its union, and the union
/// must equal its phi-saturation. `witness` describes the first failure.
struct BooleanDiagnosis {
    bool boolean = false;
    bool downward_complete = true;  // family = all subgroups within the union
    bool saturated = true;          // union mask = phi_saturate(union mask)
    std::string witness;
};
BooleanDiagnosis is_boolean(const Kit& k);

// --- enumeration and lattice operations --------------------------------------

/// All Boolean kits on `base`. Works per connected component: candidates are
/// unions of "atoms" (conjugation- and power-closures of single
/// endomorphisms) at the component's representative object, filtered by
/// saturation, then transported along isomorphisms. Throws
/// SearchSpaceTooLarge when a component has more than `max_atoms` atoms.
std::vector<Kit> enumerate_boolean_kits(const GroupoidPtr& base, int max_atoms = 20);

/// Lattice of Boolean kits ordered by family inclusion: meet intersects the
/// union masks, join saturates their union. Inputs must be Boolean.
Kit boolean_meet(const Kit& a, const Kit& b);
Kit boolean_join(const Kit& a, const Kit& b);

} // namespace kitbench
