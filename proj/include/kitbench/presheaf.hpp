#pragma once

// Finite set-valued presheaves on a groupoid: a finite section set per
// object with a contravariant action of every morphism. The module carries
// the stabilizer calculus (which subgroups fix which sections), the quotient
// representables that generate everything, the orbit decomposition with its
// explicit natural bijection, the freeness pairing used as orthogonality,
// and the application of a profunctor to a presheaf by the same union-find
// coend kernel the profunctor engine uses.

#include <cstdint>
#include <string>
#include <vector>

#include "kitbench/groupoid.hpp"
#include "kitbench/kit.hpp"
#include "kitbench/profunctor.hpp"
#include "kitbench/subgroups.hpp"

namespace kitbench {

using SecId = std::int32_t;

class Presheaf {
public:
    class Builder {
    public:
        explicit Builder(GroupoidPtr base);

        /// New section over object `at`.
        SecId add_section(ObjId at, std::string name = "");

        /// x . along for along : a' -> a with a the object of `x`; the
        /// result must be a section over a'.
        void set_action(SecId x, MorId along, SecId result);

        /// `validate` runs the totality / identity / functoriality sweep;
        /// constructions that fill the table from already-verified formulas
        /// may skip it.
        Presheaf build(bool validate = true);

    private:
        friend class Presheaf;
        GroupoidPtr base_;
        std::vector<ObjId> obj_of_;
        std::vector<std::string> names_;
        std::vector<std::vector<SecId>> action_;  // [section][morphism], -1 unset
    };

    const GroupoidPtr& base() const { return base_; }
    int section_count() const { return static_cast<int>(obj_of_.size()); }
    ObjId object_of(SecId x) const { return obj_of_[check(x)]; }
    const std::string& section_name(SecId x) const { return names_[check(x)]; }

    /// Sections over `a`, ascending.
    const std::vector<SecId>& sections_at(ObjId a) const;

    /// x . along for along : a' -> a with a the object of `x`.
    SecId act(SecId x, MorId along) const;

private:
    friend class Builder;
    GroupoidPtr base_;
    std::vector<ObjId> obj_of_;
    std::vector<std::string> names_;
    std::vector<std::vector<SecId>> by_obj_;
    std::vector<std::vector<SecId>> action_;

    std::size_t check(SecId x) const;
};

// --- generators -----------------------------------------------------------

/// The represented presheaf of `a`: sections over a' are the morphisms
/// a' -> a, acting by precomposition.
Presheaf representable_presheaf(const GroupoidPtr& g, ObjId a);

/// The represented presheaf of `by.base_object` divided by `by`: sections
/// over a' are classes of morphisms a' -> a, two in the same class when
/// they differ by an element of `by` on the left. Representatives are the
/// least morphism ids. Throws NotSubgroup when `by` fails its invariants.
Presheaf quot_representable(const GroupoidPtr& g, const Subgroup& by);

/// One section over every object; every action carries point to point.
Presheaf one_point_presheaf(const GroupoidPtr& g);

Presheaf empty_presheaf(const GroupoidPtr& g);

/// Disjoint union over a shared base; left sections come first.
Presheaf coproduct_presheaf(const Presheaf& left, const Presheaf& right);

// --- stabilizers ----------------------------------------------------------

/// The endomorphisms of the section's object fixing the section.
Subgroup stabilizer(const Presheaf& x, SecId s);

struct PresheafStabilization {
    bool stabilized = true;
    // first failing section when not stabilized
    SecId witness = -1;
    Subgroup stab;
    std::string detail;
};

/// Every stabilizer lies in the kit's family at its object.
PresheafStabilization is_stabilized_presheaf(const Presheaf& x, const Kit& k);

/// The kit collecting every stabilizer of every section of the family;
/// closure under conjugation comes for free from the group action, but the
/// result is validated anyway. All presheaves must share `base`.
Kit stab_of_family(const GroupoidPtr& base, const std::vector<Presheaf>& family);

// --- orbit decomposition ----------------------------------------------------

struct QuotSummand {
    ObjId anchor = 0;   // least object id in its component
    Subgroup group;     // stabilizer of the orbit representative
};

struct Decomposition {
    std::vector<QuotSummand> summands;
    /// Coproduct of the quotient representables of the summands, in order.
    Presheaf sum;
    /// Natural bijection from `sum` sections to the original sections.
    std::vector<SecId> into;
};

/// Splits a stabilized presheaf into quotient representables, one per orbit
/// of the sections over each component's least object. Deterministic: orbit
/// representatives are least section ids. Throws NotStabilized (with the
/// witness section in the message) when some stabilizer escapes the kit.
Decomposition decompose(const Presheaf& x, const Kit& k);

// --- orthogonality ----------------------------------------------------------

struct FreePairReport {
    bool orthogonal = true;
    // fixed pair and the nonidentity endomorphism fixing it
    SecId left = -1, right = -1;
    MorId fixing = -1;
    std::string detail;
};

/// Freeness of the paired action: a presheaf on the base and one on its
/// opposite are orthogonal when no nonidentity endomorphism fixes a pair
/// (x . alpha paired against y . alpha^{-1}). Throws BaseMismatch unless
/// `y_op` lives on the opposite of `x`'s base.
FreePairReport presheaf_orthogonal(const Presheaf& x, const Presheaf& y_op);

// --- profunctor application --------------------------------------------------

/// The coend pairing a profunctor's elements with the presheaf's sections
/// over the shared source object, glued by the source action on both sides.
/// The result is a presheaf on the profunctor's target.
Presheaf apply_profunctor(const Profunctor& p, const Presheaf& x);

/// apply_profunctor behind eager stabilization checks: the profunctor must
/// be stabilized for the kit pair and the presheaf for the source kit.
/// Throws NotStabilized with the failing witness otherwise.
Presheaf apply_stabilized(const Profunctor& p, const Presheaf& x,
                          const Kit& source_kit, const Kit& target_kit);

// --- maps between presheaves -------------------------------------------------

/// `component[x]` is the image of section x; checks object compatibility and
/// naturality against every morphism. Throws TypeMismatch on a violation.
void validate_presheaf_map(const Presheaf& from, const Presheaf& to,
                           const std::vector<SecId>& component);

/// Every section of `to` is hit.
bool pointwise_surjective(const Presheaf& to, const std::vector<SecId>& component);

/// All natural maps from `from` to `to`, each as a component vector. A map
/// is fixed by its values on orbit representatives, which must not lose
/// stabilizer; the enumeration walks those choices. Throws
/// SearchSpaceTooLarge past `limit` maps.
std::vector<std::vector<SecId>> enumerate_presheaf_maps(const Presheaf& from,
                                                        const Presheaf& to,
                                                        std::size_t limit = 10'000);

/// Natural isomorphism test over a shared base: decompose both sides and
/// match summands anchor by anchor up to conjugacy of the groups.
bool presheaves_isomorphic(const Presheaf& a, const Presheaf& b);

} // namespace kitbench
