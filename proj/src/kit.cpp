#include "kitbench/kit.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "kitbench/errors.hpp"

namespace kitbench {

// --- element-mask calculus ---------------------------------------------------

namespace {

/// Does some nontrivial power of `beta` land in `s`?
bool has_power_in(const GroupTable& t, const Mask& s, int beta) {
    int p = beta;
    while (p != t.identity) {
        if (mask_test(s, p)) return true;
        p = t.at(p, beta);
    }
    return false;
}

} // namespace

bool phi_condition(const GroupTable& t, const Mask& s, int alpha) {
    int p = alpha;
    while (p != t.identity) {
        if (!has_power_in(t, s, p)) return false;
        p = t.at(p, alpha);
    }
    return true;
}

Mask phi_saturate(const GroupTable& t, const Mask& s) {
    Mask out = make_mask(t.n);
    for (int x = 0; x < t.n; ++x)
        if (phi_condition(t, s, x)) mask_set(out, x);
    return out;
}

Mask orth_union_mask(const GroupTable& t, const Mask& s) {
    Mask out = make_mask(t.n);
    for (int x = 0; x < t.n; ++x)
        if (!has_power_in(t, s, x)) mask_set(out, x);
    return out;
}

Mask cyclic_interior(const GroupTable& t, const Mask& s) {
    Mask out = make_mask(t.n);
    for (int x = 0; x < t.n; ++x) {
        bool all_in = mask_test(s, x);
        int p = t.at(x, x);
        while (all_in && p != x) {
            if (!mask_test(s, p)) all_in = false;
            p = t.at(p, x);
        }
        if (all_in) mask_set(out, x);
    }
    return out;
}

bool is_boolean_mask(const GroupTable& t, const Mask& s) {
    for (int x = 0; x < t.n; ++x) {
        if (!mask_test(s, x)) continue;
        // closed under powers
        int p = t.at(x, x);
        while (p != x) {
            if (!mask_test(s, p)) return false;
            p = t.at(p, x);
        }
        // closed under conjugation
        for (int g = 0; g < t.n; ++g) {
            int conj = t.at(t.at(g, x), t.inv[static_cast<std::size_t>(g)]);
            if (!mask_test(s, conj)) return false;
        }
    }
    return phi_saturate(t, s) == s;
}

// --- kit construction ---------------------------------------------------------

namespace {

/// Local End(a) index of a morphism id within the ascending endo bucket.
int local_endo_index(const Groupoid& g, ObjId a, MorId m) {
    const auto& elems = g.endos(a);
    auto it = std::lower_bound(elems.begin(), elems.end(), m);
    if (it == elems.end() || *it != m)
        fail(ErrorKind::NotEndomorphism, "morphism " + std::to_string(m) +
                                             " is not an endomorphism of object " + std::to_string(a));
    return static_cast<int>(it - elems.begin());
}

Mask subgroup_to_mask(const Groupoid& g, ObjId a, const Subgroup& h) {
    Mask m = make_mask(static_cast<int>(g.endos(a).size()));
    for (MorId e : h.elements) mask_set(m, local_endo_index(g, a, e));
    return m;
}

/// Transport a mask at `a` to `tgt(f)` along the isomorphism `f`.
Mask transport_mask(const Groupoid& g, ObjId a, const Mask& m, MorId f) {
    ObjId b = g.tgt(f);
    const auto& src_elems = g.endos(a);
    Mask out = make_mask(static_cast<int>(g.endos(b).size()));
    MorId f_inv = g.inverse(f);
    for (int i = 0; i < static_cast<int>(src_elems.size()); ++i) {
        if (!mask_test(m, i)) continue;
        MorId moved = g.compose(g.compose(f, src_elems[static_cast<std::size_t>(i)]), f_inv);
        mask_set(out, local_endo_index(g, b, moved));
    }
    return out;
}

std::string describe_subgroup(const Groupoid& g, const Subgroup& h) {
    std::ostringstream os;
    os << "{";
    for (std::size_t i = 0; i < h.elements.size(); ++i)
        os << (i ? "," : "") << g.name_of(h.elements[i]);
    os << "} at " << g.object_name(h.base_object);
    return os.str();
}

} // namespace

Kit Kit::from_family(GroupoidPtr base, std::vector<std::vector<Subgroup>> family) {
    auto report = validate_kit(base, family);
    if (!report.ok) {
        const auto& first = report.problems.front();
        if (first.find("conjugat") != std::string::npos)
            fail(ErrorKind::NotConjugationClosed, first);
        fail(ErrorKind::NotSubgroup, first);
    }
    Kit k;
    k.base_ = std::move(base);
    for (auto& fam : family) {
        std::sort(fam.begin(), fam.end());
        fam.erase(std::unique(fam.begin(), fam.end()), fam.end());
    }
    for (ObjId a = 0; a < k.base_->object_count(); ++a) {
        Mask u = make_mask(static_cast<int>(k.base_->endos(a).size()));
        for (const auto& h : family[static_cast<std::size_t>(a)])
            u = mask_or(u, subgroup_to_mask(*k.base_, a, h));
        k.masks_.push_back(std::move(u));
    }
    k.family_ = std::move(family);
    k.boolean_ = Known::unknown;
    return k;
}

Kit Kit::boolean_from_masks(GroupoidPtr base, std::vector<Mask> masks) {
    if (static_cast<ObjId>(masks.size()) != base->object_count())
        fail(ErrorKind::NotBoolean, "expected one mask per object");
    for (ObjId a = 0; a < base->object_count(); ++a) {
        auto table = shared_endo_table(*base, a);
        if (static_cast<std::size_t>(masks[static_cast<std::size_t>(a)].size()) !=
            (static_cast<std::size_t>(table->n) + 63) / 64)
            fail(ErrorKind::NotBoolean,
                 "mask width does not match End(" + base->object_name(a) + ")");
        if (!is_boolean_mask(*table, masks[static_cast<std::size_t>(a)]))
            fail(ErrorKind::NotBoolean,
                 "mask at " + base->object_name(a) +
                     " is not a saturated conjugation-invariant power-closed union");
    }
    // Masks must agree across each connected component.
    for (ObjId b = 0; b < base->object_count(); ++b) {
        ObjId r = base->component_rep(b);
        if (r == b) continue;
        MorId f = base->hom(r, b).front();
        if (transport_mask(*base, r, masks[static_cast<std::size_t>(r)], f) !=
            masks[static_cast<std::size_t>(b)])
            fail(ErrorKind::NotBoolean,
                 "masks at " + base->object_name(r) + " and " + base->object_name(b) +
                     " are not related by transport along an isomorphism");
    }
    Kit k;
    k.base_ = std::move(base);
    k.masks_ = std::move(masks);
    k.boolean_ = Known::yes;
    return k;
}

Kit Kit::from_verified_masks(GroupoidPtr base, std::vector<Mask> masks, Known flag) {
    Kit k;
    k.base_ = std::move(base);
    k.masks_ = std::move(masks);
    k.boolean_ = flag;
    return k;
}

Kit Kit::trivial(GroupoidPtr base) {
    std::vector<Mask> masks;
    for (ObjId a = 0; a < base->object_count(); ++a) {
        Mask m = make_mask(static_cast<int>(base->endos(a).size()));
        mask_set(m, local_endo_index(*base, a, base->identity(a)));
        masks.push_back(std::move(m));
    }
    return from_verified_masks(std::move(base), std::move(masks), Known::yes);
}

Kit Kit::maximal(GroupoidPtr base) {
    std::vector<Mask> masks;
    for (ObjId a = 0; a < base->object_count(); ++a) {
        const int n = static_cast<int>(base->endos(a).size());
        Mask m = make_mask(n);
        for (int i = 0; i < n; ++i) mask_set(m, i);
        masks.push_back(std::move(m));
    }
    return from_verified_masks(std::move(base), std::move(masks), Known::yes);
}

const Mask& Kit::union_mask(ObjId a) const {
    if (a < 0 || a >= static_cast<ObjId>(masks_.size()))
        fail(ErrorKind::UnknownObject, "no mask for object " + std::to_string(a));
    return masks_[static_cast<std::size_t>(a)];
}

bool Kit::union_contains(MorId m) const {
    if (base_->src(m) != base_->tgt(m)) return false;
    ObjId a = base_->src(m);
    return mask_test(union_mask(a), local_endo_index(*base_, a, m));
}

std::vector<Subgroup> Kit::family(ObjId a) const {
    if (family_) return (*family_)[static_cast<std::size_t>(a)];
    auto lat = subgroup_lattice(*base_, a);
    std::vector<Subgroup> out;
    for (std::size_t i = 0; i < lat->groups.size(); ++i)
        if (mask_subset(lat->masks[i], union_mask(a))) out.push_back(lat->groups[i]);
    return out;
}

bool Kit::family_member(const Subgroup& h) const {
    if (!is_subgroup(*base_, h))
        fail(ErrorKind::NotSubgroup, "family_member expects a subgroup");
    if (family_) {
        const auto& fam = (*family_)[static_cast<std::size_t>(h.base_object)];
        return std::binary_search(fam.begin(), fam.end(), h);
    }
    return mask_subset(subgroup_to_mask(*base_, h.base_object, h), union_mask(h.base_object));
}

bool Kit::same_masks(const Kit& other) const { return masks_ == other.masks_; }

KitValidation validate_kit(const GroupoidPtr& base,
                           const std::vector<std::vector<Subgroup>>& family) {
    KitValidation v;
    auto note = [&](std::string msg) {
        v.ok = false;
        v.problems.push_back(std::move(msg));
    };
    if (static_cast<ObjId>(family.size()) != base->object_count()) {
        note("expected one family per object");
        return v;
    }
    for (ObjId a = 0; a < base->object_count(); ++a) {
        for (const auto& h : family[static_cast<std::size_t>(a)]) {
            if (h.base_object != a)
                note("family at " + base->object_name(a) + " lists a subgroup based elsewhere");
            else if (!is_subgroup(*base, h))
                note(describe_subgroup(*base, h) + " is not a subgroup");
        }
    }
    if (!v.ok) return v;

    // Conjugation closure along every morphism.
    for (MorId f = 0; f < base->morphism_count(); ++f) {
        ObjId a = base->src(f), b = base->tgt(f);
        for (const auto& h : family[static_cast<std::size_t>(a)]) {
            auto moved = conjugate_subgroup(*base, h, f);
            const auto& fam_b = family[static_cast<std::size_t>(b)];
            if (std::find(fam_b.begin(), fam_b.end(), moved) == fam_b.end()) {
                note("family is not conjugation-closed: " + describe_subgroup(*base, h) +
                     " moved along " + base->name_of(f) + " is missing at " +
                     base->object_name(b));
                return v;
            }
        }
    }
    return v;
}

Kit canonical_kit(const GroupoidPtr& base, const std::string& which) {
    if (which == "trivial") return Kit::trivial(base);
    if (which == "maximal") return Kit::maximal(base);
    fail(ErrorKind::UsageError, "unknown canonical kit '" + which + "'");
}

// --- orthogonality -----------------------------------------------------------

Kit orthogonal_kit(const Kit& k) {
    const auto& g = *k.base();
    std::vector<Mask> masks;
    for (ObjId a = 0; a < g.object_count(); ++a)
        masks.push_back(orth_union_mask(*shared_endo_table(g, a), k.union_mask(a)));
    return Kit::from_verified_masks(opposite(k.base()), std::move(masks), Known::yes);
}

Kit double_orth(const Kit& k) { return orthogonal_kit(orthogonal_kit(k)); }

BooleanDiagnosis is_boolean(const Kit& k) {
    BooleanDiagnosis d;
    if (k.boolean_known() == Known::yes) {
        d.boolean = true;
        return d;
    }
    const auto& g = *k.base();
    for (ObjId a = 0; a < g.object_count() && (d.downward_complete || d.saturated); ++a) {
        const Mask& u = k.union_mask(a);

        if (d.downward_complete) {
            auto lat = subgroup_lattice(g, a);
            std::vector<Subgroup> expected;
            for (std::size_t i = 0; i < lat->groups.size(); ++i)
                if (mask_subset(lat->masks[i], u)) expected.push_back(lat->groups[i]);
            auto actual = k.family(a);
            std::sort(actual.begin(), actual.end());
            if (actual != expected) {
                d.downward_complete = false;
                for (const auto& h : expected)
                    if (!std::binary_search(actual.begin(), actual.end(), h)) {
                        d.witness = describe_subgroup(g, h) +
                                    " lies inside the union but is not in the family";
                        break;
                    }
                if (d.witness.empty())
                    d.witness = "family at " + g.object_name(a) +
                                " contains a subgroup outside its own union";
            }
        }

        if (d.saturated) {
            auto table = shared_endo_table(g, a);
            Mask sat = phi_saturate(*table, u);
            if (sat != u) {
                d.saturated = false;
                for (int i = 0; i < table->n; ++i)
                    if (mask_test(sat, i) && !mask_test(u, i)) {
                        d.witness = "element " +
                                    g.name_of(g.endos(a)[static_cast<std::size_t>(i)]) +
                                    " is forced into the union at " + g.object_name(a) +
                                    " by saturation";
                        break;
                    }
            }
        }
    }
    d.boolean = d.downward_complete && d.saturated;
    return d;
}

// --- enumeration and lattice operations --------------------------------------

namespace {

/// Smallest power- and conjugation-closed subset containing `x`.
Mask atom_of(const GroupTable& t, int x) {
    Mask m = make_mask(t.n);
    std::vector<int> work{x};
    mask_set(m, x);
    while (!work.empty()) {
        int y = work.back();
        work.pop_back();
        int p = t.at(y, y);
        if (!mask_test(m, p)) {
            mask_set(m, p);
            work.push_back(p);
        }
        for (int g = 0; g < t.n; ++g) {
            int conj = t.at(t.at(g, y), t.inv[static_cast<std::size_t>(g)]);
            if (!mask_test(m, conj)) {
                mask_set(m, conj);
                work.push_back(conj);
            }
        }
    }
    return m;
}

} // namespace

std::vector<Kit> enumerate_boolean_kits(const GroupoidPtr& base, int max_atoms) {
    const auto& g = *base;

    std::vector<ObjId> reps;
    for (ObjId a = 0; a < g.object_count(); ++a)
        if (g.component_rep(a) == a) reps.push_back(a);

    // Saturated candidate masks per component representative.
    std::vector<std::vector<Mask>> component_masks;
    for (ObjId r : reps) {
        auto table = shared_endo_table(g, r);
        std::set<Mask> atoms;
        for (int x = 0; x < table->n; ++x)
            if (x != table->identity) atoms.insert(atom_of(*table, x));
        if (static_cast<int>(atoms.size()) > max_atoms)
            fail(ErrorKind::SearchSpaceTooLarge,
                 "End(" + g.object_name(r) + ") has " + std::to_string(atoms.size()) +
                     " generator classes; limit is " + std::to_string(max_atoms));
        std::vector<Mask> atom_list(atoms.begin(), atoms.end());

        Mask base_mask = make_mask(table->n);
        mask_set(base_mask, table->identity);

        std::set<Mask> candidates;
        const std::size_t k = atom_list.size();
        for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << k); ++bits) {
            Mask m = base_mask;
            for (std::size_t i = 0; i < k; ++i)
                if ((bits >> i) & 1) m = mask_or(m, atom_list[i]);
            candidates.insert(std::move(m));
        }
        std::vector<Mask> kept;
        for (const auto& m : candidates)
            if (phi_saturate(*table, m) == m) kept.push_back(m);
        component_masks.push_back(std::move(kept));
    }

    // Transport maps from each representative to the rest of its component.
    std::vector<Kit> out;
    std::vector<std::size_t> choice(reps.size(), 0);
    while (true) {
        std::vector<Mask> masks(static_cast<std::size_t>(g.object_count()));
        for (std::size_t c = 0; c < reps.size(); ++c) {
            ObjId r = reps[c];
            const Mask& m = component_masks[c][choice[c]];
            for (ObjId b = 0; b < g.object_count(); ++b) {
                if (g.component_rep(b) != r) continue;
                masks[static_cast<std::size_t>(b)] =
                    (b == r) ? m : transport_mask(g, r, m, g.hom(r, b).front());
            }
        }
        out.push_back(Kit::from_verified_masks(base, std::move(masks), Known::yes));

        // advance the mixed-radix counter
        std::size_t c = 0;
        while (c < reps.size() && ++choice[c] == component_masks[c].size()) {
            choice[c] = 0;
            ++c;
        }
        if (c == reps.size()) break;
    }
    return out;
}

Kit boolean_meet(const Kit& a, const Kit& b) {
    if (a.base() != b.base())
        fail(ErrorKind::BaseMismatch, "lattice operations need kits on the same groupoid");
    if (a.boolean_known() != Known::yes || b.boolean_known() != Known::yes)
        fail(ErrorKind::NotBoolean, "lattice operations are defined on Boolean kits");
    std::vector<Mask> masks;
    for (ObjId o = 0; o < a.base()->object_count(); ++o)
        masks.push_back(mask_and(a.union_mask(o), b.union_mask(o)));
    return Kit::from_verified_masks(a.base(), std::move(masks), Known::yes);
}

Kit boolean_join(const Kit& a, const Kit& b) {
    if (a.base() != b.base())
        fail(ErrorKind::BaseMismatch, "lattice operations need kits on the same groupoid");
    if (a.boolean_known() != Known::yes || b.boolean_known() != Known::yes)
        fail(ErrorKind::NotBoolean, "lattice operations are defined on Boolean kits");
    std::vector<Mask> masks;
    for (ObjId o = 0; o < a.base()->object_count(); ++o) {
        auto table = shared_endo_table(*a.base(), o);
        masks.push_back(phi_saturate(*table, mask_or(a.union_mask(o), b.union_mask(o))));
    }
    return Kit::from_verified_masks(a.base(), std::move(masks), Known::yes);
}

} // namespace kitbench
