#include "kitbench/presheaf.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <set>

#include "kitbench/errors.hpp"
#include "kitbench/util.hpp"

namespace kitbench {

namespace {

std::string describe_section(const Presheaf& x, SecId s) {
    return "section '" + x.section_name(s) + "' over object '" +
           x.base()->object_name(x.object_of(s)) + "'";
}

} // namespace

// --- Presheaf::Builder ------------------------------------------------------

Presheaf::Builder::Builder(GroupoidPtr base) : base_(std::move(base)) {
    if (!base_) fail(ErrorKind::UsageError, "presheaf needs a groupoid");
}

SecId Presheaf::Builder::add_section(ObjId at, std::string name) {
    if (at < 0 || at >= base_->object_count())
        fail(ErrorKind::UnknownObject, "section object " + std::to_string(at) + " out of range");
    obj_of_.push_back(at);
    if (name.empty()) name = "x" + std::to_string(obj_of_.size() - 1);
    names_.push_back(std::move(name));
    action_.emplace_back(static_cast<std::size_t>(base_->morphism_count()), -1);
    return static_cast<SecId>(obj_of_.size() - 1);
}

void Presheaf::Builder::set_action(SecId x, MorId along, SecId result) {
    if (x < 0 || static_cast<std::size_t>(x) >= obj_of_.size())
        fail(ErrorKind::UnknownElement, "action on unknown section");
    if (along < 0 || along >= base_->morphism_count())
        fail(ErrorKind::DanglingId, "action along unknown morphism " + std::to_string(along));
    if (result < 0 || static_cast<std::size_t>(result) >= obj_of_.size())
        fail(ErrorKind::UnknownElement, "action result is an unknown section");
    if (base_->tgt(along) != obj_of_[static_cast<std::size_t>(x)])
        fail(ErrorKind::TypeMismatch,
             "action along '" + base_->name_of(along) + "' does not apply to this section");
    if (base_->src(along) != obj_of_[static_cast<std::size_t>(result)])
        fail(ErrorKind::TypeMismatch,
             "action along '" + base_->name_of(along) + "' lands over the wrong object");
    SecId& slot = action_[static_cast<std::size_t>(x)][static_cast<std::size_t>(along)];
    if (slot != -1 && slot != result)
        fail(ErrorKind::TypeMismatch, "action set twice with different results");
    slot = result;
}

Presheaf Presheaf::Builder::build(bool validate) {
    const Groupoid& g = *base_;
    const int sections = static_cast<int>(obj_of_.size());
    if (validate) {
        for (SecId x = 0; x < sections; ++x) {
            const ObjId a = obj_of_[static_cast<std::size_t>(x)];
            for (MorId m = 0; m < g.morphism_count(); ++m) {
                if (g.tgt(m) != a) continue;
                if (action_[static_cast<std::size_t>(x)][static_cast<std::size_t>(m)] == -1)
                    fail(ErrorKind::UnknownElement,
                         "action along '" + g.name_of(m) + "' undefined on section " +
                             std::to_string(x));
            }
            if (action_[static_cast<std::size_t>(x)][static_cast<std::size_t>(g.identity(a))] != x)
                fail(ErrorKind::BadIdentity,
                     "identity acts nontrivially on section " + std::to_string(x));
        }
        for (SecId x = 0; x < sections; ++x) {
            const ObjId a = obj_of_[static_cast<std::size_t>(x)];
            for (MorId m = 0; m < g.morphism_count(); ++m) {
                if (g.tgt(m) != a) continue;
                const SecId y = action_[static_cast<std::size_t>(x)][static_cast<std::size_t>(m)];
                for (MorId n = 0; n < g.morphism_count(); ++n) {
                    if (g.tgt(n) != g.src(m)) continue;
                    const SecId one =
                        action_[static_cast<std::size_t>(y)][static_cast<std::size_t>(n)];
                    const SecId two = action_[static_cast<std::size_t>(x)][static_cast<std::size_t>(
                        g.compose(m, n))];
                    if (one != two)
                        fail(ErrorKind::TypeMismatch,
                             "action is not functorial on section " + std::to_string(x) +
                                 " along '" + g.name_of(m) + "' then '" + g.name_of(n) + "'");
                }
            }
        }
    }
    Presheaf out;
    out.base_ = base_;
    out.obj_of_ = std::move(obj_of_);
    out.names_ = std::move(names_);
    out.action_ = std::move(action_);
    out.by_obj_.assign(static_cast<std::size_t>(g.object_count()), {});
    for (SecId x = 0; x < sections; ++x)
        out.by_obj_[static_cast<std::size_t>(out.obj_of_[static_cast<std::size_t>(x)])].push_back(x);
    return out;
}

// --- Presheaf ---------------------------------------------------------------

std::size_t Presheaf::check(SecId x) const {
    if (x < 0 || static_cast<std::size_t>(x) >= obj_of_.size())
        fail(ErrorKind::UnknownElement, "unknown section " + std::to_string(x));
    return static_cast<std::size_t>(x);
}

const std::vector<SecId>& Presheaf::sections_at(ObjId a) const {
    if (a < 0 || a >= base_->object_count())
        fail(ErrorKind::UnknownObject, "object " + std::to_string(a) + " out of range");
    return by_obj_[static_cast<std::size_t>(a)];
}

SecId Presheaf::act(SecId x, MorId along) const {
    const std::size_t i = check(x);
    if (along < 0 || along >= base_->morphism_count())
        fail(ErrorKind::DanglingId, "action along unknown morphism " + std::to_string(along));
    if (base_->tgt(along) != obj_of_[i])
        fail(ErrorKind::TypeMismatch,
             "action along '" + base_->name_of(along) + "' does not apply to this section");
    return action_[i][static_cast<std::size_t>(along)];
}

// --- generators ---------------------------------------------------------------

namespace {

/// Quotient of the represented presheaf with the class representative
/// morphism (least id) remembered per section.
struct QuotBuilt {
    Presheaf ps;
    std::vector<MorId> rep;  // per section, a morphism a' -> anchor
};

QuotBuilt quot_build(const GroupoidPtr& g, const Subgroup& by) {
    if (!is_subgroup(*g, by))
        fail(ErrorKind::NotSubgroup, "quotient needs a subgroup of an endomorphism group");
    const ObjId anchor = by.base_object;
    Presheaf::Builder b(g);
    std::vector<MorId> reps;
    std::vector<SecId> class_of(static_cast<std::size_t>(g->morphism_count()), -1);
    for (ObjId a = 0; a < g->object_count(); ++a) {
        for (const MorId gamma : g->hom(a, anchor)) {
            MorId least = gamma;
            for (const MorId h : by.elements)
                least = std::min(least, g->compose(h, gamma));
            if (least == gamma) {
                const SecId s = b.add_section(a, "[" + g->name_of(gamma) + "]");
                reps.push_back(gamma);
                class_of[static_cast<std::size_t>(gamma)] = s;
            }
        }
    }
    // second pass: every morphism into the anchor knows its class
    for (ObjId a = 0; a < g->object_count(); ++a) {
        for (const MorId gamma : g->hom(a, anchor)) {
            if (class_of[static_cast<std::size_t>(gamma)] != -1) continue;
            MorId least = gamma;
            for (const MorId h : by.elements)
                least = std::min(least, g->compose(h, gamma));
            class_of[static_cast<std::size_t>(gamma)] = class_of[static_cast<std::size_t>(least)];
        }
    }
    for (SecId s = 0; s < static_cast<SecId>(reps.size()); ++s) {
        const MorId gamma = reps[static_cast<std::size_t>(s)];
        const ObjId a = g->src(gamma);
        for (MorId m = 0; m < g->morphism_count(); ++m) {
            if (g->tgt(m) != a) continue;
            b.set_action(s, m, class_of[static_cast<std::size_t>(g->compose(gamma, m))]);
        }
    }
    return {b.build(true), std::move(reps)};
}

} // namespace

Presheaf representable_presheaf(const GroupoidPtr& g, ObjId a) {
    if (!g) fail(ErrorKind::UsageError, "presheaf needs a groupoid");
    if (a < 0 || a >= g->object_count())
        fail(ErrorKind::UnknownObject, "object " + std::to_string(a) + " out of range");
    Presheaf::Builder b(g);
    std::vector<SecId> of_mor(static_cast<std::size_t>(g->morphism_count()), -1);
    for (ObjId from = 0; from < g->object_count(); ++from)
        for (const MorId gamma : g->hom(from, a))
            of_mor[static_cast<std::size_t>(gamma)] = b.add_section(from, g->name_of(gamma));
    for (ObjId from = 0; from < g->object_count(); ++from)
        for (const MorId gamma : g->hom(from, a))
            for (MorId m = 0; m < g->morphism_count(); ++m) {
                if (g->tgt(m) != from) continue;
                b.set_action(of_mor[static_cast<std::size_t>(gamma)], m,
                             of_mor[static_cast<std::size_t>(g->compose(gamma, m))]);
            }
    return b.build(true);
}

Presheaf quot_representable(const GroupoidPtr& g, const Subgroup& by) {
    if (!g) fail(ErrorKind::UsageError, "presheaf needs a groupoid");
    return quot_build(g, by).ps;
}

Presheaf one_point_presheaf(const GroupoidPtr& g) {
    if (!g) fail(ErrorKind::UsageError, "presheaf needs a groupoid");
    Presheaf::Builder b(g);
    std::vector<SecId> pt;
    pt.reserve(static_cast<std::size_t>(g->object_count()));
    for (ObjId a = 0; a < g->object_count(); ++a)
        pt.push_back(b.add_section(a, "pt(" + g->object_name(a) + ")"));
    for (MorId m = 0; m < g->morphism_count(); ++m)
        b.set_action(pt[static_cast<std::size_t>(g->tgt(m))], m,
                     pt[static_cast<std::size_t>(g->src(m))]);
    return b.build(false);
}

Presheaf empty_presheaf(const GroupoidPtr& g) {
    if (!g) fail(ErrorKind::UsageError, "presheaf needs a groupoid");
    return Presheaf::Builder(g).build(false);
}

Presheaf coproduct_presheaf(const Presheaf& left, const Presheaf& right) {
    if (left.base() != right.base())
        fail(ErrorKind::BaseMismatch, "presheaf coproduct needs a shared base");
    const GroupoidPtr& g = left.base();
    Presheaf::Builder b(g);
    for (SecId s = 0; s < left.section_count(); ++s)
        b.add_section(left.object_of(s), left.section_name(s));
    const SecId off = left.section_count();
    for (SecId s = 0; s < right.section_count(); ++s)
        b.add_section(right.object_of(s), right.section_name(s));
    for (SecId s = 0; s < left.section_count(); ++s)
        for (MorId m = 0; m < g->morphism_count(); ++m) {
            if (g->tgt(m) != left.object_of(s)) continue;
            b.set_action(s, m, left.act(s, m));
        }
    for (SecId s = 0; s < right.section_count(); ++s)
        for (MorId m = 0; m < g->morphism_count(); ++m) {
            if (g->tgt(m) != right.object_of(s)) continue;
            b.set_action(off + s, m, off + right.act(s, m));
        }
    return b.build(false);
}

// --- stabilizers ----------------------------------------------------------------

Subgroup stabilizer(const Presheaf& x, SecId s) {
    const ObjId a = x.object_of(s);
    Subgroup out;
    out.base_object = a;
    for (const MorId e : x.base()->endos(a))
        if (x.act(s, e) == s) out.elements.push_back(e);
    return out;
}

PresheafStabilization is_stabilized_presheaf(const Presheaf& x, const Kit& k) {
    if (x.base() != k.base())
        fail(ErrorKind::BaseMismatch, "kit must live on the presheaf's base");
    PresheafStabilization report;
    for (SecId s = 0; s < x.section_count(); ++s) {
        Subgroup st = stabilizer(x, s);
        if (!k.family_member(st)) {
            report.stabilized = false;
            report.witness = s;
            report.detail = "stabilizer of " + describe_section(x, s) +
                            " (order " + std::to_string(st.elements.size()) +
                            ") escapes the kit";
            report.stab = std::move(st);
            return report;
        }
    }
    return report;
}

Kit stab_of_family(const GroupoidPtr& base, const std::vector<Presheaf>& family) {
    if (!base) fail(ErrorKind::UsageError, "kit needs a groupoid");
    std::vector<std::vector<Subgroup>> by_obj(static_cast<std::size_t>(base->object_count()));
    for (const Presheaf& x : family) {
        if (x.base() != base)
            fail(ErrorKind::BaseMismatch, "every presheaf must live on the shared base");
        for (SecId s = 0; s < x.section_count(); ++s) {
            Subgroup st = stabilizer(x, s);
            auto& bucket = by_obj[static_cast<std::size_t>(st.base_object)];
            const auto same = [&st](const Subgroup& h) { return h.elements == st.elements; };
            if (std::none_of(bucket.begin(), bucket.end(), same)) bucket.push_back(std::move(st));
        }
    }
    return Kit::from_family(base, std::move(by_obj));
}

// --- orbit decomposition ----------------------------------------------------------

Decomposition decompose(const Presheaf& x, const Kit& k) {
    const PresheafStabilization gate = is_stabilized_presheaf(x, k);
    if (!gate.stabilized) fail(ErrorKind::NotStabilized, gate.detail);
    const GroupoidPtr& g = x.base();

    Decomposition out{{}, empty_presheaf(g), {}};
    std::vector<std::pair<SecId, Subgroup>> orbit_reps;  // alongside out.summands
    for (ObjId c = 0; c < g->object_count(); ++c) {
        if (g->component_rep(c) != c) continue;
        std::vector<char> seen(x.sections_at(c).size(), 0);
        const auto& bucket = x.sections_at(c);
        for (std::size_t i = 0; i < bucket.size(); ++i) {
            if (seen[i]) continue;
            const SecId rep = bucket[i];
            for (const MorId e : g->endos(c)) {
                const SecId moved = x.act(rep, e);
                const auto at = std::lower_bound(bucket.begin(), bucket.end(), moved);
                seen[static_cast<std::size_t>(at - bucket.begin())] = 1;
            }
            Subgroup st = stabilizer(x, rep);
            out.summands.push_back({c, st});
            orbit_reps.emplace_back(rep, std::move(st));
        }
    }

    Presheaf::Builder sum(g);
    std::vector<SecId> into;
    for (std::size_t i = 0; i < out.summands.size(); ++i) {
        const QuotBuilt piece = quot_build(g, out.summands[i].group);
        const SecId off = static_cast<SecId>(into.size());
        for (SecId s = 0; s < piece.ps.section_count(); ++s) {
            sum.add_section(piece.ps.object_of(s), piece.ps.section_name(s));
            into.push_back(x.act(orbit_reps[i].first, piece.rep[static_cast<std::size_t>(s)]));
        }
        for (SecId s = 0; s < piece.ps.section_count(); ++s)
            for (MorId m = 0; m < g->morphism_count(); ++m) {
                if (g->tgt(m) != piece.ps.object_of(s)) continue;
                sum.set_action(off + s, m, off + piece.ps.act(s, m));
            }
    }
    out.sum = sum.build(false);
    out.into = std::move(into);

    // defensive sweep: the explicit map must be a natural bijection
    if (out.sum.section_count() != x.section_count())
        fail(ErrorKind::TypeMismatch, "decomposition lost or duplicated sections");
    std::vector<char> hit(static_cast<std::size_t>(x.section_count()), 0);
    for (const SecId s : out.into) {
        if (hit[static_cast<std::size_t>(s)])
            fail(ErrorKind::TypeMismatch, "decomposition hit a section twice");
        hit[static_cast<std::size_t>(s)] = 1;
    }
    validate_presheaf_map(out.sum, x, out.into);
    return out;
}

// --- orthogonality ----------------------------------------------------------------

FreePairReport presheaf_orthogonal(const Presheaf& x, const Presheaf& y_op) {
    const GroupoidPtr op = opposite(x.base());
    if (y_op.base() != op)
        fail(ErrorKind::BaseMismatch, "the second presheaf must live on the opposite base");
    const Groupoid& g = *x.base();
    FreePairReport report;
    for (ObjId a = 0; a < g.object_count(); ++a) {
        for (const MorId e : g.endos(a)) {
            if (e == g.identity(a)) continue;
            const MorId back = g.inverse(e);
            for (const SecId s : x.sections_at(a)) {
                if (x.act(s, e) != s) continue;
                for (const SecId t : y_op.sections_at(a)) {
                    if (y_op.act(t, back) != t) continue;
                    report.orthogonal = false;
                    report.left = s;
                    report.right = t;
                    report.fixing = e;
                    report.detail = "'" + g.name_of(e) + "' fixes the pair (" +
                                    x.section_name(s) + ", " + y_op.section_name(t) + ")";
                    return report;
                }
            }
        }
    }
    return report;
}

// --- profunctor application ---------------------------------------------------------

Presheaf apply_profunctor(const Profunctor& p, const Presheaf& x) {
    if (x.base() != p.source())
        fail(ErrorKind::BaseMismatch, "the presheaf must live on the profunctor's source");
    const Groupoid& src = *p.source();
    const Groupoid& tgt = *p.target();

    // pair (profunctor element, section over its source object)
    std::vector<int> offset(static_cast<std::size_t>(p.element_count()) + 1, 0);
    for (ElemId q = 0; q < p.element_count(); ++q)
        offset[static_cast<std::size_t>(q) + 1] =
            offset[static_cast<std::size_t>(q)] +
            static_cast<int>(x.sections_at(p.src_obj(q)).size());
    const int total = offset[static_cast<std::size_t>(p.element_count())];

    std::vector<int> pos_at(static_cast<std::size_t>(x.section_count()), 0);
    for (ObjId a = 0; a < src.object_count(); ++a) {
        const auto& bucket = x.sections_at(a);
        for (std::size_t i = 0; i < bucket.size(); ++i)
            pos_at[static_cast<std::size_t>(bucket[i])] = static_cast<int>(i);
    }
    const auto pair_index = [&](ElemId q, SecId s) {
        return offset[static_cast<std::size_t>(q)] + pos_at[static_cast<std::size_t>(s)];
    };

    UnionFind uf(total);
    for (ElemId q = 0; q < p.element_count(); ++q) {
        const ObjId a = p.src_obj(q);
        for (MorId alpha = 0; alpha < src.morphism_count(); ++alpha) {
            if (src.src(alpha) != a || alpha == src.identity(a)) continue;
            const ElemId moved = p.act_left(alpha, q);
            for (const SecId s : x.sections_at(src.tgt(alpha)))
                uf.unite(pair_index(moved, s), pair_index(q, x.act(s, alpha)));
        }
    }

    std::vector<SecId> class_of(static_cast<std::size_t>(total), -1);
    std::vector<std::pair<ElemId, SecId>> rep_pair;
    Presheaf::Builder b(p.target());
    for (ElemId q = 0; q < p.element_count(); ++q)
        for (const SecId s : x.sections_at(p.src_obj(q))) {
            const int i = pair_index(q, s);
            const int root = uf.find(i);
            if (class_of[static_cast<std::size_t>(root)] == -1) {
                class_of[static_cast<std::size_t>(root)] = b.add_section(
                    p.tgt_obj(q), "(" + p.name(q) + "|" + x.section_name(s) + ")");
                rep_pair.emplace_back(q, s);
            }
            class_of[static_cast<std::size_t>(i)] = class_of[static_cast<std::size_t>(root)];
        }

    for (SecId c = 0; c < static_cast<SecId>(rep_pair.size()); ++c) {
        const auto [q, s] = rep_pair[static_cast<std::size_t>(c)];
        const ObjId bobj = p.tgt_obj(q);
        for (MorId m = 0; m < tgt.morphism_count(); ++m) {
            if (tgt.tgt(m) != bobj) continue;
            const int moved = pair_index(p.act_right(q, m), s);
            b.set_action(c, m, class_of[static_cast<std::size_t>(uf.find(moved))]);
        }
    }
    return b.build(true);
}

Presheaf apply_stabilized(const Profunctor& p, const Presheaf& x,
                          const Kit& source_kit, const Kit& target_kit) {
    const StabilizationReport on_p = is_stabilized(p, source_kit, target_kit);
    if (!on_p.stabilized)
        fail(ErrorKind::NotStabilized, "the profunctor is not stabilized: " + on_p.detail);
    const PresheafStabilization on_x = is_stabilized_presheaf(x, source_kit);
    if (!on_x.stabilized)
        fail(ErrorKind::NotStabilized, "the presheaf is not stabilized: " + on_x.detail);
    return apply_profunctor(p, x);
}

// --- maps between presheaves -----------------------------------------------------------

void validate_presheaf_map(const Presheaf& from, const Presheaf& to,
                           const std::vector<SecId>& component) {
    if (from.base() != to.base())
        fail(ErrorKind::BaseMismatch, "presheaf map needs a shared base");
    if (component.size() != static_cast<std::size_t>(from.section_count()))
        fail(ErrorKind::TypeMismatch, "one image per section expected");
    const Groupoid& g = *from.base();
    for (SecId s = 0; s < from.section_count(); ++s) {
        const SecId image = component[static_cast<std::size_t>(s)];
        if (image < 0 || image >= to.section_count())
            fail(ErrorKind::UnknownElement, "image of section " + std::to_string(s) + " unknown");
        if (to.object_of(image) != from.object_of(s))
            fail(ErrorKind::TypeMismatch,
                 "image of section " + std::to_string(s) + " lives over the wrong object");
    }
    for (SecId s = 0; s < from.section_count(); ++s)
        for (MorId m = 0; m < g.morphism_count(); ++m) {
            if (g.tgt(m) != from.object_of(s)) continue;
            if (component[static_cast<std::size_t>(from.act(s, m))] !=
                to.act(component[static_cast<std::size_t>(s)], m))
                fail(ErrorKind::TypeMismatch,
                     "map is not natural on section " + std::to_string(s) + " along '" +
                         g.name_of(m) + "'");
        }
}

bool pointwise_surjective(const Presheaf& to, const std::vector<SecId>& component) {
    std::vector<char> hit(static_cast<std::size_t>(to.section_count()), 0);
    for (const SecId s : component) hit[static_cast<std::size_t>(s)] = 1;
    return std::all_of(hit.begin(), hit.end(), [](char c) { return c != 0; });
}

std::vector<std::vector<SecId>> enumerate_presheaf_maps(const Presheaf& from,
                                                        const Presheaf& to,
                                                        std::size_t limit) {
    if (from.base() != to.base())
        fail(ErrorKind::BaseMismatch, "presheaf map needs a shared base");
    const Groupoid& g = *from.base();

    UnionFind orbit(from.section_count());
    for (SecId s = 0; s < from.section_count(); ++s)
        for (MorId m = 0; m < g.morphism_count(); ++m) {
            if (g.tgt(m) != from.object_of(s)) continue;
            orbit.unite(s, from.act(s, m));
        }
    std::vector<SecId> reps;
    for (SecId s = 0; s < from.section_count(); ++s)
        if (orbit.find(s) == s) reps.push_back(s);

    // candidate images: same object, no stabilizer is lost
    std::vector<std::vector<SecId>> candidates;
    std::size_t count = 1;
    for (const SecId r : reps) {
        const Subgroup need = stabilizer(from, r);
        std::vector<SecId> fit;
        for (const SecId c : to.sections_at(from.object_of(r))) {
            const Subgroup have = stabilizer(to, c);
            if (std::includes(have.elements.begin(), have.elements.end(), need.elements.begin(),
                              need.elements.end()))
                fit.push_back(c);
        }
        if (fit.empty()) count = 0;
        else if (count > limit / fit.size())
            fail(ErrorKind::SearchSpaceTooLarge,
                 "more than " + std::to_string(limit) + " natural maps");
        else count *= fit.size();
        candidates.push_back(std::move(fit));
    }
    if (count == 0) return {};

    // spread one orbit representative's image over its whole orbit
    const auto propagate = [&](std::vector<SecId>& component, SecId r, SecId image) {
        component[static_cast<std::size_t>(r)] = image;
        std::queue<SecId> work;
        work.push(r);
        while (!work.empty()) {
            const SecId s = work.front();
            work.pop();
            for (MorId m = 0; m < g.morphism_count(); ++m) {
                if (g.tgt(m) != from.object_of(s)) continue;
                const SecId moved = from.act(s, m);
                const SecId target = to.act(component[static_cast<std::size_t>(s)], m);
                if (component[static_cast<std::size_t>(moved)] == -1) {
                    component[static_cast<std::size_t>(moved)] = target;
                    work.push(moved);
                }
            }
        }
    };

    std::vector<std::vector<SecId>> out;
    std::vector<std::size_t> digit(reps.size(), 0);
    while (true) {
        std::vector<SecId> component(static_cast<std::size_t>(from.section_count()), -1);
        for (std::size_t i = 0; i < reps.size(); ++i)
            propagate(component, reps[i], candidates[i][digit[i]]);
        out.push_back(std::move(component));
        std::size_t i = 0;
        while (i < reps.size() && ++digit[i] == candidates[i].size()) digit[i++] = 0;
        if (i == reps.size()) break;
    }
    return out;
}

bool presheaves_isomorphic(const Presheaf& a, const Presheaf& b) {
    if (a.base() != b.base())
        fail(ErrorKind::BaseMismatch, "isomorphism test needs a shared base");
    const Kit all = Kit::maximal(a.base());
    Decomposition da = decompose(a, all);
    Decomposition db = decompose(b, all);
    if (da.summands.size() != db.summands.size()) return false;
    const Groupoid& g = *a.base();
    std::vector<char> used(db.summands.size(), 0);
    for (const QuotSummand& left : da.summands) {
        bool matched = false;
        for (std::size_t j = 0; j < db.summands.size() && !matched; ++j) {
            if (used[j]) continue;
            const QuotSummand& right = db.summands[j];
            if (right.anchor != left.anchor) continue;
            if (right.group.elements.size() != left.group.elements.size()) continue;
            for (const MorId sigma : g.endos(left.anchor)) {
                if (conjugate_subgroup(g, left.group, sigma).elements == right.group.elements) {
                    matched = true;
                    used[j] = 1;
                    break;
                }
            }
        }
        if (!matched) return false;
    }
    return true;
}

} // namespace kitbench
