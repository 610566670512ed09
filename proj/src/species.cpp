#include "kitbench/species.hpp"

#include <algorithm>
#include <set>

#include "kitbench/errors.hpp"
#include "kitbench/util.hpp"

namespace kitbench {

namespace {

/// Per-position section lists of an argument presheaf at a word's letters,
/// with the size of the full tuple block (saturated at `cap` so callers can
/// turn saturation into a budget failure without overflowing).
struct TupleSpace {
    std::vector<const std::vector<SecId>*> sections;
    std::size_t block = 1;
};

TupleSpace tuple_space(const Presheaf& x, const SymObjectV& word, std::size_t cap) {
    TupleSpace out;
    out.sections.reserve(word.items.size());
    for (ObjId a : word.items) {
        const auto& list = x.sections_at(a);
        out.sections.push_back(&list);
        if (list.empty())
            out.block = 0;
        else if (out.block > cap / list.size())
            out.block = cap;
        else
            out.block *= list.size();
    }
    return out;
}

std::vector<SecId> tuple_at(const TupleSpace& space, std::size_t rank) {
    std::vector<SecId> out(space.sections.size());
    for (int i = static_cast<int>(space.sections.size()) - 1; i >= 0; --i) {
        const auto& list = *space.sections[static_cast<std::size_t>(i)];
        out[static_cast<std::size_t>(i)] = list[rank % list.size()];
        rank /= list.size();
    }
    return out;
}

std::size_t tuple_rank(const TupleSpace& space, const std::vector<SecId>& tuple) {
    std::size_t rank = 0;
    for (std::size_t i = 0; i < space.sections.size(); ++i) {
        const auto& list = *space.sections[i];
        const auto it = std::lower_bound(list.begin(), list.end(), tuple[i]);
        rank = rank * list.size() + static_cast<std::size_t>(it - list.begin());
    }
    return rank;
}

std::string section_text(const Presheaf& x, SecId s) {
    const std::string& name = x.section_name(s);
    return name.empty() ? std::to_string(s) : name;
}

/// The tuple of a dense pair index, read back from the evaluation's argument.
/// Loop-count bound for lifting a kit to an already-materialized carrier:
/// the work is bounded by the carrier itself, so the guard only needs to
/// stay above its largest endomorphism group.
int carrier_endo_cap(const SymGroupoid& sym) {
    int cap = 48;
    for (ObjId u = 0; u < sym.carrier->object_count(); ++u)
        cap = std::max(cap, static_cast<int>(sym.carrier->endos(u).size()));
    return cap;
}

std::vector<SecId> pair_tuple(const SpeciesEval& ev, ElemId q, std::size_t rank) {
    const SymObjectV& word = ev.sym->object_view(ev.elem_word[static_cast<std::size_t>(q)]);
    std::vector<SecId> out(word.items.size());
    for (int i = static_cast<int>(word.items.size()) - 1; i >= 0; --i) {
        const auto& list = ev.argument.sections_at(word.items[static_cast<std::size_t>(i)]);
        out[static_cast<std::size_t>(i)] = list[rank % list.size()];
        rank /= list.size();
    }
    return out;
}

} // namespace

// --- wiring ----------------------------------------------------------------------

Species make_species(Profunctor prof, const SymGroupoidPtr& sym, const Kit& base_kit,
                     const Kit& target_kit, int endo_cap) {
    if (!sym) fail(ErrorKind::BaseMismatch, "a species needs its word groupoid");
    if (prof.source() != sym->carrier)
        fail(ErrorKind::BaseMismatch, "the profunctor must run from the word carrier");
    if (base_kit.base() != sym->base)
        fail(ErrorKind::BaseMismatch, "the base kit must live on the word groupoid's base");
    if (target_kit.base() != prof.target())
        fail(ErrorKind::BaseMismatch, "the target kit must live on the profunctor's target");
    Kit bang = bang_kit(sym, base_kit, endo_cap);
    const StabilizationReport report = is_stabilized(prof, bang, target_kit);
    return Species{std::move(prof), sym, base_kit, std::move(bang), target_kit,
                   report.stabilized};
}

Species as_species(const SetSpecies& f, const SymGroupoidPtr& sym) {
    if (!sym || sym->base->object_count() != 1 || sym->base->morphism_count() != 1)
        fail(ErrorKind::BaseMismatch,
             "set species present over a one-object one-morphism base");
    if (sym->max_length < f.max_arity())
        fail(ErrorKind::BudgetExceeded,
             "the word groupoid is truncated below the species' top arity");
    const GroupoidPtr& base = sym->base;
    const GroupoidPtr& carrier = sym->carrier;

    std::vector<ObjId> word_obj(static_cast<std::size_t>(f.max_arity()) + 1);
    std::vector<ElemId> first(static_cast<std::size_t>(f.max_arity()) + 1);
    Profunctor::Builder b(carrier, base);
    ElemId next = 0;
    for (int n = 0; n <= f.max_arity(); ++n) {
        word_obj[static_cast<std::size_t>(n)] =
            sym->object_id(SymObjectV{std::vector<ObjId>(static_cast<std::size_t>(n), 0)});
        first[static_cast<std::size_t>(n)] = next;
        for (int x = 0; x < f.size(n); ++x) {
            b.add_element(0, word_obj[static_cast<std::size_t>(n)], f.element_name(n, x));
            ++next;
        }
    }
    for (int n = 0; n <= f.max_arity(); ++n) {
        if (f.size(n) == 0) continue;
        const auto& perms = f.permutations(n);
        for (MorId m : carrier->endos(word_obj[static_cast<std::size_t>(n)])) {
            const SymMorphismV& view = sym->morphism_view(m);
            const auto it = std::lower_bound(perms.begin(), perms.end(), view.perm);
            const int rank = static_cast<int>(it - perms.begin());
            for (int x = 0; x < f.size(n); ++x)
                b.set_left(m, first[static_cast<std::size_t>(n)] + x,
                           first[static_cast<std::size_t>(n)] + f.act_rank(n, rank, x));
        }
        const MorId id = base->identity(0);
        for (int x = 0; x < f.size(n); ++x)
            b.set_right(first[static_cast<std::size_t>(n)] + x, id,
                        first[static_cast<std::size_t>(n)] + x);
    }
    const Kit k = Kit::trivial(base);
    return make_species(b.build(true), sym, k, k, carrier_endo_cap(*sym));
}

KSpeciesReport is_K_species(const SetSpecies& f, const SymGroupoidPtr& sym, const Kit& k) {
    if (!sym || sym->base->object_count() != 1 || sym->base->morphism_count() != 1)
        fail(ErrorKind::BaseMismatch,
             "set species present over a one-object one-morphism base");
    if (k.base() != sym->carrier)
        fail(ErrorKind::BaseMismatch, "the kit must live on the word carrier");
    if (sym->max_length < f.max_arity())
        fail(ErrorKind::BudgetExceeded,
             "the word groupoid is truncated below the species' top arity");
    for (int n = 0; n <= f.max_arity(); ++n) {
        if (f.size(n) == 0) continue;
        const ObjId w =
            sym->object_id(SymObjectV{std::vector<ObjId>(static_cast<std::size_t>(n), 0)});
        const auto& perms = f.permutations(n);
        for (int x = 0; x < f.size(n); ++x) {
            Subgroup stab;
            stab.base_object = w;
            for (MorId m : sym->carrier->endos(w)) {
                const SymMorphismV& view = sym->morphism_view(m);
                const auto it = std::lower_bound(perms.begin(), perms.end(), view.perm);
                if (f.act_rank(n, static_cast<int>(it - perms.begin()), x) == x)
                    stab.elements.push_back(m);
            }
            if (!k.family_member(stab))
                return {false, n, x,
                        "the stabilizer of element " + std::to_string(x) + " at arity " +
                            std::to_string(n) + " (order " + std::to_string(stab.order()) +
                            ") escapes the kit"};
        }
    }
    return {};
}

// --- sums of representables over a word ---------------------------------------------

SecId WordSum::section(int position, MorId gamma) const {
    if (position < 0 || position >= static_cast<int>(index.size()))
        fail(ErrorKind::IndexOutOfRange,
             "position " + std::to_string(position) + " outside the word");
    const auto& bucket = index[static_cast<std::size_t>(position)];
    const auto it = bucket.find(gamma);
    if (it == bucket.end())
        fail(ErrorKind::UnknownElement,
             "no summand section at position " + std::to_string(position) +
                 " for that morphism");
    return it->second;
}

WordSum word_sum(const GroupoidPtr& base, const SymObjectV& u) {
    WordSum out;
    out.index.resize(u.items.size());
    Presheaf::Builder b(base);
    for (int i = 0; i < u.length(); ++i) {
        const ObjId letter = u.items[static_cast<std::size_t>(i)];
        for (ObjId a = 0; a < base->object_count(); ++a)
            for (MorId gamma : base->hom(a, letter)) {
                const SecId s =
                    b.add_section(a, std::to_string(i) + ":" + base->name_of(gamma));
                out.position_of.push_back(i);
                out.morphism_of.push_back(gamma);
                out.index[static_cast<std::size_t>(i)][gamma] = s;
            }
    }
    for (SecId s = 0; s < static_cast<SecId>(out.position_of.size()); ++s) {
        const int i = out.position_of[static_cast<std::size_t>(s)];
        const MorId gamma = out.morphism_of[static_cast<std::size_t>(s)];
        const ObjId at = base->src(gamma);
        for (ObjId a2 = 0; a2 < base->object_count(); ++a2)
            for (MorId m : base->hom(a2, at))
                b.set_action(s, m,
                             out.index[static_cast<std::size_t>(i)].at(base->compose(gamma, m)));
    }
    out.sum = b.build(true);
    return out;
}

std::vector<SecId> word_sum_map(const WordSum& from, const WordSum& to,
                                const SymMorphismV& alpha) {
    const GroupoidPtr& base = from.sum.base();
    if (static_cast<int>(from.index.size()) != alpha.length() ||
        to.sum.base() != base)
        fail(ErrorKind::TypeMismatch, "the word morphism does not fit the two sums");
    std::vector<SecId> out(from.position_of.size());
    for (SecId s = 0; s < static_cast<SecId>(out.size()); ++s) {
        const int i = from.position_of[static_cast<std::size_t>(s)];
        out[static_cast<std::size_t>(s)] =
            to.section(alpha.perm[static_cast<std::size_t>(i)],
                       base->compose(alpha.parts[static_cast<std::size_t>(i)],
                                     from.morphism_of[static_cast<std::size_t>(s)]));
    }
    validate_presheaf_map(from.sum, to.sum, out);
    return out;
}

// --- evaluation ----------------------------------------------------------------------

SecId SpeciesEval::class_of(ElemId p, const std::vector<SecId>& tuple) const {
    if (p < 0 || p >= static_cast<ElemId>(elem_word.size()))
        fail(ErrorKind::UnknownElement, "no element " + std::to_string(p) + " to look up");
    const SymObjectV& word = sym->object_view(elem_word[static_cast<std::size_t>(p)]);
    if (tuple.size() != word.items.size())
        fail(ErrorKind::TypeMismatch, "tuple length does not match the element's word");
    std::size_t rank = 0;
    for (std::size_t i = 0; i < tuple.size(); ++i) {
        const auto& list = argument.sections_at(word.items[i]);
        const auto it = std::lower_bound(list.begin(), list.end(), tuple[i]);
        if (it == list.end() || *it != tuple[i])
            fail(ErrorKind::UnknownElement,
                 "tuple entry " + std::to_string(i) + " is not a section at the word's letter");
        rank = rank * list.size() + static_cast<std::size_t>(it - list.begin());
    }
    return pair_class[offset[static_cast<std::size_t>(p)] + rank];
}

SpeciesEval species_eval(const Species& s, const Presheaf& x, std::size_t budget) {
    if (x.base() != s.sym->base)
        fail(ErrorKind::BaseMismatch, "the argument must live on the species' base");
    const PresheafStabilization stab = is_stabilized_presheaf(x, s.base_kit);
    if (!stab.stabilized)
        fail(ErrorKind::NotStabilized, "the argument is not stabilized: " + stab.detail);

    const Profunctor& prof = s.prof;
    const GroupoidPtr& carrier = s.sym->carrier;
    const int elems = prof.element_count();
    const std::size_t cap = budget + 1;

    std::vector<TupleSpace> space;
    space.reserve(static_cast<std::size_t>(carrier->object_count()));
    for (ObjId u = 0; u < carrier->object_count(); ++u)
        space.push_back(tuple_space(x, s.sym->object_view(u), cap));

    std::vector<std::size_t> offset(static_cast<std::size_t>(elems) + 1, 0);
    for (ElemId p = 0; p < elems; ++p) {
        offset[static_cast<std::size_t>(p) + 1] =
            offset[static_cast<std::size_t>(p)] +
            space[static_cast<std::size_t>(prof.src_obj(p))].block;
        if (offset[static_cast<std::size_t>(p) + 1] > budget)
            fail(ErrorKind::BudgetExceeded, "species evaluation needs more than " +
                                                std::to_string(budget) + " pairs");
    }
    const std::size_t total = offset[static_cast<std::size_t>(elems)];

    UnionFind uf(static_cast<int>(total));
    for (MorId m = 0; m < carrier->morphism_count(); ++m) {
        const ObjId a = carrier->src(m);
        if (m == carrier->identity(a)) continue;
        const ObjId a2 = carrier->tgt(m);
        const TupleSpace& target_space = space[static_cast<std::size_t>(a2)];
        if (target_space.block == 0) continue;
        const SymMorphismV& view = s.sym->morphism_view(m);
        std::vector<SecId> pulled(view.perm.size());
        for (ElemId p : prof.elements_by_source(a)) {
            const ElemId q = prof.act_left(m, p);
            for (std::size_t r = 0; r < target_space.block; ++r) {
                const std::vector<SecId> ybar = tuple_at(target_space, r);
                for (std::size_t i = 0; i < pulled.size(); ++i)
                    pulled[i] = x.act(ybar[static_cast<std::size_t>(view.perm[i])],
                                      view.parts[i]);
                uf.unite(static_cast<int>(offset[static_cast<std::size_t>(q)] + r),
                         static_cast<int>(offset[static_cast<std::size_t>(p)] +
                                          tuple_rank(space[static_cast<std::size_t>(a)],
                                                     pulled)));
            }
        }
    }

    SpeciesEval out;
    out.argument = x;
    out.sym = s.sym;
    out.elem_word.resize(static_cast<std::size_t>(elems));
    for (ElemId p = 0; p < elems; ++p)
        out.elem_word[static_cast<std::size_t>(p)] = prof.src_obj(p);
    out.offset = offset;
    out.pair_class.assign(total, -1);

    Presheaf::Builder rb(prof.target());
    std::vector<SecId> class_of_root(total, -1);
    for (ElemId p = 0; p < elems; ++p) {
        const TupleSpace& sp = space[static_cast<std::size_t>(prof.src_obj(p))];
        for (std::size_t r = 0; r < sp.block; ++r) {
            const std::size_t pair = offset[static_cast<std::size_t>(p)] + r;
            const int root = uf.find(static_cast<int>(pair));
            SecId c = class_of_root[static_cast<std::size_t>(root)];
            if (c == -1) {
                std::vector<SecId> tuple = tuple_at(sp, r);
                std::string name =
                    "(" + (prof.name(p).empty() ? std::to_string(p) : prof.name(p)) + "|";
                for (std::size_t i = 0; i < tuple.size(); ++i) {
                    if (i != 0) name += ',';
                    name += section_text(x, tuple[i]);
                }
                name += ')';
                c = rb.add_section(prof.tgt_obj(p), std::move(name));
                class_of_root[static_cast<std::size_t>(root)] = c;
                out.rep_elem.push_back(p);
                out.rep_tuple.push_back(std::move(tuple));
            }
            out.pair_class[pair] = c;
        }
    }

    const GroupoidPtr& target = prof.target();
    for (SecId c = 0; c < static_cast<SecId>(out.rep_elem.size()); ++c) {
        const ElemId q = out.rep_elem[static_cast<std::size_t>(c)];
        const std::size_t r =
            tuple_rank(space[static_cast<std::size_t>(prof.src_obj(q))],
                       out.rep_tuple[static_cast<std::size_t>(c)]);
        const ObjId b = prof.tgt_obj(q);
        for (ObjId b2 = 0; b2 < target->object_count(); ++b2)
            for (MorId beta : target->hom(b2, b)) {
                const ElemId q2 = prof.act_right(q, beta);
                rb.set_action(c, beta,
                              out.pair_class[offset[static_cast<std::size_t>(q2)] + r]);
            }
    }
    out.result = rb.build(true);
    return out;
}

std::vector<SecId> eval_transport(const SpeciesEval& from, const SpeciesEval& to,
                                  const std::vector<SecId>& component) {
    validate_presheaf_map(from.argument, to.argument, component);
    std::vector<SecId> out(from.rep_elem.size());
    std::vector<SecId> mapped;
    for (SecId c = 0; c < static_cast<SecId>(out.size()); ++c) {
        const auto& tuple = from.rep_tuple[static_cast<std::size_t>(c)];
        mapped.resize(tuple.size());
        for (std::size_t i = 0; i < tuple.size(); ++i)
            mapped[i] = component[static_cast<std::size_t>(tuple[i])];
        out[static_cast<std::size_t>(c)] =
            to.class_of(from.rep_elem[static_cast<std::size_t>(c)], mapped);
    }
    validate_presheaf_map(from.result, to.result, out);
    return out;
}

void validate_element_family(const Profunctor& p, const Profunctor& q,
                             const std::vector<ElemId>& family) {
    if (p.source() != q.source() || p.target() != q.target())
        fail(ErrorKind::BaseMismatch, "the two profunctors must share source and target");
    if (family.size() != static_cast<std::size_t>(p.element_count()))
        fail(ErrorKind::TypeMismatch, "the family must list one image per element");
    for (ElemId e = 0; e < p.element_count(); ++e) {
        const ElemId img = family[static_cast<std::size_t>(e)];
        if (img < 0 || img >= q.element_count())
            fail(ErrorKind::UnknownElement,
                 "image of element " + std::to_string(e) + " is out of range");
        if (q.src_obj(img) != p.src_obj(e) || q.tgt_obj(img) != p.tgt_obj(e))
            fail(ErrorKind::TypeMismatch,
                 "image of element " + std::to_string(e) + " sits in a different cell");
    }
    const GroupoidPtr& source = p.source();
    for (MorId alpha = 0; alpha < source->morphism_count(); ++alpha)
        for (ElemId e : p.elements_by_source(source->src(alpha)))
            if (family[static_cast<std::size_t>(p.act_left(alpha, e))] !=
                q.act_left(alpha, family[static_cast<std::size_t>(e)]))
                fail(ErrorKind::TypeMismatch,
                     "the family does not commute with the source action along '" +
                         source->name_of(alpha) + "'");
    const GroupoidPtr& target = p.target();
    for (MorId beta = 0; beta < target->morphism_count(); ++beta)
        for (ElemId e : p.elements_by_target(target->tgt(beta)))
            if (family[static_cast<std::size_t>(p.act_right(e, beta))] !=
                q.act_right(family[static_cast<std::size_t>(e)], beta))
                fail(ErrorKind::TypeMismatch,
                     "the family does not commute with the target action along '" +
                         target->name_of(beta) + "'");
}

std::vector<SecId> family_transport(const SpeciesEval& on_p, const SpeciesEval& on_q,
                                    const std::vector<ElemId>& family) {
    std::vector<SecId> out(on_p.rep_elem.size());
    for (SecId c = 0; c < static_cast<SecId>(out.size()); ++c) {
        const ElemId e = on_p.rep_elem[static_cast<std::size_t>(c)];
        if (e < 0 || static_cast<std::size_t>(e) >= family.size())
            fail(ErrorKind::UnknownElement, "the family does not cover every element");
        out[static_cast<std::size_t>(c)] =
            on_q.class_of(family[static_cast<std::size_t>(e)],
                          on_p.rep_tuple[static_cast<std::size_t>(c)]);
    }
    validate_presheaf_map(on_p.result, on_q.result, out);
    return out;
}

int connecting_count(const Species& s, const Presheaf& x, ElemId p,
                     const std::vector<SecId>& xbar, ElemId q,
                     const std::vector<SecId>& ybar) {
    const Groupoid& base = *s.sym->base;
    const SymObjectV& u = s.sym->object_view(s.prof.src_obj(p));
    const SymObjectV& v = s.sym->object_view(s.prof.src_obj(q));
    if (static_cast<int>(xbar.size()) != u.length() ||
        static_cast<int>(ybar.size()) != v.length())
        fail(ErrorKind::TypeMismatch, "tuple lengths do not match the elements' words");
    for (std::size_t i = 0; i < xbar.size(); ++i)
        if (x.object_of(xbar[i]) != u.items[i])
            fail(ErrorKind::TypeMismatch, "left tuple entry is over the wrong letter");
    for (std::size_t i = 0; i < ybar.size(); ++i)
        if (x.object_of(ybar[i]) != v.items[i])
            fail(ErrorKind::TypeMismatch, "right tuple entry is over the wrong letter");
    int count = 0;
    for (const SymMorphismV& alpha : sym_hom(base, u, v)) {
        const MorId mid = s.sym->morphism_id(s.prof.src_obj(p), alpha);
        if (s.prof.act_left(mid, p) != q) continue;
        bool match = true;
        for (std::size_t i = 0; i < xbar.size() && match; ++i)
            if (x.act(ybar[static_cast<std::size_t>(alpha.perm[i])], alpha.parts[i]) !=
                xbar[i])
                match = false;
        if (match) ++count;
    }
    return count;
}

// --- derivative -----------------------------------------------------------------------

DerivativeResult derivative(const Species& s, bool validate) {
    KitOnProduct kp = tensor_kits(s.bang, s.base_kit);
    const GroupoidPtr& dsource = kp.structure.result;
    const SymGroupoid& sym = *s.sym;
    Profunctor::Builder b(dsource, s.prof.target());

    std::vector<ElemId> from_elem;
    std::vector<ElemId> to_deriv(static_cast<std::size_t>(s.prof.element_count()), -1);
    std::vector<std::vector<ElemId>> by_home(
        static_cast<std::size_t>(dsource->object_count()));
    for (ElemId p = 0; p < s.prof.element_count(); ++p) {
        const SymObjectV& w = sym.object_view(s.prof.src_obj(p));
        if (w.items.empty()) continue;
        const SymObjectV prefix{std::vector<ObjId>(w.items.begin(), w.items.end() - 1)};
        const ObjId u = sym.find_object(prefix);
        if (u < 0)
            fail(ErrorKind::UnknownObject,
                 "the word groupoid lacks the prefix of a structure's word");
        const ObjId home = kp.structure.pair_obj(u, w.items.back());
        to_deriv[static_cast<std::size_t>(p)] =
            b.add_element(s.prof.tgt_obj(p), home, s.prof.name(p));
        from_elem.push_back(p);
        by_home[static_cast<std::size_t>(home)].push_back(p);
    }

    for (MorId m = 0; m < dsource->morphism_count(); ++m) {
        const ObjId at = dsource->src(m);
        if (by_home[static_cast<std::size_t>(at)].empty()) continue;
        const auto [phi, letter_mor] = kp.structure.mor_pair(m);
        const SymMorphismV& pv = sym.morphism_view(phi);
        SymMorphismV ext = pv;
        ext.perm.push_back(pv.length());
        ext.parts.push_back(letter_mor);
        for (ElemId p : by_home[static_cast<std::size_t>(at)]) {
            const MorId wmor = sym.morphism_id(s.prof.src_obj(p), ext);
            b.set_left(m, to_deriv[static_cast<std::size_t>(p)],
                       to_deriv[static_cast<std::size_t>(s.prof.act_left(wmor, p))]);
        }
    }
    const GroupoidPtr& target = s.prof.target();
    for (ElemId p : from_elem) {
        const ObjId bobj = s.prof.tgt_obj(p);
        for (ObjId b2 = 0; b2 < target->object_count(); ++b2)
            for (MorId beta : target->hom(b2, bobj))
                b.set_right(to_deriv[static_cast<std::size_t>(p)], beta,
                            to_deriv[static_cast<std::size_t>(s.prof.act_right(p, beta))]);
    }

    Profunctor built = b.build(validate);
    StabilizationReport report = is_stabilized(built, kp.kit, s.target_kit);
    return DerivativeResult{kp.structure, std::move(built), kp.kit, s.target_kit,
                            std::move(from_elem), std::move(report)};
}

// --- generic elements and the trace -----------------------------------------------------

namespace {

struct WordEval {
    WordSum ws;
    SpeciesEval ev;
    std::vector<SecId> unit;  // per profunctor element (-1 away from this word)
};

std::vector<SecId> identity_tuple(const WordSum& ws, const Groupoid& base,
                                  const SymObjectV& u) {
    std::vector<SecId> out(u.items.size());
    for (int i = 0; i < u.length(); ++i)
        out[static_cast<std::size_t>(i)] =
            ws.section(i, base.identity(u.items[static_cast<std::size_t>(i)]));
    return out;
}

std::vector<WordEval> evaluate_at_words(const Species& s, std::size_t budget) {
    std::vector<WordEval> out;
    const GroupoidPtr& carrier = s.sym->carrier;
    out.reserve(static_cast<std::size_t>(carrier->object_count()));
    for (ObjId u = 0; u < carrier->object_count(); ++u) {
        const SymObjectV& view = s.sym->object_view(u);
        WordEval we;
        we.ws = word_sum(s.sym->base, view);
        we.ev = species_eval(s, we.ws.sum, budget);
        we.unit.assign(static_cast<std::size_t>(s.prof.element_count()), -1);
        const std::vector<SecId> idt = identity_tuple(we.ws, *s.sym->base, view);
        for (ElemId p : s.prof.elements_by_source(u))
            we.unit[static_cast<std::size_t>(p)] = we.ev.class_of(p, idt);
        out.push_back(std::move(we));
    }
    return out;
}

/// A class is generic when one of its pairs carries a tuple that assembles
/// an isomorphism of sums of representables: the tuple's positions hit every
/// summand of the evaluation word exactly once.
std::vector<char> generic_classes(const WordEval& we, int word_length) {
    std::vector<char> out(we.ev.rep_elem.size(), 0);
    std::vector<char> hit(static_cast<std::size_t>(word_length));
    for (ElemId q = 0; q < static_cast<ElemId>(we.ev.elem_word.size()); ++q) {
        const std::size_t block = we.ev.offset[static_cast<std::size_t>(q) + 1] -
                                  we.ev.offset[static_cast<std::size_t>(q)];
        for (std::size_t r = 0; r < block; ++r) {
            const std::vector<SecId> tuple = pair_tuple(we.ev, q, r);
            if (static_cast<int>(tuple.size()) != word_length) break;
            std::fill(hit.begin(), hit.end(), 0);
            bool iso = true;
            for (SecId t : tuple) {
                const int pos = we.ws.position_of[static_cast<std::size_t>(t)];
                if (hit[static_cast<std::size_t>(pos)]) {
                    iso = false;
                    break;
                }
                hit[static_cast<std::size_t>(pos)] = 1;
            }
            if (iso)
                out[static_cast<std::size_t>(
                    we.ev.pair_class[we.ev.offset[static_cast<std::size_t>(q)] + r])] = 1;
        }
    }
    return out;
}

} // namespace

std::vector<GenericElement> generic_elements(const Species& s, std::size_t budget) {
    if (!s.stable)
        fail(ErrorKind::NotStabilized,
             "generic elements are only computed for stable species");
    const std::vector<WordEval> words = evaluate_at_words(s, budget);
    std::vector<GenericElement> out;
    for (ObjId u = 0; u < static_cast<ObjId>(words.size()); ++u)
        for (ElemId p : s.prof.elements_by_source(u))
            out.push_back(GenericElement{s.prof.tgt_obj(p), u, p,
                                         words[static_cast<std::size_t>(u)]
                                             .unit[static_cast<std::size_t>(p)]});
    return out;
}

TraceReport trace_roundtrip(const Species& s, std::size_t budget) {
    if (!s.stable)
        fail(ErrorKind::NotStabilized,
             "the trace only recovers stable species");
    TraceReport rep;
    const std::vector<WordEval> words = evaluate_at_words(s, budget);
    const GroupoidPtr& carrier = s.sym->carrier;
    const GroupoidPtr& target = s.prof.target();

    for (ObjId u = 0; u < carrier->object_count(); ++u) {
        const WordEval& we = words[static_cast<std::size_t>(u)];
        ++rep.words_checked;
        std::vector<char> unit_flag(we.ev.rep_elem.size(), 0);
        for (ElemId p : s.prof.elements_by_source(u)) {
            const SecId c = we.unit[static_cast<std::size_t>(p)];
            if (unit_flag[static_cast<std::size_t>(c)]) {
                rep.ok = false;
                rep.detail = "the unit map collides on element " + std::to_string(p) +
                             " at word '" + carrier->object_name(u) + "'";
                return rep;
            }
            unit_flag[static_cast<std::size_t>(c)] = 1;
            ++rep.elements;
        }
        const std::vector<char> generic =
            generic_classes(we, s.sym->object_view(u).length());
        if (generic != unit_flag) {
            for (std::size_t c = 0; c < generic.size(); ++c)
                if (generic[c] != unit_flag[c]) {
                    rep.ok = false;
                    rep.detail = "class " + std::to_string(c) + " at word '" +
                                 carrier->object_name(u) +
                                 (generic[c] ? "' is generic but not a unit image"
                                             : "' is a unit image but not generic");
                    return rep;
                }
        }
    }

    for (MorId m = 0; m < carrier->morphism_count(); ++m) {
        const ObjId u = carrier->src(m);
        if (m == carrier->identity(u)) continue;
        const ObjId u2 = carrier->tgt(m);
        const WordEval& from = words[static_cast<std::size_t>(u)];
        const WordEval& to = words[static_cast<std::size_t>(u2)];
        if (s.prof.elements_by_source(u).empty()) continue;
        const std::vector<SecId> component =
            word_sum_map(from.ws, to.ws, s.sym->morphism_view(m));
        const std::vector<SecId> tr = eval_transport(from.ev, to.ev, component);
        for (ElemId p : s.prof.elements_by_source(u))
            if (tr[static_cast<std::size_t>(from.unit[static_cast<std::size_t>(p)])] !=
                to.unit[static_cast<std::size_t>(s.prof.act_left(m, p))]) {
                rep.ok = false;
                rep.detail = "the unit is not natural along the word morphism '" +
                             carrier->name_of(m) + "'";
                return rep;
            }
    }

    for (ObjId u = 0; u < carrier->object_count(); ++u) {
        const WordEval& we = words[static_cast<std::size_t>(u)];
        for (ElemId p : s.prof.elements_by_source(u)) {
            const ObjId b = s.prof.tgt_obj(p);
            for (ObjId b2 = 0; b2 < target->object_count(); ++b2)
                for (MorId beta : target->hom(b2, b))
                    if (we.ev.result.act(we.unit[static_cast<std::size_t>(p)], beta) !=
                        we.unit[static_cast<std::size_t>(s.prof.act_right(p, beta))]) {
                        rep.ok = false;
                        rep.detail =
                            "the unit is not natural along the target morphism '" +
                            target->name_of(beta) + "'";
                        return rep;
                    }
        }
    }
    return rep;
}

// --- universal-property genericity ---------------------------------------------------

GenericCheck is_generic(const Species& s, const Presheaf& x, SecId g,
                        const std::vector<Presheaf>& probes, std::size_t budget) {
    GenericCheck out;
    std::vector<const Presheaf*> cand{&x};
    for (const Presheaf& probe : probes) cand.push_back(&probe);
    const int n = static_cast<int>(cand.size());

    // the budget rations probe enumeration and square counting; evaluations
    // of the small candidate arguments keep their own default allowance
    std::vector<SpeciesEval> ev;
    ev.reserve(static_cast<std::size_t>(n));
    for (const Presheaf* c : cand) ev.push_back(species_eval(s, *c));
    if (g < 0 || g >= ev[0].result.section_count())
        fail(ErrorKind::IndexOutOfRange, "no such class in the evaluation of the argument");
    const ObjId b = ev[0].result.object_of(g);

    const auto maps_between = [&](int i, int j) {
        try {
            return enumerate_presheaf_maps(*cand[static_cast<std::size_t>(i)],
                                           *cand[static_cast<std::size_t>(j)], budget);
        } catch (const Error& e) {
            if (e.kind() == ErrorKind::SearchSpaceTooLarge)
                fail(ErrorKind::ProbeBudgetExceeded,
                     "too many natural maps between the probes");
            throw;
        }
    };
    std::vector<std::vector<std::vector<std::vector<SecId>>>> maps(
        static_cast<std::size_t>(n));
    std::vector<std::vector<std::vector<std::vector<SecId>>>> transport(
        static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        maps[static_cast<std::size_t>(i)].resize(static_cast<std::size_t>(n));
        transport[static_cast<std::size_t>(i)].resize(static_cast<std::size_t>(n));
        for (int j = 0; j < n; ++j) {
            auto& mm = maps[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
            mm = maps_between(i, j);
            for (const auto& comp : mm)
                transport[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]
                    .push_back(eval_transport(ev[static_cast<std::size_t>(i)],
                                              ev[static_cast<std::size_t>(j)], comp));
        }
    }

    for (int ci = 0; ci < n; ++ci) {
        const auto& hs = maps[0][static_cast<std::size_t>(ci)];
        for (std::size_t hk = 0; hk < hs.size(); ++hk) {
            const SecId gt =
                transport[0][static_cast<std::size_t>(ci)][hk][static_cast<std::size_t>(g)];
            for (int ai = 0; ai < n; ++ai) {
                const auto& fs =
                    maps[static_cast<std::size_t>(ai)][static_cast<std::size_t>(ci)];
                for (std::size_t fk = 0; fk < fs.size(); ++fk) {
                    const auto& ftr = transport[static_cast<std::size_t>(ai)]
                                               [static_cast<std::size_t>(ci)][fk];
                    for (SecId v :
                         ev[static_cast<std::size_t>(ai)].result.sections_at(b)) {
                        if (ftr[static_cast<std::size_t>(v)] != gt) continue;
                        if (++out.squares_checked > static_cast<long long>(budget))
                            fail(ErrorKind::ProbeBudgetExceeded,
                                 "more than " + std::to_string(budget) +
                                     " probe squares");
                        int fills = 0;
                        const auto& ks = maps[0][static_cast<std::size_t>(ai)];
                        for (std::size_t kk = 0; kk < ks.size(); ++kk) {
                            const auto& k = ks[kk];
                            const auto& f = fs[fk];
                            const auto& h = hs[hk];
                            bool composes = true;
                            for (std::size_t sec = 0; sec < k.size() && composes; ++sec)
                                if (f[static_cast<std::size_t>(k[sec])] != h[sec])
                                    composes = false;
                            if (!composes) continue;
                            if (transport[0][static_cast<std::size_t>(ai)][kk]
                                         [static_cast<std::size_t>(g)] != v)
                                continue;
                            ++fills;
                        }
                        if (fills != 1) {
                            out.generic = false;
                            out.detail =
                                "the square through candidates " + std::to_string(ci) +
                                " and " + std::to_string(ai) + " at class " +
                                std::to_string(v) + " admits " + std::to_string(fills) +
                                " fills";
                            return out;
                        }
                    }
                }
            }
        }
    }
    return out;
}

// --- one-letter traces -------------------------------------------------------------------

Species linear_trace(const Profunctor& p, const SymGroupoidPtr& sym, const Kit& source_kit,
                     const Kit& target_kit) {
    if (!sym || p.source() != sym->base)
        fail(ErrorKind::BaseMismatch,
             "the profunctor must run from the word groupoid's base");
    if (sym->max_length < 1)
        fail(ErrorKind::BudgetExceeded, "the word groupoid has no one-letter words");
    if (source_kit.base() != sym->base || target_kit.base() != p.target())
        fail(ErrorKind::BaseMismatch, "the kits must live on the profunctor's ends");
    const StabilizationReport report = is_stabilized(p, source_kit, target_kit);
    if (!report.stabilized)
        fail(ErrorKind::NotStabilized, "the profunctor is not stabilized: " + report.detail);

    const GroupoidPtr& base = sym->base;
    const GroupoidPtr& carrier = sym->carrier;
    std::vector<ObjId> word_of(static_cast<std::size_t>(base->object_count()));
    for (ObjId a = 0; a < base->object_count(); ++a)
        word_of[static_cast<std::size_t>(a)] = sym->object_id(SymObjectV{{a}});

    Profunctor::Builder b(carrier, p.target());
    for (ElemId e = 0; e < p.element_count(); ++e)
        b.add_element(p.tgt_obj(e), word_of[static_cast<std::size_t>(p.src_obj(e))],
                      p.name(e));
    for (MorId m = 0; m < carrier->morphism_count(); ++m) {
        const SymMorphismV& view = sym->morphism_view(m);
        if (view.length() != 1) continue;
        const SymObjectV& at = sym->object_view(carrier->src(m));
        const MorId gamma = view.parts[0];
        for (ElemId e : p.elements_by_source(at.items[0]))
            b.set_left(m, e, p.act_left(gamma, e));
    }
    const GroupoidPtr& target = p.target();
    for (ElemId e = 0; e < p.element_count(); ++e)
        for (ObjId b2 = 0; b2 < target->object_count(); ++b2)
            for (MorId beta : target->hom(b2, p.tgt_obj(e)))
                b.set_right(e, beta, p.act_right(e, beta));
    return make_species(b.build(true), sym, source_kit, target_kit,
                        carrier_endo_cap(*sym));
}

LinearRoundtrip linear_roundtrip(const Profunctor& p, const SymGroupoidPtr& sym,
                                 const Kit& source_kit, const Kit& target_kit,
                                 std::size_t budget) {
    LinearRoundtrip rep;
    const Species s = linear_trace(p, sym, source_kit, target_kit);
    if (!s.stable) {
        rep.ok = false;
        rep.detail = "the one-letter trace failed its stability check";
        return rep;
    }
    const GroupoidPtr& base = sym->base;
    const GroupoidPtr& target = p.target();
    for (ObjId a = 0; a < base->object_count(); ++a) {
        const Presheaf ya = representable_presheaf(base, a);
        const SpeciesEval ev = species_eval(s, ya, budget);
        const auto& loops = base->hom(a, a);
        const auto idit = std::find(loops.begin(), loops.end(), base->identity(a));
        const SecId id_sec =
            ya.sections_at(a)[static_cast<std::size_t>(idit - loops.begin())];

        for (ObjId b = 0; b < target->object_count(); ++b) {
            ++rep.cells_checked;
            if (ev.result.sections_at(b).size() != p.cell(b, a).size()) {
                rep.ok = false;
                rep.detail = "cell sizes disagree after evaluating at '" +
                             base->object_name(a) + "'";
                return rep;
            }
        }
        std::vector<char> hit(static_cast<std::size_t>(ev.result.section_count()), 0);
        const ObjId word = sym->object_id(SymObjectV{{a}});
        for (ElemId e : s.prof.elements_by_source(word)) {
            const SecId c = ev.class_of(e, {id_sec});
            if (hit[static_cast<std::size_t>(c)]) {
                rep.ok = false;
                rep.detail = "two elements land on one class over '" +
                             base->object_name(a) + "'";
                return rep;
            }
            hit[static_cast<std::size_t>(c)] = 1;
        }
        if (std::find(hit.begin(), hit.end(), 0) != hit.end()) {
            rep.ok = false;
            rep.detail = "a class over '" + base->object_name(a) +
                         "' is hit by no element";
            return rep;
        }
        if (!presheaves_isomorphic(ev.result, apply_profunctor(p, ya))) {
            rep.ok = false;
            rep.detail = "evaluation at '" + base->object_name(a) +
                         "' disagrees with plain application";
            return rep;
        }
    }
    const TraceReport tr = trace_roundtrip(s, budget);
    rep.words_checked = tr.words_checked;
    if (!tr.ok) {
        rep.ok = false;
        rep.detail = tr.detail;
    }
    return rep;
}

// --- cartesian transformations --------------------------------------------------------

CartesianReport is_cartesian(const Species& p, const Species& q,
                             const std::vector<ElemId>& family,
                             const std::vector<PresheafMap>& tests, std::size_t budget) {
    if (p.sym != q.sym)
        fail(ErrorKind::BaseMismatch, "the two species must share their word groupoid");
    if (p.prof.target() != q.prof.target())
        fail(ErrorKind::BaseMismatch, "the two species must share their target");
    validate_element_family(p.prof, q.prof, family);

    CartesianReport rep;
    const GroupoidPtr& target = p.prof.target();
    for (std::size_t t = 0; t < tests.size(); ++t) {
        const PresheafMap& tm = tests[t];
        validate_presheaf_map(tm.from, tm.to, tm.component);
        const SpeciesEval px = species_eval(p, tm.from, budget);
        const SpeciesEval py = species_eval(p, tm.to, budget);
        const SpeciesEval qx = species_eval(q, tm.from, budget);
        const SpeciesEval qy = species_eval(q, tm.to, budget);
        const std::vector<SecId> fx = family_transport(px, qx, family);
        const std::vector<SecId> fy = family_transport(py, qy, family);
        const std::vector<SecId> ph = eval_transport(px, py, tm.component);
        const std::vector<SecId> qh = eval_transport(qx, qy, tm.component);
        for (SecId sct = 0; sct < static_cast<SecId>(fx.size()); ++sct)
            if (qh[static_cast<std::size_t>(fx[static_cast<std::size_t>(sct)])] !=
                fy[static_cast<std::size_t>(ph[static_cast<std::size_t>(sct)])])
                fail(ErrorKind::TypeMismatch,
                     "the induced naturality square does not commute");

        for (ObjId b = 0; b < target->object_count(); ++b) {
            ++rep.squares_checked;
            std::set<std::pair<SecId, SecId>> image;
            bool injective = true;
            for (SecId sct : px.result.sections_at(b))
                if (!image
                         .insert({fx[static_cast<std::size_t>(sct)],
                                  ph[static_cast<std::size_t>(sct)]})
                         .second)
                    injective = false;
            std::size_t fiber = 0;
            for (SecId cx : qx.result.sections_at(b))
                for (SecId dy : py.result.sections_at(b))
                    if (qh[static_cast<std::size_t>(cx)] ==
                        fy[static_cast<std::size_t>(dy)])
                        ++fiber;
            if (!injective || image.size() != fiber) {
                rep.cartesian = false;
                rep.detail = "over object '" + target->object_name(b) + "' of test map " +
                             std::to_string(t) + " the comparison sends " +
                             std::to_string(px.result.sections_at(b).size()) +
                             " classes into a fiber product of size " +
                             std::to_string(fiber) +
                             (injective ? "" : " and is not injective");
                return rep;
            }
        }
    }
    return rep;
}

// --- the two-wire disjunction fixture ---------------------------------------------------

ParallelOr parallel_or_fixture() {
    const GroupoidPtr inputs =
        discrete_groupoid({"first-false", "first-true", "second-false", "second-true"});
    const GroupoidPtr output = discrete_groupoid({"false", "true"});
    const SymGroupoidPtr sym = materialize_sym(inputs, 2);

    Profunctor::Builder b(sym->carrier, output);
    const std::array<ObjId, 4> homes{
        sym->object_id(SymObjectV{{0, 2}}), sym->object_id(SymObjectV{{2, 0}}),
        sym->object_id(SymObjectV{{1}}), sym->object_id(SymObjectV{{3}})};
    const std::array<ObjId, 4> targets{0, 0, 1, 1};
    std::array<ElemId, 4> elems{};
    const std::array<std::string, 4> names{"both-false", "both-false-flipped",
                                           "first-true", "second-true"};
    for (int i = 0; i < 4; ++i)
        elems[static_cast<std::size_t>(i)] = b.add_element(
            targets[static_cast<std::size_t>(i)], homes[static_cast<std::size_t>(i)],
            names[static_cast<std::size_t>(i)]);
    const std::array<ElemId, 4> flipped{elems[1], elems[0], elems[2], elems[3]};

    const GroupoidPtr& carrier = sym->carrier;
    for (MorId m = 0; m < carrier->morphism_count(); ++m) {
        const ObjId a = carrier->src(m);
        for (int i = 0; i < 4; ++i) {
            if (homes[static_cast<std::size_t>(i)] != a) continue;
            b.set_left(m, elems[static_cast<std::size_t>(i)],
                       carrier->tgt(m) == a ? elems[static_cast<std::size_t>(i)]
                                            : flipped[static_cast<std::size_t>(i)]);
        }
    }
    for (int i = 0; i < 4; ++i)
        b.set_right(elems[static_cast<std::size_t>(i)],
                    output->identity(targets[static_cast<std::size_t>(i)]),
                    elems[static_cast<std::size_t>(i)]);

    Species species = make_species(b.build(true), sym, Kit::trivial(inputs),
                                   Kit::trivial(output));
    return ParallelOr{std::move(species), inputs, output};
}

std::pair<int, int> parallel_or_eval(const ParallelOr& fixture,
                                     const std::array<int, 4>& sizes, std::size_t budget) {
    Presheaf::Builder b(fixture.inputs);
    for (ObjId o = 0; o < 4; ++o) {
        if (sizes[static_cast<std::size_t>(o)] < 0)
            fail(ErrorKind::IndexOutOfRange, "section counts must be nonnegative");
        for (int i = 0; i < sizes[static_cast<std::size_t>(o)]; ++i) {
            const SecId s = b.add_section(o);
            b.set_action(s, fixture.inputs->identity(o), s);
        }
    }
    const SpeciesEval ev = species_eval(fixture.species, b.build(true), budget);
    return {static_cast<int>(ev.result.sections_at(0).size()),
            static_cast<int>(ev.result.sections_at(1).size())};
}

} // namespace kitbench
