#include "kitbench/exponential.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "kitbench/subgroups.hpp"
#include "kitbench/util.hpp"

namespace kitbench {

namespace {

void require_boolean_input(const Kit& k, const char* who) {
    if (k.boolean_known() == Known::yes) return;
    const BooleanDiagnosis diag = is_boolean(k);
    if (!diag.boolean)
        fail(ErrorKind::NotBoolean, std::string(who) + " needs a Boolean kit: " + diag.witness);
}

ObjId singleton_object(const SymGroupoid& sym, ObjId a) {
    return sym.object_id(SymObjectV{{a}});
}

MorId singleton_morphism(const SymGroupoid& sym, MorId f) {
    const ObjId s = singleton_object(sym, sym.base->src(f));
    return sym.morphism_id(s, SymMorphismV{{0}, {f}});
}

} // namespace

// --- kit lift --------------------------------------------------------------------

Kit bang_kit(const SymGroupoidPtr& sym, const Kit& k, int endo_cap) {
    if (!sym || k.base() != sym->base)
        fail(ErrorKind::BaseMismatch, "kit lift needs a kit on the word groupoid's base");
    require_boolean_input(k, "kit lift");
    const Groupoid& carrier = *sym->carrier;
    const Groupoid& base = *sym->base;

    std::vector<Mask> masks;
    masks.reserve(static_cast<std::size_t>(carrier.object_count()));
    for (ObjId o = 0; o < carrier.object_count(); ++o) {
        const auto& endos = carrier.endos(o);
        if (static_cast<int>(endos.size()) > endo_cap)
            fail(ErrorKind::BudgetExceeded,
                 "word " + carrier.object_name(o) + " has " + std::to_string(endos.size()) +
                     " endomorphisms, over the cap of " + std::to_string(endo_cap));
        const SymObjectV& word = sym->object_view(o);
        Mask loops_in = make_mask(static_cast<int>(endos.size()));
        for (std::size_t i = 0; i < endos.size(); ++i) {
            const SymMorphismV& view = sym->morphism_view(endos[i]);
            bool all_in = true;
            for (int pos = 0; pos < word.length() && all_in; ++pos)
                all_in = k.union_contains(loop_endomorphism(base, word, view, pos));
            if (all_in) mask_set(loops_in, static_cast<int>(i));
        }
        // The loop set is power- and conjugation-closed but not saturated:
        // an endomorphism whose relevant powers land inside it must join.
        const auto table = shared_endo_table(carrier, o);
        Mask m = phi_saturate(*table, cyclic_interior(*table, loops_in));
        if (!is_boolean_mask(*table, m))
            fail(ErrorKind::NotBoolean,
                 "loop rule did not close to a Boolean union at word " + carrier.object_name(o));
        masks.push_back(std::move(m));
    }
    return Kit::from_verified_masks(sym->carrier, std::move(masks), Known::yes);
}

Kit whynot_kit(const SymGroupoidPtr& sym_op, const Kit& k, int endo_cap) {
    if (!sym_op || sym_op->base != opposite(k.base()))
        fail(ErrorKind::BaseMismatch,
             "dual lift needs a word groupoid over the opposite of the kit's base");
    const Kit lifted = bang_kit(sym_op, orthogonal_kit(k), endo_cap);
    return orthogonal_kit(lifted);
}

// --- flattening ----------------------------------------------------------------

int flattened_weight(const SymGroupoid& inner, const SymObjectV& outer_word) {
    int w = 0;
    for (ObjId block : outer_word.items) w += inner.object_view(block).length();
    return w;
}

SymObjectV flatten_object(const SymGroupoid& outer, const SymGroupoid& inner, ObjId w) {
    if (outer.base != inner.carrier)
        fail(ErrorKind::BaseMismatch, "flattening needs the outer layer built over the inner carrier");
    SymObjectV out;
    for (ObjId block : outer.object_view(w).items) {
        const SymObjectV& bw = inner.object_view(block);
        out.items.insert(out.items.end(), bw.items.begin(), bw.items.end());
    }
    return out;
}

SymMorphismV flatten_morphism(const SymGroupoid& outer, const SymGroupoid& inner, MorId m) {
    if (outer.base != inner.carrier)
        fail(ErrorKind::BaseMismatch, "flattening needs the outer layer built over the inner carrier");
    const Groupoid& oc = *outer.carrier;
    const SymMorphismV& beta = outer.morphism_view(m);
    const SymObjectV& wsrc = outer.object_view(oc.src(m));
    const SymObjectV& wtgt = outer.object_view(oc.tgt(m));

    const auto offsets = [&inner](const SymObjectV& w) {
        std::vector<int> off(w.items.size() + 1, 0);
        for (std::size_t b = 0; b < w.items.size(); ++b)
            off[b + 1] = off[b] + inner.object_view(w.items[b]).length();
        return off;
    };
    const std::vector<int> off_src = offsets(wsrc);
    const std::vector<int> off_tgt = offsets(wtgt);

    SymMorphismV bar;
    bar.perm.assign(static_cast<std::size_t>(off_src.back()), 0);
    bar.parts.assign(static_cast<std::size_t>(off_src.back()), 0);
    for (std::size_t b = 0; b < wsrc.items.size(); ++b) {
        const int image_block = beta.perm[b];
        const SymMorphismV& sigma = inner.morphism_view(beta.parts[b]);
        for (int j = 0; j < sigma.length(); ++j) {
            const std::size_t kpos = static_cast<std::size_t>(off_src[b] + j);
            bar.perm[kpos] = off_tgt[static_cast<std::size_t>(image_block)] +
                             sigma.perm[static_cast<std::size_t>(j)];
            bar.parts[kpos] = sigma.parts[static_cast<std::size_t>(j)];
        }
    }
    return bar;
}

// --- structure maps --------------------------------------------------------------

Profunctor dereliction(const SymGroupoidPtr& sym, bool validate) {
    const GroupoidPtr& base = sym->base;
    const GroupoidPtr& carrier = sym->carrier;
    Profunctor::Builder b(carrier, base);
    std::map<MorId, ElemId> elem_of;
    for (ObjId a = 0; a < base->object_count(); ++a) {
        const ObjId sa = singleton_object(*sym, a);
        for (ObjId u = 0; u < carrier->object_count(); ++u)
            for (MorId f : carrier->hom(sa, u))
                elem_of[f] = b.add_element(a, u, carrier->name_of(f));
    }
    for (const auto& [f, e] : elem_of) {
        const ObjId u = carrier->tgt(f);
        for (MorId gamma = 0; gamma < carrier->morphism_count(); ++gamma)
            if (carrier->src(gamma) == u)
                b.set_left(gamma, e, elem_of.at(carrier->compose(gamma, f)));
        const ObjId a = sym->object_view(carrier->src(f)).items[0];
        for (MorId beta = 0; beta < base->morphism_count(); ++beta)
            if (base->tgt(beta) == a)
                b.set_right(e, beta, elem_of.at(carrier->compose(f, singleton_morphism(*sym, beta))));
    }
    return b.build(validate);
}

Profunctor digging(const SymGroupoidPtr& inner, const SymGroupoidPtr& outer, bool validate) {
    if (outer->base != inner->carrier)
        fail(ErrorKind::BaseMismatch, "duplication needs the outer layer built over the inner carrier");
    const Groupoid& ic = *inner->carrier;
    const Groupoid& oc = *outer->carrier;
    Profunctor::Builder b(inner->carrier, outer->carrier);

    std::vector<ObjId> flat_of(static_cast<std::size_t>(oc.object_count()));
    for (ObjId w = 0; w < oc.object_count(); ++w)
        flat_of[static_cast<std::size_t>(w)] = inner->object_id(flatten_object(*outer, *inner, w));

    std::map<std::pair<ObjId, MorId>, ElemId> elem_of;
    for (ObjId w = 0; w < oc.object_count(); ++w)
        for (ObjId u = 0; u < ic.object_count(); ++u)
            for (MorId f : ic.hom(flat_of[static_cast<std::size_t>(w)], u))
                elem_of[{w, f}] =
                    b.add_element(w, u, oc.object_name(w) + ":" + ic.name_of(f));

    for (const auto& [key, e] : elem_of) {
        const auto [w, f] = key;
        const ObjId u = ic.tgt(f);
        for (MorId gamma = 0; gamma < ic.morphism_count(); ++gamma)
            if (ic.src(gamma) == u)
                b.set_left(gamma, e, elem_of.at({w, ic.compose(gamma, f)}));
        for (MorId beta = 0; beta < oc.morphism_count(); ++beta) {
            if (oc.tgt(beta) != w) continue;
            const ObjId w2 = oc.src(beta);
            const MorId flat_beta = inner->morphism_id(
                flat_of[static_cast<std::size_t>(w2)], flatten_morphism(*outer, *inner, beta));
            b.set_right(e, beta, elem_of.at({w2, ic.compose(f, flat_beta)}));
        }
    }
    return b.build(validate);
}

Profunctor coderiction(const SymGroupoidPtr& sym, bool validate) {
    const GroupoidPtr& base = sym->base;
    const GroupoidPtr& carrier = sym->carrier;
    Profunctor::Builder b(base, carrier);
    std::map<MorId, ElemId> elem_of;
    for (ObjId u = 0; u < carrier->object_count(); ++u)
        for (ObjId a = 0; a < base->object_count(); ++a)
            for (MorId f : carrier->hom(u, singleton_object(*sym, a)))
                elem_of[f] = b.add_element(u, a, carrier->name_of(f));
    for (const auto& [f, e] : elem_of) {
        const ObjId a = sym->object_view(carrier->tgt(f)).items[0];
        for (MorId alpha = 0; alpha < base->morphism_count(); ++alpha)
            if (base->src(alpha) == a)
                b.set_left(alpha, e, elem_of.at(carrier->compose(singleton_morphism(*sym, alpha), f)));
        const ObjId u = carrier->src(f);
        for (MorId gamma = 0; gamma < carrier->morphism_count(); ++gamma)
            if (carrier->tgt(gamma) == u)
                b.set_right(e, gamma, elem_of.at(carrier->compose(f, gamma)));
    }
    return b.build(validate);
}

// --- the Seely comparison ---------------------------------------------------------

SeelyCheck seely_compare(const Kit& left, const Kit& right, int max_length,
                         std::size_t morphism_budget, int endo_cap) {
    const KitOnCoproduct both = with_kits(left, right);
    const CoproductStructure& cs = both.structure;
    const SymGroupoidPtr sym_both = materialize_sym(cs.result, max_length, morphism_budget);
    const Kit lifted_both = bang_kit(sym_both, both.kit, endo_cap);

    const SymGroupoidPtr sym_l = materialize_sym(cs.left, max_length, morphism_budget);
    const SymGroupoidPtr sym_r = materialize_sym(cs.right, max_length, morphism_budget);
    const KitOnProduct tensored =
        tensor_kits(bang_kit(sym_l, left, endo_cap), bang_kit(sym_r, right, endo_cap));
    const Groupoid& prod = *tensored.structure.result;

    SeelyCheck out;
    const Groupoid& wc = *sym_both->carrier;
    for (ObjId w = 0; w < wc.object_count(); ++w) {
        const SymObjectV& word = sym_both->object_view(w);
        // split the word into its left-letter and right-letter subwords
        SymObjectV wl, wr;
        std::vector<int> side(word.items.size());      // per position
        std::vector<int> rank(word.items.size());      // position within its side
        for (std::size_t i = 0; i < word.items.size(); ++i) {
            const auto [s, local] = cs.obj_case(word.items[i]);
            side[i] = s;
            if (s == 0) {
                rank[i] = wl.length();
                wl.items.push_back(local);
            } else {
                rank[i] = wr.length();
                wr.items.push_back(local);
            }
        }
        const ObjId ol = sym_l->object_id(wl);
        const ObjId orr = sym_r->object_id(wr);
        const ObjId pobj = tensored.structure.pair_obj(ol, orr);

        const Mask& mixed = lifted_both.union_mask(w);
        const Mask& split = tensored.kit.union_mask(pobj);
        const auto& endos = wc.endos(w);
        for (std::size_t i = 0; i < endos.size(); ++i) {
            const SymMorphismV& view = sym_both->morphism_view(endos[i]);
            SymMorphismV fl, fr;
            fl.perm.assign(static_cast<std::size_t>(wl.length()), 0);
            fl.parts.assign(static_cast<std::size_t>(wl.length()), 0);
            fr.perm.assign(static_cast<std::size_t>(wr.length()), 0);
            fr.parts.assign(static_cast<std::size_t>(wr.length()), 0);
            for (std::size_t j = 0; j < word.items.size(); ++j) {
                const auto [s, local] = cs.mor_case(view.parts[j]);
                const std::size_t image = static_cast<std::size_t>(view.perm[j]);
                if (side[j] == 0) {
                    fl.perm[static_cast<std::size_t>(rank[j])] = rank[image];
                    fl.parts[static_cast<std::size_t>(rank[j])] = local;
                } else {
                    fr.perm[static_cast<std::size_t>(rank[j])] = rank[image];
                    fr.parts[static_cast<std::size_t>(rank[j])] = local;
                }
                (void)s;
            }
            const MorId ml = sym_l->morphism_id(ol, fl);
            const MorId mr = sym_r->morphism_id(orr, fr);
            const MorId pm = tensored.structure.pair_mor(ml, mr);
            const bool in_mixed = mask_test(mixed, static_cast<int>(i));
            const bool in_split = mask_test(split, prod.endo_index(pm));
            if (in_mixed != in_split) {
                out.ok = false;
                std::ostringstream os;
                os << "word " << wc.object_name(w) << ", endomorphism "
                   << wc.name_of(endos[static_cast<std::size_t>(i)]) << ": mixed lift says "
                   << (in_mixed ? "in" : "out") << ", split tensor says "
                   << (in_split ? "in" : "out");
                out.detail = os.str();
                return out;
            }
        }
        ++out.words_checked;
    }
    return out;
}

} // namespace kitbench
