#include <algorithm>
#include <array>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "doctest.h"
#include "kitbench/connectives.hpp"
#include "kitbench/exponential.hpp"
#include "kitbench/kit.hpp"
#include "kitbench/presheaf.hpp"
#include "kitbench/profunctor.hpp"
#include "kitbench/species.hpp"
#include "kitbench/subgroups.hpp"
#include "kitbench/sym.hpp"
#include "kitbench/util.hpp"
#include "support/oracles.hpp"

using namespace kitbench;

namespace {

ErrorKind kind_of_failure(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("expected a kitbench::Error");
    return ErrorKind::UsageError;
}

/// The Boolean kits of a one-object base, keyed by the size of their union.
Kit kit_with_union_size(const GroupoidPtr& g, int size) {
    for (const Kit& k : enumerate_boolean_kits(g))
        if (mask_popcount(k.union_mask(0)) == size) return k;
    FAIL("no Boolean kit with union of size ", size);
    return Kit::trivial(g);
}

/// A discrete presheaf with `k` named points over a one-object base.
Presheaf points_over(const GroupoidPtr& base, int k) {
    Presheaf::Builder b(base);
    for (int i = 0; i < k; ++i) {
        const SecId s = b.add_section(0, "s" + std::to_string(i));
        for (MorId m : base->endos(0)) b.set_action(s, m, s);
    }
    return b.build(true);
}

/// One profunctor element over the one-object pair (0, 0), fixed by both
/// actions; never stabilized unless the source kit swallows every loop.
Profunctor collapse_profunctor(const GroupoidPtr& src, const GroupoidPtr& tgt) {
    Profunctor::Builder b(src, tgt);
    const ElemId z = b.add_element(0, 0, "z");
    for (MorId m = 0; m < src->morphism_count(); ++m) b.set_left(m, z, z);
    for (MorId m = 0; m < tgt->morphism_count(); ++m) b.set_right(z, m, z);
    return b.build(true);
}

/// Per-arity class counts of an evaluation of a lifted set species, read off
/// from the word lengths of the class representatives.
std::vector<int> classes_by_arity(const SpeciesEval& ev, int max_arity) {
    std::vector<int> out(static_cast<std::size_t>(max_arity) + 1, 0);
    for (SecId c = 0; c < static_cast<SecId>(ev.rep_elem.size()); ++c) {
        const int n =
            ev.sym->object_view(ev.elem_word[static_cast<std::size_t>(ev.rep_elem[c])])
                .length();
        ++out[static_cast<std::size_t>(n)];
    }
    return out;
}

/// The action table of a set species at one arity, shaped for the oracle.
std::vector<std::vector<int>> action_table(const SetSpecies& f, int arity) {
    const int ranks = static_cast<int>(f.permutations(arity).size());
    std::vector<std::vector<int>> act(static_cast<std::size_t>(ranks));
    for (int s = 0; s < ranks; ++s) {
        act[static_cast<std::size_t>(s)].resize(static_cast<std::size_t>(f.size(arity)));
        for (int x = 0; x < f.size(arity); ++x)
            act[static_cast<std::size_t>(s)][static_cast<std::size_t>(x)] =
                f.act_rank(arity, s, x);
    }
    return act;
}

/// A species fixed at every arity by every permutation: one rigid element
/// at each arity up to the bound. Free nowhere above arity 1.
SetSpecies rigid_tower(int max_arity) {
    SetSpecies::Builder b(max_arity);
    for (int n = 0; n <= max_arity; ++n) {
        const int e = b.add_element(n, "rigid" + std::to_string(n));
        for (const auto& sigma : all_permutations(n)) b.set_action(n, sigma, e, e);
    }
    return b.build(true);
}

} // namespace

TEST_SUITE("species") {

TEST_CASE("set species builders validate shapes, identities and functoriality") {
    const SetSpecies reg = regular_set_species(3);
    CHECK(reg.max_arity() == 3);
    CHECK(reg.size(0) == 1);
    CHECK(reg.size(1) == 1);
    CHECK(reg.size(2) == 2);
    CHECK(reg.size(3) == 6);
    CHECK(reg.total_size() == 10);

    const SetSpecies pt = point_set_species(3, 2);
    CHECK(pt.size(2) == 1);
    CHECK(pt.size(1) == 0);
    CHECK(pt.total_size() == 1);
    CHECK(pt.act(2, {1, 0}, 0) == 0);

    const SetSpecies fr = free_set_species({1, 2, 1});
    CHECK(fr.size(0) == 1);
    CHECK(fr.size(1) == 2);
    CHECK(fr.size(2) == 2);
    CHECK(fr.total_size() == 5);

    CHECK(empty_set_species(2).total_size() == 0);

    // the regular species acts freely: the transposition moves both elements
    CHECK(reg.act(2, {1, 0}, 0) != 0);
    CHECK(reg.act(2, {1, 0}, reg.act(2, {1, 0}, 0)) == 0);

    CHECK(kind_of_failure([] { SetSpecies::Builder b(7); }) == ErrorKind::GroupTooLarge);
    CHECK(kind_of_failure([] { SetSpecies::Builder b(-1); }) ==
          ErrorKind::IndexOutOfRange);

    CHECK(kind_of_failure([] {
              SetSpecies::Builder b(2);
              const int e = b.add_element(2);
              b.set_action(2, {0, 0}, e, e);  // not a permutation
          }) == ErrorKind::TypeMismatch);

    CHECK(kind_of_failure([] {
              SetSpecies::Builder b(2);
              const int e = b.add_element(2);
              b.set_action(2, {1, 0}, e, e + 1);  // image does not exist
          }) == ErrorKind::UnknownElement);

    CHECK(kind_of_failure([] {
              SetSpecies::Builder b(2);
              const int x = b.add_element(2);
              const int y = b.add_element(2);
              b.set_action(2, {1, 0}, x, x);
              b.set_action(2, {1, 0}, x, y);  // conflicting re-set
          }) == ErrorKind::TypeMismatch);

    CHECK(kind_of_failure([] {
              SetSpecies::Builder b(1);
              b.add_element(1);
              b.build(true);  // identity action never given
          }) == ErrorKind::UnknownElement);

    CHECK(kind_of_failure([] {
              SetSpecies::Builder b(2);
              const int x = b.add_element(2);
              const int y = b.add_element(2);
              b.set_action(2, {0, 1}, x, y);  // identity must fix
              b.set_action(2, {0, 1}, y, y);
              b.set_action(2, {1, 0}, x, x);
              b.set_action(2, {1, 0}, y, y);
              b.build(true);
          }) == ErrorKind::BadIdentity);

    CHECK(kind_of_failure([] {
              SetSpecies::Builder b(2);
              const int x = b.add_element(2);
              const int y = b.add_element(2);
              b.set_action(2, {0, 1}, x, x);
              b.set_action(2, {0, 1}, y, y);
              // the transposition squares to the identity, but this action
              // of it does not: x -> x, y -> x
              b.set_action(2, {1, 0}, x, x);
              b.set_action(2, {1, 0}, y, x);
              b.build(true);
          }) == ErrorKind::TypeMismatch);
}

TEST_CASE("analytic evaluation agrees with naive orbit counting and frozen values") {
    const std::vector<SetSpecies> fixtures = {
        regular_set_species(2), regular_set_species(3), point_set_species(2, 2),
        free_set_species({1, 2, 1}), free_set_species({0, 0, 0, 2}),
        empty_set_species(2), rigid_tower(2)};

    for (const SetSpecies& f : fixtures)
        for (int k = 0; k <= 3; ++k) {
            const AnalyticOrbits got = analytic_eval_set(f, k);
            REQUIRE(static_cast<int>(got.per_arity.size()) == f.max_arity() + 1);
            int total = 0;
            for (int n = 0; n <= f.max_arity(); ++n) {
                CHECK(got.per_arity[static_cast<std::size_t>(n)] ==
                      oracle::naive_symmetrized_orbits(f.size(n), k, n,
                                                       action_table(f, n)));
                total += got.per_arity[static_cast<std::size_t>(n)];
            }
            CHECK(got.total == total);
            CHECK(static_cast<int>(got.reps.size()) == total);
        }

    // frozen: a single rigid element at arity two, over three points
    const AnalyticOrbits point3 = analytic_eval_set(point_set_species(2, 2), 3);
    CHECK(point3.per_arity == std::vector<int>{0, 0, 6});
    CHECK(point3.total == 6);

    // frozen: one free orbit at arity two, over three points
    const AnalyticOrbits free3 = analytic_eval_set(free_set_species({0, 0, 1}), 3);
    CHECK(free3.per_arity == std::vector<int>{0, 0, 9});
    CHECK(free3.total == 9);

    // frozen: the regular species up to pairs, over three points
    const AnalyticOrbits reg3 = analytic_eval_set(regular_set_species(2), 3);
    CHECK(reg3.per_arity == std::vector<int>{1, 3, 9});
    CHECK(reg3.total == 13);

    CHECK(analytic_eval_set(empty_set_species(2), 3).total == 0);

    // free species satisfy the exact division law orbit count * n! = |F(n)| * k^n
    for (const SetSpecies* f :
         {&fixtures[0], &fixtures[1], &fixtures[3], &fixtures[4]})
        for (int k = 1; k <= 3; ++k) {
            const AnalyticOrbits got = analytic_eval_set(*f, k);
            for (int n = 0; n <= f->max_arity(); ++n) {
                long long fact = 1, pow = 1;
                for (int i = 2; i <= n; ++i) fact *= i;
                for (int i = 0; i < n; ++i) pow *= k;
                CHECK(got.per_arity[static_cast<std::size_t>(n)] * fact ==
                      f->size(n) * pow);
            }
        }

    // representatives are listed first-seen in ascending pair order
    for (std::size_t i = 1; i < reg3.reps.size(); ++i) {
        const auto& a = reg3.reps[i - 1];
        const auto& b = reg3.reps[i];
        const auto key = [](const AnalyticOrbits::Rep& r) {
            return std::tuple<int, int, std::vector<int>>(r.arity, r.elem, r.tuple);
        };
        CHECK(key(a) < key(b));
    }

    CHECK(kind_of_failure([] { analytic_eval_set(regular_set_species(2), 100, 10); }) ==
          ErrorKind::BudgetExceeded);
}

TEST_CASE("freeness and polynomial coefficients characterize free species") {
    CHECK(is_free_species(regular_set_species(3)).free);
    CHECK(is_free_species(free_set_species({1, 2, 1})).free);
    CHECK(is_free_species(empty_set_species(2)).free);

    const SetFreeness bad = is_free_species(point_set_species(2, 2));
    CHECK_FALSE(bad.free);
    CHECK(bad.arity == 2);
    CHECK(bad.elem == 0);
    CHECK(bad.fixing == std::vector<int>{1, 0});

    CHECK(polynomial_coefficients(regular_set_species(3)).coefficients ==
          std::vector<int>{1, 1, 1, 1});
    CHECK(polynomial_coefficients(free_set_species({1, 2, 1})).coefficients ==
          std::vector<int>{1, 2, 1});
    CHECK(polynomial_coefficients(free_set_species({0, 0, 0, 2})).coefficients ==
          std::vector<int>{0, 0, 0, 2});
    CHECK(polynomial_coefficients(empty_set_species(2)).coefficients ==
          std::vector<int>{0, 0, 0});

    const PolynomialReport rp = polynomial_coefficients(rigid_tower(2));
    CHECK_FALSE(rp.free);
    CHECK(rp.arity == 2);
    CHECK(rp.detail.find("fixes") != std::string::npos);
}

TEST_CASE("set species lift to word structures and stability matches freeness") {
    const GroupoidPtr one = one_groupoid();
    const SymGroupoidPtr sym = materialize_sym(one, 3);

    const std::vector<SetSpecies> fixtures = {
        regular_set_species(3), free_set_species({1, 2, 1}), point_set_species(2, 2),
        rigid_tower(2), empty_set_species(2), free_set_species({0, 0, 1})};

    for (const SetSpecies& f : fixtures) {
        const Species s = as_species(f, sym);
        CHECK(s.prof.element_count() == f.total_size());
        CHECK(s.stable == is_free_species(f).free);

        // the lifted kit always accommodates the species it was built from
        CHECK(is_K_species(f, sym, s.bang).ok);
        // the bare trivial kit on the carrier only accommodates free species
        CHECK(is_K_species(f, sym, Kit::trivial(sym->carrier)).ok ==
              is_free_species(f).free);

        // evaluation at discrete arguments reproduces the analytic counts
        for (int k = 0; k <= 3; ++k) {
            const Presheaf x = points_over(one, k);
            const SpeciesEval ev = species_eval(s, x);
            const AnalyticOrbits want = analytic_eval_set(f, k);
            CHECK(ev.result.section_count() == want.total);
            const std::vector<int> got = classes_by_arity(ev, f.max_arity());
            for (int n = 0; n <= f.max_arity(); ++n)
                CHECK(got[static_cast<std::size_t>(n)] ==
                      want.per_arity[static_cast<std::size_t>(n)]);
        }
    }

    const SymGroupoidPtr sym_c2 = materialize_sym(cyclic_groupoid(2), 2);
    CHECK(kind_of_failure([&] { as_species(regular_set_species(2), sym_c2); }) ==
          ErrorKind::BaseMismatch);
    const SymGroupoidPtr short_sym = materialize_sym(one, 2);
    CHECK(kind_of_failure([&] { as_species(regular_set_species(3), short_sym); }) ==
          ErrorKind::BudgetExceeded);
}

TEST_CASE("sums of representables track positions and morphism composition") {
    const GroupoidPtr c6 = cyclic_groupoid(6);
    const WordSum ws = word_sum(c6, SymObjectV{{0, 0}});
    CHECK(ws.sum.section_count() == 12);
    const SecId s = ws.section(1, 2);  // position 1, loop g2
    CHECK(ws.position_of[static_cast<std::size_t>(s)] == 1);
    CHECK(ws.morphism_of[static_cast<std::size_t>(s)] == 2);
    // acting by g1 postpends the loop inside the summand
    CHECK(ws.sum.act(s, 1) == ws.section(1, c6->compose(2, 1)));

    // a letter swap relocates summands and composes the parts
    const SymMorphismV swap{{1, 0}, {c6->identity(0), c6->identity(0)}};
    const std::vector<SecId> comp =
        word_sum_map(ws, ws, swap);
    CHECK(comp[static_cast<std::size_t>(ws.section(0, 3))] == ws.section(1, 3));
    CHECK(comp[static_cast<std::size_t>(ws.section(1, 3))] == ws.section(0, 3));
}

TEST_CASE("evaluation glues structure-tuple pairs into coend classes") {
    const GroupoidPtr one = one_groupoid();
    const SymGroupoidPtr sym = materialize_sym(one, 2);
    const Species s = as_species(free_set_species({0, 0, 1}), sym);
    const Presheaf x = points_over(one, 2);
    const auto& xs = x.sections_at(0);

    const SpeciesEval ev = species_eval(s, x);
    CHECK(ev.result.section_count() == 4);

    // the two structures are exchanged by the letter swap, so pairing either
    // with the matching tuple order lands in one class
    CHECK(ev.class_of(0, {xs[0], xs[1]}) == ev.class_of(1, {xs[1], xs[0]}));
    CHECK(ev.class_of(0, {xs[1], xs[0]}) == ev.class_of(1, {xs[0], xs[1]}));
    CHECK(ev.class_of(0, {xs[0], xs[1]}) != ev.class_of(0, {xs[1], xs[0]}));
    CHECK(ev.class_of(0, {xs[0], xs[0]}) != ev.class_of(0, {xs[1], xs[1]}));

    // a stable species connects same-class pairs by exactly one word morphism
    CHECK(connecting_count(s, x, 0, {xs[0], xs[1]}, 0, {xs[0], xs[1]}) == 1);
    CHECK(connecting_count(s, x, 0, {xs[0], xs[1]}, 1, {xs[1], xs[0]}) == 1);
    CHECK(connecting_count(s, x, 0, {xs[0], xs[1]}, 0, {xs[1], xs[0]}) == 0);

    // the rigid pair admits two connecting morphisms: not stable
    const Species spt = as_species(point_set_species(2, 2), sym);
    const Presheaf x1 = points_over(one, 1);
    CHECK(connecting_count(spt, x, 0, {xs[0], xs[0]}, 0, {xs[0], xs[0]}) == 2);

    // transport along the collapse merges everything arity-wise
    const SpeciesEval ev1 = species_eval(s, x1);
    CHECK(ev1.result.section_count() == 1);
    const std::vector<SecId> collapse(2, x1.sections_at(0)[0]);
    const std::vector<SecId> tr = eval_transport(ev, ev1, collapse);
    for (SecId c : tr) CHECK(c == 0);

    // transport along the identity is the identity
    std::vector<SecId> idc;
    for (SecId sec : xs) idc.push_back(sec);
    const std::vector<SecId> tid = eval_transport(ev, ev, idc);
    for (SecId c = 0; c < static_cast<SecId>(tid.size()); ++c)
        CHECK(tid[static_cast<std::size_t>(c)] == c);

    CHECK(kind_of_failure([&] { species_eval(s, x, 3); }) == ErrorKind::BudgetExceeded);
    CHECK(kind_of_failure([&] { ev.class_of(0, {xs[0]}); }) == ErrorKind::TypeMismatch);
    CHECK(kind_of_failure([&] { ev.class_of(0, {xs[0], 99}); }) ==
          ErrorKind::UnknownElement);

    // an argument whose stabilizers escape the kit is rejected
    const GroupoidPtr c6 = cyclic_groupoid(6);
    const SymGroupoidPtr sym6 = materialize_sym(c6, 1);
    const Kit small = kit_with_union_size(c6, 1);
    const Species s6 = linear_trace(identity_profunctor(c6), sym6, small, small);
    const Presheaf quot = quot_representable(c6, subgroup_closure(*c6, 0, {3}));
    CHECK(kind_of_failure([&] { species_eval(s6, quot); }) == ErrorKind::NotStabilized);
}

TEST_CASE("the derivative shifts structures onto prefix-and-letter pairs") {
    const GroupoidPtr one = one_groupoid();
    const SymGroupoidPtr sym = materialize_sym(one, 3);
    const Species s = as_species(regular_set_species(3), sym);

    const DerivativeResult d = derivative(s);
    CHECK(static_cast<int>(d.from_elem.size()) == 9);
    CHECK(d.prof.element_count() == 9);
    CHECK(d.stabilized.stabilized);
    CHECK(d.source_kit.base() == d.structure.result);
    CHECK(d.prof.source() == d.structure.result);

    // count derivative structures by the length of their prefix word: the
    // factorials shift down by one and the top arity empties out
    std::vector<int> by_prefix(4, 0);
    for (ElemId e = 0; e < d.prof.element_count(); ++e) {
        const auto [word, letter] = d.structure.obj_pair(d.prof.src_obj(e));
        ++by_prefix[static_cast<std::size_t>(
            sym->object_view(word).length())];
        CHECK(letter == 0);
    }
    CHECK(by_prefix == std::vector<int>{1, 2, 6, 0});

    // deriving the one-letter copy of a group recovers its left translation
    const GroupoidPtr c6 = cyclic_groupoid(6);
    const SymGroupoidPtr sym6 = materialize_sym(c6, 1);
    const Kit full = kit_with_union_size(c6, 6);
    const Species s6 = linear_trace(identity_profunctor(c6), sym6, full, full);
    const DerivativeResult d6 = derivative(s6);
    CHECK(d6.prof.element_count() == 6);
    CHECK(d6.stabilized.stabilized);
    const ObjId empty_word = sym6->find_object(SymObjectV{{}});
    REQUIRE(empty_word >= 0);
    const ObjId home = d6.structure.pair_obj(empty_word, 0);
    const MorId step = d6.structure.pair_mor(sym6->carrier->identity(empty_word), 1);
    for (ElemId e = 0; e < 6; ++e) {
        CHECK(d6.prof.src_obj(e) == home);
        CHECK(d6.prof.act_left(step, e) == (e + 1) % 6);
        CHECK(d6.prof.act_right(e, 1) == (e + 1) % 6);
    }

    CHECK(derivative(as_species(empty_set_species(2), sym)).prof.element_count() == 0);
}

TEST_CASE("generic elements trace a stable species back out of its evaluations") {
    const GroupoidPtr one = one_groupoid();
    const SymGroupoidPtr sym = materialize_sym(one, 2);

    const Species reg = as_species(regular_set_species(2), sym);
    const TraceReport tr = trace_roundtrip(reg);
    CHECK(tr.ok);
    CHECK(tr.words_checked == 3);
    CHECK(tr.elements == 4);

    const std::vector<GenericElement> gens = generic_elements(reg);
    CHECK(static_cast<int>(gens.size()) == 4);
    for (const GenericElement& g : gens) {
        CHECK(g.unit_section >= 0);
        CHECK(g.target_obj == 0);
    }

    CHECK(trace_roundtrip(as_species(free_set_species({1, 2, 1}), sym)).ok);

    // non-stable species have no trace
    const Species pt = as_species(point_set_species(2, 2), sym);
    CHECK(kind_of_failure([&] { trace_roundtrip(pt); }) == ErrorKind::NotStabilized);
    CHECK(kind_of_failure([&] { generic_elements(pt); }) == ErrorKind::NotStabilized);
}

TEST_CASE("the universal property singles out exactly the generic classes") {
    const GroupoidPtr one = one_groupoid();
    const SymGroupoidPtr sym = materialize_sym(one, 2);
    const Species s = as_species(free_set_species({0, 0, 1}), sym);
    const Presheaf x2 = points_over(one, 2);
    const Presheaf x1 = points_over(one, 1);
    const auto& xs = x2.sections_at(0);

    const SpeciesEval ev = species_eval(s, x2);
    const SecId good = ev.class_of(0, {xs[0], xs[1]});
    const SecId bad = ev.class_of(0, {xs[0], xs[0]});

    const GenericCheck ok = is_generic(s, x2, good, {x1});
    CHECK(ok.generic);
    CHECK(ok.squares_checked > 0);

    const GenericCheck no = is_generic(s, x2, bad, {x1});
    CHECK_FALSE(no.generic);
    CHECK(no.detail.find("fills") != std::string::npos);

    // over a group: a class living on a proper quotient is not generic
    const GroupoidPtr c2 = cyclic_groupoid(2);
    const SymGroupoidPtr sym2 = materialize_sym(c2, 1);
    const Kit full = kit_with_union_size(c2, 2);
    const Species s2 = linear_trace(identity_profunctor(c2), sym2, full, full);
    const Presheaf y = representable_presheaf(c2, 0);
    const Presheaf quot = quot_representable(c2, subgroup_closure(*c2, 0, {1}));

    const SpeciesEval evq = species_eval(s2, quot);
    REQUIRE(evq.result.section_count() == 1);
    CHECK_FALSE(is_generic(s2, quot, 0, {y}).generic);

    const SpeciesEval evy = species_eval(s2, y);
    const SecId unit = evy.class_of(0, {y.sections_at(0)[0]});
    CHECK(is_generic(s2, y, unit, {quot}).generic);

    CHECK(kind_of_failure([&] { is_generic(s, x2, good, {x1}, 1); }) ==
          ErrorKind::ProbeBudgetExceeded);
}

TEST_CASE("one-letter traces copy stabilized profunctors and round-trip") {
    const GroupoidPtr c6 = cyclic_groupoid(6);
    const SymGroupoidPtr sym6 = materialize_sym(c6, 2);
    for (int size : {1, 2, 3, 6}) {
        const Kit k = kit_with_union_size(c6, size);
        const LinearRoundtrip rep =
            linear_roundtrip(identity_profunctor(c6), sym6, k, k);
        CHECK(rep.ok);
        CHECK(rep.cells_checked == 1);
        CHECK(rep.words_checked == 3);
    }

    // a multi-object base
    const GroupoidPtr iso2 = iso2_groupoid();
    const SymGroupoidPtr symi = materialize_sym(iso2, 2);
    const LinearRoundtrip rep = linear_roundtrip(
        identity_profunctor(iso2), symi, Kit::trivial(iso2), Kit::trivial(iso2));
    CHECK(rep.ok);
    CHECK(rep.cells_checked == 4);

    // a fully collapsed element needs the identity-union kit at the source
    // (its orthogonal swallows every loop) and the full kit at the target
    // (its union does); same-kit pairs break one direction each
    const Profunctor flat = collapse_profunctor(c6, c6);
    const Kit small = kit_with_union_size(c6, 1);
    const Kit full = kit_with_union_size(c6, 6);
    CHECK(linear_roundtrip(flat, sym6, small, full).ok);
    CHECK(kind_of_failure([&] { linear_trace(flat, sym6, small, small); }) ==
          ErrorKind::NotStabilized);
    CHECK(kind_of_failure([&] { linear_trace(flat, sym6, full, full); }) ==
          ErrorKind::NotStabilized);
}

TEST_CASE("cartesian transformations are exactly the fiber-product bijections") {
    const GroupoidPtr one = one_groupoid();
    const SymGroupoidPtr sym = materialize_sym(one, 2);
    const Species reg = as_species(regular_set_species(2), sym);

    const Presheaf x2 = points_over(one, 2);
    const Presheaf x1 = points_over(one, 1);
    PresheafMap collapse{x2, x1, {x1.sections_at(0)[0], x1.sections_at(0)[0]}};

    // the identity family over itself is cartesian
    const CartesianReport self =
        is_cartesian(reg, reg, {0, 1, 2, 3}, {collapse});
    CHECK(self.cartesian);
    CHECK(self.squares_checked == 1);

    // crushing the free pair onto a rigid point fails the comparison
    SetSpecies::Builder qb(2);
    const int q0 = qb.add_element(0, "q0");
    const int q1 = qb.add_element(1, "q1");
    const int q2 = qb.add_element(2, "q2");
    qb.set_action(0, {}, q0, q0);
    qb.set_action(1, {0}, q1, q1);
    for (const auto& sigma : all_permutations(2)) qb.set_action(2, sigma, q2, q2);
    const Species rigid = as_species(qb.build(true), sym);

    const CartesianReport crush =
        is_cartesian(reg, rigid, {0, 1, 2, 2}, {collapse});
    CHECK_FALSE(crush.cartesian);
    CHECK(crush.detail.find("fiber") != std::string::npos);

    // a family that ignores the letter swap is not a transformation at all
    CHECK(kind_of_failure([&] {
              is_cartesian(reg, reg, {0, 1, 2, 2}, {collapse});
          }) == ErrorKind::TypeMismatch);
}

TEST_CASE("the two-wire disjunction multiplies failures and adds successes") {
    const ParallelOr por = parallel_or_fixture();
    CHECK(por.species.stable);
    CHECK(por.species.prof.element_count() == 4);

    CHECK(parallel_or_eval(por, {2, 1, 3, 2}) == std::pair<int, int>{6, 3});
    CHECK(parallel_or_eval(por, {0, 0, 0, 0}) == std::pair<int, int>{0, 0});
    CHECK(parallel_or_eval(por, {1, 0, 0, 0}) == std::pair<int, int>{0, 0});

    for (int a = 0; a <= 3; ++a)
        for (int b = 0; b <= 3; ++b)
            for (int c = 0; c <= 3; ++c)
                for (int d = 0; d <= 3; ++d)
                    CHECK(parallel_or_eval(por, {a, b, c, d}) ==
                          std::pair<int, int>{a * c, b + d});

    CHECK(trace_roundtrip(por.species).ok);
}

} // TEST_SUITE
