#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <vector>

#include "doctest.h"
#include "kitbench/connectives.hpp"
#include "kitbench/kit.hpp"
#include "kitbench/profunctor.hpp"
#include "kitbench/sym.hpp"
#include "kitbench/util.hpp"
#include "support/oracles.hpp"

using namespace kitbench;

namespace {

/// All (x, y) pairs of a composable pair of one-object profunctors, indexed
/// x * |Q| + y, together with the gluing relation computed naively from the
/// action tables. Mirrors the coend kernel without union-find.
std::vector<std::pair<int, int>> naive_glue_pairs(const Profunctor& p, const Profunctor& q) {
    const Groupoid& mid = *p.target();
    const int nq = q.element_count();
    std::vector<std::pair<int, int>> rel;
    for (MorId beta = 0; beta < mid.morphism_count(); ++beta)
        for (ElemId x = 0; x < p.element_count(); ++x)
            for (ElemId y = 0; y < nq; ++y)
                rel.emplace_back(p.act_right(x, beta) * nq + y,
                                 x * nq + q.act_left(beta, y));
    return rel;
}

void check_unit_isos(const Profunctor& p) {
    // left unit: glue the hom profunctor of the source onto p, then map each
    // class through the left action of its hom component.
    {
        const Profunctor idp = identity_profunctor(p.source());
        const ComposeResult res = compose_profunctors(idp, p);
        const Profunctor& comp = res.composite;
        REQUIRE(comp.element_count() == p.element_count());
        std::vector<ElemId> to_p(static_cast<std::size_t>(comp.element_count()));
        std::set<ElemId> image;
        for (ElemId e = 0; e < comp.element_count(); ++e) {
            const auto [mid, x, y] = res.witness[static_cast<std::size_t>(e)];
            CHECK(p.src_obj(y) == mid);
            const ElemId t = p.act_left(static_cast<MorId>(x), y);
            to_p[static_cast<std::size_t>(e)] = t;
            image.insert(t);
            CHECK(p.src_obj(t) == comp.src_obj(e));
            CHECK(p.tgt_obj(t) == comp.tgt_obj(e));
        }
        CHECK(static_cast<int>(image.size()) == p.element_count());
        const Groupoid& A = *p.source();
        const Groupoid& B = *p.target();
        for (ElemId e = 0; e < comp.element_count(); ++e) {
            for (MorId al = 0; al < A.morphism_count(); ++al)
                if (A.src(al) == comp.src_obj(e))
                    CHECK(to_p[static_cast<std::size_t>(comp.act_left(al, e))] ==
                          p.act_left(al, to_p[static_cast<std::size_t>(e)]));
            for (MorId be = 0; be < B.morphism_count(); ++be)
                if (B.tgt(be) == comp.tgt_obj(e))
                    CHECK(to_p[static_cast<std::size_t>(comp.act_right(e, be))] ==
                          p.act_right(to_p[static_cast<std::size_t>(e)], be));
        }
    }
    // right unit: same story through the right action.
    {
        const Profunctor idp = identity_profunctor(p.target());
        const ComposeResult res = compose_profunctors(p, idp);
        const Profunctor& comp = res.composite;
        REQUIRE(comp.element_count() == p.element_count());
        std::vector<ElemId> to_p(static_cast<std::size_t>(comp.element_count()));
        std::set<ElemId> image;
        for (ElemId e = 0; e < comp.element_count(); ++e) {
            const auto [mid, x, z] = res.witness[static_cast<std::size_t>(e)];
            CHECK(p.tgt_obj(x) == mid);
            const ElemId t = p.act_right(x, static_cast<MorId>(z));
            to_p[static_cast<std::size_t>(e)] = t;
            image.insert(t);
            CHECK(p.src_obj(t) == comp.src_obj(e));
            CHECK(p.tgt_obj(t) == comp.tgt_obj(e));
        }
        CHECK(static_cast<int>(image.size()) == p.element_count());
        const Groupoid& A = *p.source();
        const Groupoid& B = *p.target();
        for (ElemId e = 0; e < comp.element_count(); ++e) {
            for (MorId al = 0; al < A.morphism_count(); ++al)
                if (A.src(al) == comp.src_obj(e))
                    CHECK(to_p[static_cast<std::size_t>(comp.act_left(al, e))] ==
                          p.act_left(al, to_p[static_cast<std::size_t>(e)]));
            for (MorId be = 0; be < B.morphism_count(); ++be)
                if (B.tgt(be) == comp.tgt_obj(e))
                    CHECK(to_p[static_cast<std::size_t>(comp.act_right(e, be))] ==
                          p.act_right(to_p[static_cast<std::size_t>(e)], be));
        }
    }
}

} // namespace

TEST_CASE("hom profunctor mirrors composition in the base") {
    for (const GroupoidPtr& g : {cyclic_groupoid(6), iso2_groupoid(), s3_groupoid()}) {
        const Profunctor p = identity_profunctor(g, /*validate=*/true);
        REQUIRE(p.element_count() == g->morphism_count());
        for (ObjId b = 0; b < g->object_count(); ++b)
            for (ObjId a = 0; a < g->object_count(); ++a)
                CHECK(p.cell(b, a) == g->hom(b, a));
        for (MorId f = 0; f < g->morphism_count(); ++f) {
            CHECK(p.tgt_obj(f) == g->src(f));
            CHECK(p.src_obj(f) == g->tgt(f));
            CHECK(p.name(f) == g->name_of(f));
        }
        for (MorId al = 0; al < g->morphism_count(); ++al)
            for (MorId f = 0; f < g->morphism_count(); ++f) {
                if (g->composable(al, f)) CHECK(p.act_left(al, f) == g->compose(al, f));
                if (g->composable(f, al)) CHECK(p.act_right(f, al) == g->compose(f, al));
            }
    }
}

TEST_CASE("builder rejects ill-typed and lawless action tables") {
    const GroupoidPtr c2 = cyclic_groupoid(2);
    const MorId e = 0, t = 1;

    const auto fresh = [&] {
        Profunctor::Builder b(c2, c2);
        for (int i = 0; i < 3; ++i) b.add_element(0, 0, "x" + std::to_string(i));
        return b;
    };
    const auto set_perm = [&](Profunctor::Builder& b, bool left, MorId m,
                              const std::vector<int>& perm) {
        for (int i = 0; i < 3; ++i)
            if (left)
                b.set_left(m, i, perm[static_cast<std::size_t>(i)]);
            else
                b.set_right(perm[static_cast<std::size_t>(i)], m, i);
    };

    SUBCASE("a lawful table builds") {
        auto b = fresh();
        set_perm(b, true, e, {0, 1, 2});
        set_perm(b, false, e, {0, 1, 2});
        set_perm(b, true, t, {1, 0, 2});
        set_perm(b, false, t, {1, 0, 2});
        const Profunctor p = b.build(true);
        CHECK(p.act_left(t, 0) == 1);
        CHECK(p.act_right(2, t) == 2);
    }
    SUBCASE("non-commuting left and right actions are rejected") {
        auto b = fresh();
        set_perm(b, true, e, {0, 1, 2});
        set_perm(b, false, e, {0, 1, 2});
        set_perm(b, true, t, {1, 0, 2});   // swaps 0,1
        set_perm(b, false, t, {0, 2, 1});  // swaps 1,2
        CHECK_THROWS_WITH_AS(b.build(true), doctest::Contains("commute"), Error);
    }
    SUBCASE("a left action breaking the involution is rejected") {
        auto b = fresh();
        set_perm(b, true, e, {0, 1, 2});
        set_perm(b, false, e, {0, 1, 2});
        set_perm(b, true, t, {1, 2, 0});  // 3-cycle, but t after t is the identity
        set_perm(b, false, t, {0, 1, 2});
        CHECK_THROWS_WITH_AS(b.build(true), doctest::Contains("functorial"), Error);
    }
    SUBCASE("identities must act trivially") {
        auto b = fresh();
        set_perm(b, true, e, {1, 0, 2});
        set_perm(b, false, e, {0, 1, 2});
        set_perm(b, true, t, {0, 1, 2});
        set_perm(b, false, t, {0, 1, 2});
        CHECK_THROWS_AS(b.build(true), Error);
    }
    SUBCASE("missing entries fail totality") {
        auto b = fresh();
        set_perm(b, true, e, {0, 1, 2});
        set_perm(b, false, e, {0, 1, 2});
        set_perm(b, false, t, {0, 1, 2});
        b.set_left(t, 0, 0);
        b.set_left(t, 1, 1);  // element 2 left out
        CHECK_THROWS_WITH_AS(b.build(true), doctest::Contains("undefined"), Error);
    }
    SUBCASE("conflicting assignments are rejected at set time") {
        auto b = fresh();
        b.set_left(t, 0, 1);
        CHECK_THROWS_WITH_AS(b.set_left(t, 0, 2), doctest::Contains("twice"), Error);
    }
    SUBCASE("results landing in the wrong cell are rejected at set time") {
        const GroupoidPtr i2 = iso2_groupoid();
        Profunctor::Builder b(i2, i2);
        const ElemId x = b.add_element(0, 0, "x");
        b.add_element(0, 1, "y");
        const MorId f = i2->hom(0, 1)[0];  // crosses components
        CHECK_THROWS_WITH_AS(b.set_left(f, x, x), doctest::Contains("wrong cell"), Error);
        CHECK_THROWS_AS(b.set_left(i2->hom(1, 0)[0], x, x), Error);  // does not start at 0
    }
}

TEST_CASE("coend composition matches the naive gluing partition on seeded inputs") {
    const GroupoidPtr c2 = cyclic_groupoid(2);
    const GroupoidPtr c3 = cyclic_groupoid(3);
    const GroupoidPtr c6 = cyclic_groupoid(6);
    const std::vector<std::array<GroupoidPtr, 3>> shapes = {
        {c2, c3, c2}, {c3, c3, c3}, {c2, c6, c3}, {c6, c2, c6}};
    int checked = 0;
    for (std::uint32_t seed = 0; seed < 25; ++seed) {
        for (const auto& [a, b, c] : shapes) {
            std::mt19937 rng(seed * 977u + 13u);
            const Profunctor p = random_orbit_profunctor(a, b, rng);
            const Profunctor q = random_orbit_profunctor(b, c, rng);
            const int nq = q.element_count();
            const auto rel = naive_glue_pairs(p, q);
            const auto labels =
                oracle::naive_partition_labels(p.element_count() * nq, rel);
            const ComposeResult res = compose_profunctors(p, q);
            REQUIRE(res.composite.element_count() ==
                    oracle::naive_partition_classes(p.element_count() * nq, rel));
            // identical partitions, not just identical counts
            for (ElemId x = 0; x < p.element_count(); ++x)
                for (ElemId y = 0; y < nq; ++y)
                    for (ElemId x2 = 0; x2 < p.element_count(); ++x2)
                        for (ElemId y2 = 0; y2 < nq; ++y2) {
                            const bool same_lib =
                                res.class_of(x, y) == res.class_of(x2, y2);
                            const bool same_naive =
                                labels[static_cast<std::size_t>(x * nq + y)] ==
                                labels[static_cast<std::size_t>(x2 * nq + y2)];
                            if (same_lib != same_naive) REQUIRE(same_lib == same_naive);
                        }
            // the class map is equivariant for both outer actions
            const Groupoid& A = *a;
            const Groupoid& C = *c;
            for (ElemId x = 0; x < p.element_count(); ++x)
                for (ElemId y = 0; y < nq; ++y) {
                    for (MorId al = 0; al < A.morphism_count(); ++al)
                        CHECK(res.class_of(p.act_left(al, x), y) ==
                              res.composite.act_left(al, res.class_of(x, y)));
                    for (MorId ga = 0; ga < C.morphism_count(); ++ga)
                        CHECK(res.class_of(x, q.act_right(y, ga)) ==
                              res.composite.act_right(res.class_of(x, y), ga));
                }
            ++checked;
        }
    }
    CHECK(checked == 100);
}

TEST_CASE("composite witnesses are the least representative of their class") {
    std::mt19937 rng(4242);
    const GroupoidPtr mid = cyclic_groupoid(2);
    const Profunctor p = random_orbit_profunctor(cyclic_groupoid(6), mid, rng);
    const Profunctor q = random_orbit_profunctor(mid, cyclic_groupoid(3), rng);
    const ComposeResult res = compose_profunctors(p, q);
    for (const auto& [pq, cls] : res.pair_class) {
        const auto [wb, wx, wy] = res.witness[static_cast<std::size_t>(cls)];
        const auto key = std::tuple(p.tgt_obj(pq.first), pq.first, pq.second);
        CHECK(std::tuple(wb, wx, wy) <= key);
        CHECK(res.class_of(wx, wy) == cls);
    }
}

TEST_CASE("hom profunctors are two-sided units for composition") {
    std::mt19937 rng(7);
    check_unit_isos(random_orbit_profunctor(cyclic_groupoid(2), cyclic_groupoid(3), rng));
    check_unit_isos(random_orbit_profunctor(cyclic_groupoid(6), cyclic_groupoid(6), rng));
    check_unit_isos(identity_profunctor(iso2_groupoid()));
    check_unit_isos(identity_profunctor(s3_groupoid()));
}

TEST_CASE("composition is associative up to the canonical class bijection") {
    const GroupoidPtr a = cyclic_groupoid(2);
    const GroupoidPtr b = cyclic_groupoid(3);
    const GroupoidPtr c = cyclic_groupoid(2);
    const GroupoidPtr d = cyclic_groupoid(3);
    for (std::uint32_t seed : {1u, 2u, 3u, 9u}) {
        std::mt19937 rng(seed);
        const Profunctor p = random_orbit_profunctor(a, b, rng);
        const Profunctor q = random_orbit_profunctor(b, c, rng);
        const Profunctor r = random_orbit_profunctor(c, d, rng);
        const ComposeResult pq = compose_profunctors(p, q);
        const ComposeResult qr = compose_profunctors(q, r);
        const ComposeResult lhs = compose_profunctors(pq.composite, r);
        const ComposeResult rhs = compose_profunctors(p, qr.composite);
        REQUIRE(lhs.composite.element_count() == rhs.composite.element_count());

        std::map<ElemId, ElemId> iso;
        for (ElemId x = 0; x < p.element_count(); ++x)
            for (ElemId y = 0; y < q.element_count(); ++y)
                for (ElemId z = 0; z < r.element_count(); ++z) {
                    const ElemId l = lhs.class_of(pq.class_of(x, y), z);
                    const ElemId rr = rhs.class_of(x, qr.class_of(y, z));
                    const auto [it, fresh_insert] = iso.emplace(l, rr);
                    if (!fresh_insert) CHECK(it->second == rr);
                }
        REQUIRE(static_cast<int>(iso.size()) == lhs.composite.element_count());
        std::set<ElemId> image;
        for (const auto& [l, rr] : iso) image.insert(rr);
        CHECK(static_cast<int>(image.size()) == rhs.composite.element_count());
        for (const auto& [l, rr] : iso) {
            for (MorId al = 0; al < a->morphism_count(); ++al)
                CHECK(iso.at(lhs.composite.act_left(al, l)) ==
                      rhs.composite.act_left(al, rr));
            for (MorId ga = 0; ga < d->morphism_count(); ++ga)
                CHECK(iso.at(lhs.composite.act_right(l, ga)) ==
                      rhs.composite.act_right(rr, ga));
        }
    }
}

TEST_CASE("composing with an empty profunctor yields an empty composite") {
    std::mt19937 rng(11);
    const GroupoidPtr b = cyclic_groupoid(3);
    const Profunctor p = random_orbit_profunctor(cyclic_groupoid(2), b, rng);
    Profunctor::Builder eb(b, cyclic_groupoid(2));
    const Profunctor empty = eb.build(true);
    const ComposeResult res = compose_profunctors(p, empty);
    CHECK(res.composite.element_count() == 0);
    CHECK_THROWS_AS(res.class_of(0, 0), Error);
    CHECK_THROWS_AS(compose_profunctors(empty, empty), Error);  // target != source
}

TEST_CASE("dual swaps the two actions and is an involution") {
    std::mt19937 rng(21);
    const std::vector<Profunctor> probes = {
        random_orbit_profunctor(cyclic_groupoid(2), cyclic_groupoid(3), rng),
        identity_profunctor(iso2_groupoid())};
    for (const Profunctor& p : probes) {
        const Profunctor d = dual_profunctor(p);
        CHECK(d.source() == opposite(p.target()));
        CHECK(d.target() == opposite(p.source()));
        REQUIRE(d.element_count() == p.element_count());
        for (ElemId e = 0; e < p.element_count(); ++e) {
            CHECK(d.src_obj(e) == p.tgt_obj(e));
            CHECK(d.tgt_obj(e) == p.src_obj(e));
            CHECK(d.name(e) == p.name(e));
        }
        for (ElemId e = 0; e < p.element_count(); ++e) {
            const Groupoid& B = *p.target();
            const Groupoid& A = *p.source();
            for (MorId be = 0; be < B.morphism_count(); ++be)
                if (B.tgt(be) == p.tgt_obj(e)) CHECK(d.act_left(be, e) == p.act_right(e, be));
            for (MorId al = 0; al < A.morphism_count(); ++al)
                if (A.src(al) == p.src_obj(e)) CHECK(d.act_right(e, al) == p.act_left(al, e));
        }
        const Profunctor dd = dual_profunctor(d);
        CHECK(dd.source() == p.source());  // pointer-identical via the opposite cache
        CHECK(dd.target() == p.target());
        REQUIRE(dd.element_count() == p.element_count());
        for (ElemId e = 0; e < p.element_count(); ++e) {
            const Groupoid& A = *p.source();
            const Groupoid& B = *p.target();
            for (MorId al = 0; al < A.morphism_count(); ++al)
                if (A.src(al) == p.src_obj(e)) CHECK(dd.act_left(al, e) == p.act_left(al, e));
            for (MorId be = 0; be < B.morphism_count(); ++be)
                if (B.tgt(be) == p.tgt_obj(e)) CHECK(dd.act_right(e, be) == p.act_right(e, be));
        }
    }
}

TEST_CASE("tensor of hom profunctors is the hom profunctor of the product") {
    const std::vector<std::pair<GroupoidPtr, GroupoidPtr>> bases = {
        {cyclic_groupoid(2), cyclic_groupoid(3)}, {iso2_groupoid(), cyclic_groupoid(2)}};
    for (const auto& [ga, gb] : bases) {
        const TensorResult t = tensor_profunctors(identity_profunctor(ga),
                                                  identity_profunctor(gb));
        const ProductStructure& ss = t.source_structure;
        const Groupoid& prod = *ss.result;
        REQUIRE(t.tensor.element_count() == prod.morphism_count());
        // element (f, g) corresponds to the product morphism; actions must
        // match composition there.
        std::vector<MorId> mor_of(static_cast<std::size_t>(t.tensor.element_count()));
        for (ElemId e = 0; e < t.tensor.element_count(); ++e) {
            const auto [f, g] = t.components[static_cast<std::size_t>(e)];
            mor_of[static_cast<std::size_t>(e)] = ss.pair_mor(f, g);
            CHECK(t.pair_elem(f, g) == e);
        }
        for (ElemId e = 0; e < t.tensor.element_count(); ++e) {
            const MorId m = mor_of[static_cast<std::size_t>(e)];
            for (MorId n = 0; n < prod.morphism_count(); ++n) {
                if (prod.composable(n, m))
                    CHECK(mor_of[static_cast<std::size_t>(t.tensor.act_left(n, e))] ==
                          prod.compose(n, m));
                if (prod.composable(m, n))
                    CHECK(mor_of[static_cast<std::size_t>(t.tensor.act_right(e, n))] ==
                          prod.compose(m, n));
            }
        }
    }
}

TEST_CASE("hom profunctor stabilization reduces to union containment") {
    const GroupoidPtr c6 = cyclic_groupoid(6);
    const Profunctor idp = identity_profunctor(c6);
    const std::vector<Kit> kits = enumerate_boolean_kits(c6);
    REQUIRE(kits.size() == 4);
    for (const Kit& ks : kits)
        for (const Kit& kt : kits) {
            const bool expect = mask_subset(ks.union_mask(0), kt.union_mask(0));
            const StabilizationReport rep = is_stabilized(idp, ks, kt);
            CHECK(rep.stabilized == expect);
            if (!rep.stabilized) {
                // replay the recorded witness
                CHECK(idp.act_right(idp.act_left(rep.alpha, rep.elem), rep.beta) == rep.elem);
                if (rep.forward_failed) {
                    CHECK(ks.union_contains(rep.alpha));
                    CHECK_FALSE(kt.union_contains(rep.beta));
                }
                if (rep.backward_failed) {
                    CHECK(orthogonal_kit(kt).union_contains(rep.beta));
                    CHECK_FALSE(orthogonal_kit(ks).union_contains(rep.alpha));
                }
                CHECK((rep.forward_failed || rep.backward_failed));
                CHECK_FALSE(rep.detail.empty());
            }
        }
    CHECK_THROWS_AS(is_stabilized(idp, Kit::trivial(cyclic_groupoid(6)), kits[0]), Error);
}

TEST_CASE("free single orbits are stabilized for every kit pair") {
    // A free transitive action: the full coset space of the trivial subgroup.
    // Only the identity pair fixes an element, so stabilization is vacuous.
    const GroupoidPtr a = cyclic_groupoid(6);
    const GroupoidPtr b = cyclic_groupoid(2);
    const ProductStructure ps = product(a, b);
    Profunctor::Builder bu(a, b);
    const int n = ps.result->morphism_count();
    for (int i = 0; i < n; ++i) bu.add_element(0, 0, "z" + std::to_string(i));
    for (MorId al = 0; al < a->morphism_count(); ++al)
        for (MorId z = 0; z < n; ++z)
            bu.set_left(al, z, ps.result->compose(ps.pair_mor(al, b->identity(0)), z));
    for (MorId be = 0; be < b->morphism_count(); ++be)
        for (MorId z = 0; z < n; ++z)
            bu.set_right(z, be, ps.result->compose(ps.pair_mor(a->identity(0), b->inverse(be)), z));
    const Profunctor reg = bu.build(true);
    for (const Kit& ks : enumerate_boolean_kits(a))
        for (const Kit& kt : enumerate_boolean_kits(b))
            CHECK(is_stabilized(reg, ks, kt).stabilized);
}

TEST_CASE("random orbit profunctors are deterministic lawful coset actions") {
    const GroupoidPtr a = cyclic_groupoid(6);
    const GroupoidPtr b = cyclic_groupoid(3);
    for (std::uint32_t seed : {0u, 5u, 77u}) {
        std::mt19937 r1(seed), r2(seed);
        const Profunctor p1 = random_orbit_profunctor(a, b, r1);
        const Profunctor p2 = random_orbit_profunctor(a, b, r2);
        REQUIRE(p1.element_count() == p2.element_count());
        CHECK(p1.element_count() <= 8);
        CHECK(p1.element_count() >= 1);
        for (ElemId e = 0; e < p1.element_count(); ++e) {
            CHECK(p1.name(e) == p2.name(e));
            for (MorId al = 0; al < a->morphism_count(); ++al)
                CHECK(p1.act_left(al, e) == p2.act_left(al, e));
            for (MorId be = 0; be < b->morphism_count(); ++be)
                CHECK(p1.act_right(e, be) == p2.act_right(e, be));
        }
        // each generator acts by a permutation of the elements
        for (MorId al = 0; al < a->morphism_count(); ++al) {
            std::set<ElemId> img;
            for (ElemId e = 0; e < p1.element_count(); ++e) img.insert(p1.act_left(al, e));
            CHECK(static_cast<int>(img.size()) == p1.element_count());
        }
    }
}

TEST_CASE("the symmetric lift of a hom profunctor is the hom profunctor of the lift") {
    const GroupoidPtr c2 = cyclic_groupoid(2);
    const SymGroupoidPtr sym = materialize_sym(c2, 3);
    const Profunctor base = identity_profunctor(c2);
    const SymLiftResult lift = sym_lift(base, sym, sym);
    const Groupoid& carrier = *sym->carrier;
    REQUIRE(lift.lift.element_count() == carrier.morphism_count());

    // a lifted element (phi, parts) in cell (v, u) is precisely a word
    // morphism v -> u of the carrier
    std::vector<MorId> mor_of(static_cast<std::size_t>(lift.lift.element_count()));
    for (ObjId v = 0; v < carrier.object_count(); ++v)
        for (ObjId u = 0; u < carrier.object_count(); ++u)
            for (ElemId e : lift.lift.cell(v, u)) {
                const auto& view = lift.views[static_cast<std::size_t>(e)];
                const MorId m = sym->morphism_id(
                    v, SymMorphismV{view.phi, std::vector<MorId>(view.parts.begin(),
                                                                 view.parts.end())});
                mor_of[static_cast<std::size_t>(e)] = m;
                CHECK(carrier.src(m) == v);
                CHECK(carrier.tgt(m) == u);
                CHECK(lift.elem_id(v, u, view) == e);
            }
    std::set<MorId> image(mor_of.begin(), mor_of.end());
    REQUIRE(static_cast<int>(image.size()) == carrier.morphism_count());

    // both lifted actions agree with carrier composition through that bijection
    for (ElemId e = 0; e < lift.lift.element_count(); ++e) {
        const MorId m = mor_of[static_cast<std::size_t>(e)];
        for (MorId g = 0; g < carrier.morphism_count(); ++g) {
            if (carrier.composable(g, m))
                CHECK(mor_of[static_cast<std::size_t>(lift.lift.act_left(g, e))] ==
                      carrier.compose(g, m));
            if (carrier.composable(m, g))
                CHECK(mor_of[static_cast<std::size_t>(lift.lift.act_right(e, g))] ==
                      carrier.compose(m, g));
        }
    }
}

TEST_CASE("symmetric lifts of orbit profunctors act by inverse-compatible permutations") {
    std::mt19937 rng(3);
    const GroupoidPtr c2 = cyclic_groupoid(2);
    const GroupoidPtr one = one_groupoid();
    const Profunctor p = random_orbit_profunctor(c2, one, rng);
    const SymLiftResult lift = sym_lift(p, materialize_sym(c2, 2), materialize_sym(one, 2));
    const Profunctor& lp = lift.lift;
    const Groupoid& sc = *lift.source_sym->carrier;
    const Groupoid& tc = *lift.target_sym->carrier;

    // cell sizes: n! * |P|^n elements against the unique length-n target word
    const int cnt = p.element_count();
    for (ObjId v = 0; v < tc.object_count(); ++v)
        for (ObjId u = 0; u < sc.object_count(); ++u) {
            const int n = lift.source_sym->object_view(u).length();
            if (lift.target_sym->object_view(v).length() != n) {
                CHECK(lp.cell(v, u).empty());
                continue;
            }
            int expect = 1;
            for (int i = 0; i < n; ++i) expect *= (i + 1);  // n!
            for (int i = 0; i < n; ++i) expect *= cnt;
            CHECK(static_cast<int>(lp.cell(v, u).size()) == expect);
        }

    for (ElemId e = 0; e < lp.element_count(); ++e) {
        for (MorId g = 0; g < sc.morphism_count(); ++g) {
            if (sc.src(g) != lp.src_obj(e)) continue;
            CHECK(lp.act_left(sc.inverse(g), lp.act_left(g, e)) == e);
        }
        for (MorId g = 0; g < tc.morphism_count(); ++g) {
            if (tc.tgt(g) != lp.tgt_obj(e)) continue;
            CHECK(lp.act_right(lp.act_right(e, g), tc.inverse(g)) == e);
        }
    }
}

TEST_CASE("composites of stabilized profunctors stay stabilized") {
    const CompositionCheck check = composition_stabilized_check(
        cyclic_groupoid(2), cyclic_groupoid(3), cyclic_groupoid(2), 2026, 5);
    CHECK(check.trials == 5);
    CHECK(check.failures == 0);
    CHECK(check.first_failure.empty());
}
