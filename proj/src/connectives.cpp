#include "kitbench/connectives.hpp"

#include <algorithm>

#include "kitbench/errors.hpp"
#include "kitbench/subgroups.hpp"

namespace kitbench {

namespace {

void require_boolean(const Kit& k, const char* op) {
    if (k.boolean_known() == Known::yes) return;
    if (k.has_explicit_family() && is_boolean(k).boolean) return;
    fail(ErrorKind::NotBoolean, std::string(op) + " needs Boolean kits");
}

/// Mask of End(x) x End(y) pairs (local to the product's endo bucket) whose
/// components satisfy `pred`.
template <typename Pred>
Mask pairwise_mask(const ProductStructure& ps, ObjId x, ObjId y, Pred pred) {
    const auto& ea = ps.left->endos(x);
    const auto& eb = ps.right->endos(y);
    ObjId p = ps.pair_obj(x, y);
    const auto& ep = ps.result->endos(p);
    Mask m = make_mask(static_cast<int>(ep.size()));
    for (int i = 0; i < static_cast<int>(ep.size()); ++i) {
        auto [f, g] = ps.mor_pair(ep[static_cast<std::size_t>(i)]);
        // positions of the components within their own endo buckets
        int ia = static_cast<int>(std::lower_bound(ea.begin(), ea.end(), f) - ea.begin());
        int ib = static_cast<int>(std::lower_bound(eb.begin(), eb.end(), g) - eb.begin());
        if (pred(ia, ib)) mask_set(m, i);
    }
    return m;
}

} // namespace

KitOnProduct tensor_kits(const Kit& a, const Kit& b) {
    require_boolean(a, "tensor");
    require_boolean(b, "tensor");
    auto ps = product(a.base(), b.base());
    std::vector<Mask> masks;
    for (ObjId x = 0; x < a.base()->object_count(); ++x)
        for (ObjId y = 0; y < b.base()->object_count(); ++y) {
            const Mask& ma = a.union_mask(x);
            const Mask& mb = b.union_mask(y);
            Mask prod = pairwise_mask(ps, x, y, [&](int ia, int ib) {
                return mask_test(ma, ia) && mask_test(mb, ib);
            });
            auto table = shared_endo_table(*ps.result, ps.pair_obj(x, y));
            masks.push_back(phi_saturate(*table, prod));
        }
    Kit k = Kit::from_verified_masks(ps.result, std::move(masks), Known::yes);
    return {std::move(ps), std::move(k)};
}

KitOnProduct par_kits(const Kit& a, const Kit& b) {
    require_boolean(a, "par");
    require_boolean(b, "par");
    auto oa = orthogonal_kit(a);
    auto ob = orthogonal_kit(b);
    auto ps = product(a.base(), b.base());
    std::vector<Mask> masks;
    for (ObjId x = 0; x < a.base()->object_count(); ++x)
        for (ObjId y = 0; y < b.base()->object_count(); ++y) {
            const Mask& ma = oa.union_mask(x);
            const Mask& mb = ob.union_mask(y);
            Mask prod = pairwise_mask(ps, x, y, [&](int ia, int ib) {
                return mask_test(ma, ia) && mask_test(mb, ib);
            });
            auto table = shared_endo_table(*ps.result, ps.pair_obj(x, y));
            masks.push_back(orth_union_mask(*table, prod));
        }
    Kit k = Kit::from_verified_masks(ps.result, std::move(masks), Known::yes);
    return {std::move(ps), std::move(k)};
}

KitOnProduct limp_kits(const Kit& a, const Kit& b) {
    require_boolean(a, "limp");
    require_boolean(b, "limp");
    auto oa = orthogonal_kit(a);
    auto ob = orthogonal_kit(b);
    auto ps = product(opposite(a.base()), b.base());
    std::vector<Mask> masks;
    for (ObjId x = 0; x < a.base()->object_count(); ++x)
        for (ObjId y = 0; y < b.base()->object_count(); ++y) {
            const Mask& ma = a.union_mask(x);
            const Mask& mb = b.union_mask(y);
            const Mask& oma = oa.union_mask(x);
            const Mask& omb = ob.union_mask(y);
            Mask cond = pairwise_mask(ps, x, y, [&](int ia, int ib) {
                bool push = !mask_test(ma, ia) || mask_test(mb, ib);
                bool pull = !mask_test(omb, ib) || mask_test(oma, ia);
                return push && pull;
            });
            auto table = shared_endo_table(*ps.result, ps.pair_obj(x, y));
            masks.push_back(cyclic_interior(*table, cond));
        }
    Kit k = Kit::from_verified_masks(ps.result, std::move(masks), Known::yes);
    return {std::move(ps), std::move(k)};
}

namespace {

KitOnCoproduct biproduct_kits(const Kit& a, const Kit& b) {
    auto cs = coproduct(a.base(), b.base());
    Known flag = (a.boolean_known() == Known::yes && b.boolean_known() == Known::yes)
                     ? Known::yes
                     : Known::unknown;
    std::vector<Mask> masks(static_cast<std::size_t>(cs.result->object_count()));
    for (ObjId x = 0; x < a.base()->object_count(); ++x)
        masks[static_cast<std::size_t>(cs.inj_obj(false, x))] = a.union_mask(x);
    for (ObjId y = 0; y < b.base()->object_count(); ++y)
        masks[static_cast<std::size_t>(cs.inj_obj(true, y))] = b.union_mask(y);

    if (flag == Known::yes) {
        Kit k = Kit::from_verified_masks(cs.result, std::move(masks), Known::yes);
        return {std::move(cs), std::move(k)};
    }
    // Explicit families: translate every subgroup into the sum's ids.
    std::vector<std::vector<Subgroup>> family(
        static_cast<std::size_t>(cs.result->object_count()));
    auto translate = [&](const Kit& k, bool right_side) {
        for (ObjId x = 0; x < k.base()->object_count(); ++x) {
            ObjId nx = cs.inj_obj(right_side, x);
            for (const auto& h : k.family(x)) {
                Subgroup moved{nx, {}};
                for (MorId e : h.elements) moved.elements.push_back(cs.inj_mor(right_side, e));
                family[static_cast<std::size_t>(nx)].push_back(std::move(moved));
            }
        }
    };
    translate(a, false);
    translate(b, true);
    Kit k = Kit::from_family(cs.result, std::move(family));
    return {std::move(cs), std::move(k)};
}

} // namespace

KitOnCoproduct with_kits(const Kit& a, const Kit& b) { return biproduct_kits(a, b); }
KitOnCoproduct plus_kits(const Kit& a, const Kit& b) { return biproduct_kits(a, b); }

Kit dual_kit(const Kit& k) { return orthogonal_kit(k); }

} // namespace kitbench
