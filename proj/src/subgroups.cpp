#include "kitbench/subgroups.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace kitbench {

int GroupTable::power(int i, int k) const {
    int acc = identity;
    for (int s = 0; s < k; ++s) acc = at(i, acc);
    return acc;
}

int GroupTable::element_order(int i) const {
    int acc = i;
    int k = 1;
    while (acc != identity) {
        acc = at(i, acc);
        ++k;
    }
    return k;
}

GroupTable group_table(int n, int identity_index,
                       const std::function<int(int, int)>& compose) {
    GroupTable t;
    t.n = n;
    t.identity = identity_index;
    t.mult.resize(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) t.mult[static_cast<std::size_t>(i) * n + j] = compose(i, j);
    t.inv.assign(static_cast<std::size_t>(n), -1);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (t.at(i, j) == identity_index && t.at(j, i) == identity_index) {
                t.inv[static_cast<std::size_t>(i)] = j;
                break;
            }
    t.abelian = true;
    for (int i = 0; i < n && t.abelian; ++i)
        for (int j = i + 1; j < n; ++j)
            if (t.at(i, j) != t.at(j, i)) {
                t.abelian = false;
                break;
            }
    return t;
}

GroupTable endo_table(const Groupoid& g, ObjId a) {
    const auto& elems = g.endos(a);
    const int n = static_cast<int>(elems.size());
    int id_idx = 0;
    for (int i = 0; i < n; ++i)
        if (elems[static_cast<std::size_t>(i)] == g.identity(a)) id_idx = i;
    return group_table(n, id_idx, [&](int i, int j) {
        MorId m = g.compose(elems[static_cast<std::size_t>(i)], elems[static_cast<std::size_t>(j)]);
        auto it = std::lower_bound(elems.begin(), elems.end(), m);
        return static_cast<int>(it - elems.begin());
    });
}

std::vector<int> subgroup_closure_local(const GroupTable& t, std::vector<int> gens) {
    std::vector<char> in(static_cast<std::size_t>(t.n), 0);
    std::vector<int> work;
    auto push = [&](int x) {
        if (!in[static_cast<std::size_t>(x)]) {
            in[static_cast<std::size_t>(x)] = 1;
            work.push_back(x);
        }
    };
    push(t.identity);
    for (int gn : gens) push(gn);
    for (std::size_t head = 0; head < work.size(); ++head) {
        int x = work[head];
        push(t.inv[static_cast<std::size_t>(x)]);
        for (std::size_t k = 0; k < work.size(); ++k) {
            push(t.at(x, work[k]));
            push(t.at(work[k], x));
        }
    }
    std::sort(work.begin(), work.end());
    return work;
}

namespace {

Mask locals_to_mask(int n, const std::vector<int>& locals) {
    Mask m = make_mask(n);
    for (int x : locals) mask_set(m, x);
    return m;
}

std::vector<int> mask_to_locals(int n, const Mask& m) {
    std::vector<int> out;
    for (int i = 0; i < n; ++i)
        if (mask_test(m, i)) out.push_back(i);
    return out;
}

/// Join of two subgroups given as element lists; abelian groups multiply the
/// sets directly, the rest run the generic closure.
std::vector<int> join_subgroups(const GroupTable& t, const std::vector<int>& h,
                                const std::vector<int>& k) {
    if (t.abelian) {
        Mask m = make_mask(t.n);
        for (int x : h)
            for (int y : k) mask_set(m, t.at(x, y));
        return mask_to_locals(t.n, m);
    }
    std::vector<int> gens = h;
    gens.insert(gens.end(), k.begin(), k.end());
    return subgroup_closure_local(t, std::move(gens));
}

} // namespace

std::vector<std::vector<int>> all_subgroups(const GroupTable& t, int max_order) {
    if (t.n > max_order)
        fail(ErrorKind::GroupTooLarge,
             "group of order " + std::to_string(t.n) + " exceeds the bound " +
                 std::to_string(max_order));

    std::set<std::vector<int>> found;
    std::vector<std::vector<int>> work;
    auto add = [&](std::vector<int> s) {
        if (found.insert(s).second) work.push_back(std::move(s));
    };

    add({t.identity});
    for (int i = 0; i < t.n; ++i) add(subgroup_closure_local(t, {i}));

    // Pairwise joins to a fixpoint; only new entries are joined against all.
    for (std::size_t head = 0; head < work.size(); ++head) {
        // Copy: `work` grows during iteration.
        std::vector<int> current = work[head];
        Mask cur_mask = locals_to_mask(t.n, current);
        for (std::size_t other = 0; other < head; ++other) {
            const auto& o = work[other];
            Mask o_mask = locals_to_mask(t.n, o);
            if (mask_subset(o_mask, cur_mask) || mask_subset(cur_mask, o_mask)) continue;
            add(join_subgroups(t, current, o));
        }
    }

    std::vector<std::vector<int>> out(found.begin(), found.end());
    return out;
}

int SubgroupLattice::local_index(MorId m) const {
    auto it = std::lower_bound(endo_elems.begin(), endo_elems.end(), m);
    if (it == endo_elems.end() || *it != m) return -1;
    return static_cast<int>(it - endo_elems.begin());
}

int SubgroupLattice::find(const Subgroup& s) const {
    auto it = std::lower_bound(groups.begin(), groups.end(), s);
    if (it == groups.end() || !(*it == s)) return -1;
    return static_cast<int>(it - groups.begin());
}

Mask SubgroupLattice::to_mask(const Subgroup& s) const {
    Mask m = make_mask(static_cast<int>(endo_elems.size()));
    for (MorId e : s.elements) {
        int li = local_index(e);
        if (li < 0)
            fail(ErrorKind::NotEndomorphism,
                 "morphism " + std::to_string(e) + " is not an endomorphism of object " +
                     std::to_string(object));
        mask_set(m, li);
    }
    return m;
}

Subgroup SubgroupLattice::from_local(const std::vector<int>& locals) const {
    Subgroup s;
    s.base_object = object;
    for (int li : locals) s.elements.push_back(endo_elems[static_cast<std::size_t>(li)]);
    std::sort(s.elements.begin(), s.elements.end());
    return s;
}

std::shared_ptr<const SubgroupLattice> subgroup_lattice(const Groupoid& g, ObjId a,
                                                        int max_order) {
    if (auto cached = g.cached_lattice(a)) return cached;

    auto lat = std::make_shared<SubgroupLattice>();
    lat->object = a;
    lat->endo_elems = g.endos(a);
    lat->table = endo_table(g, a);
    auto locals = all_subgroups(lat->table, max_order);
    for (const auto& ls : locals) lat->groups.push_back(lat->from_local(ls));
    std::sort(lat->groups.begin(), lat->groups.end());
    for (const auto& s : lat->groups) lat->masks.push_back(lat->to_mask(s));

    g.cache_lattice(a, lat);
    return g.cached_lattice(a);
}

std::shared_ptr<const GroupTable> shared_endo_table(const Groupoid& g, ObjId a) {
    if (auto cached = g.cached_endo_table(a)) return cached;
    auto table = std::make_shared<GroupTable>(endo_table(g, a));
    g.cache_endo_table(a, table);
    return g.cached_endo_table(a);
}

Subgroup endo_group(const Groupoid& g, ObjId a) {
    Subgroup s;
    s.base_object = a;
    s.elements = g.endos(a);
    return s;
}

Subgroup subgroup_closure(const Groupoid& g, ObjId a, const std::vector<MorId>& gens) {
    for (MorId m : gens)
        if (g.src(m) != a || g.tgt(m) != a)
            fail(ErrorKind::NotEndomorphism,
                 "generator " + std::to_string(m) + " is not an endomorphism of object " +
                     std::to_string(a));
    const auto& elems = g.endos(a);
    GroupTable t = endo_table(g, a);
    std::vector<int> local_gens;
    for (MorId m : gens) {
        auto it = std::lower_bound(elems.begin(), elems.end(), m);
        local_gens.push_back(static_cast<int>(it - elems.begin()));
    }
    auto closure = subgroup_closure_local(t, std::move(local_gens));
    Subgroup s;
    s.base_object = a;
    for (int li : closure) s.elements.push_back(elems[static_cast<std::size_t>(li)]);
    std::sort(s.elements.begin(), s.elements.end());
    return s;
}

std::vector<Subgroup> enumerate_subgroups(const Groupoid& g, ObjId a, int max_order) {
    return subgroup_lattice(g, a, max_order)->groups;
}

Subgroup conjugate_subgroup(const Groupoid& g, const Subgroup& h, MorId alpha) {
    if (g.src(alpha) != h.base_object)
        fail(ErrorKind::TypeMismatch,
             "conjugator " + std::to_string(alpha) + " does not start at object " +
                 std::to_string(h.base_object));
    Subgroup out;
    out.base_object = g.tgt(alpha);
    MorId alpha_inv = g.inverse(alpha);
    for (MorId e : h.elements)
        out.elements.push_back(g.compose(g.compose(alpha, e), alpha_inv));
    std::sort(out.elements.begin(), out.elements.end());
    return out;
}

bool is_subgroup(const Groupoid& g, const Subgroup& h) {
    if (!std::is_sorted(h.elements.begin(), h.elements.end())) return false;
    if (std::adjacent_find(h.elements.begin(), h.elements.end()) != h.elements.end())
        return false;
    if (!h.contains(g.identity(h.base_object))) return false;
    for (MorId e : h.elements) {
        if (g.src(e) != h.base_object || g.tgt(e) != h.base_object) return false;
        if (!h.contains(g.inverse(e))) return false;
        for (MorId f : h.elements)
            if (!h.contains(g.compose(e, f))) return false;
    }
    return true;
}

} // namespace kitbench
