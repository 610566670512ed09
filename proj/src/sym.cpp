#include "kitbench/sym.hpp"

#include <algorithm>
#include <sstream>

#include "kitbench/errors.hpp"
#include "kitbench/util.hpp"

namespace kitbench {

// --- structural operations ----------------------------------------------------

SymMorphismV sym_identity(const Groupoid& base, const SymObjectV& u) {
    SymMorphismV f;
    f.perm = identity_perm(u.length());
    f.parts.reserve(u.items.size());
    for (ObjId a : u.items) f.parts.push_back(base.identity(a));
    return f;
}

SymMorphismV sym_compose(const Groupoid& base, const SymMorphismV& g, const SymMorphismV& f) {
    if (g.length() != f.length())
        fail(ErrorKind::TypeMismatch, "composing words of different lengths");
    SymMorphismV out;
    out.perm = compose_perm(g.perm, f.perm);
    out.parts.resize(f.parts.size());
    for (std::size_t i = 0; i < f.parts.size(); ++i)
        out.parts[i] =
            base.compose(g.parts[static_cast<std::size_t>(f.perm[i])], f.parts[i]);
    return out;
}

SymMorphismV sym_inverse(const Groupoid& base, const SymMorphismV& f) {
    SymMorphismV out;
    out.perm = invert_perm(f.perm);
    out.parts.resize(f.parts.size());
    for (std::size_t j = 0; j < f.parts.size(); ++j)
        out.parts[j] = base.inverse(f.parts[static_cast<std::size_t>(out.perm[j])]);
    return out;
}

SymObjectV sym_target(const Groupoid& base, const SymObjectV& u, const SymMorphismV& f) {
    SymObjectV v;
    v.items.resize(u.items.size());
    for (std::size_t i = 0; i < u.items.size(); ++i) {
        if (base.src(f.parts[i]) != u.items[i])
            fail(ErrorKind::TypeMismatch, "part does not start at the word's object");
        v.items[static_cast<std::size_t>(f.perm[i])] = base.tgt(f.parts[i]);
    }
    return v;
}

bool sym_valid(const Groupoid& base, const SymObjectV& u, const SymObjectV& v,
               const SymMorphismV& f) {
    const int n = u.length();
    if (v.length() != n || f.length() != n ||
        static_cast<int>(f.parts.size()) != n)
        return false;
    if (!is_permutation_vec(f.perm)) return false;
    for (int i = 0; i < n; ++i) {
        MorId p = f.parts[static_cast<std::size_t>(i)];
        if (p < 0 || p >= base.morphism_count()) return false;
        if (base.src(p) != u.items[static_cast<std::size_t>(i)]) return false;
        if (base.tgt(p) != v.items[static_cast<std::size_t>(f.perm[static_cast<std::size_t>(i)])])
            return false;
    }
    return true;
}

std::vector<SymMorphismV> sym_hom(const Groupoid& base, const SymObjectV& u,
                                  const SymObjectV& v) {
    std::vector<SymMorphismV> out;
    const int n = u.length();
    if (v.length() != n) return out;
    if (n == 0) {
        out.push_back(SymMorphismV{});
        return out;
    }
    for (const auto& perm : all_permutations(n)) {
        // per-position base hom sets under this permutation
        std::vector<const std::vector<MorId>*> choices(static_cast<std::size_t>(n));
        bool feasible = true;
        for (int i = 0; i < n && feasible; ++i) {
            const auto& h = base.hom(u.items[static_cast<std::size_t>(i)],
                                     v.items[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])]);
            if (h.empty()) feasible = false;
            choices[static_cast<std::size_t>(i)] = &h;
        }
        if (!feasible) continue;
        std::vector<std::size_t> digit(static_cast<std::size_t>(n), 0);
        while (true) {
            SymMorphismV f;
            f.perm = perm;
            f.parts.reserve(static_cast<std::size_t>(n));
            for (int i = 0; i < n; ++i)
                f.parts.push_back((*choices[static_cast<std::size_t>(i)])[digit[static_cast<std::size_t>(i)]]);
            out.push_back(std::move(f));
            int i = n - 1;
            while (i >= 0 && ++digit[static_cast<std::size_t>(i)] ==
                                 choices[static_cast<std::size_t>(i)]->size()) {
                digit[static_cast<std::size_t>(i)] = 0;
                --i;
            }
            if (i < 0) break;
        }
    }
    return out;
}

int cycle_order(const SymMorphismV& endo, int position) {
    return cycle_length(endo.perm, position);
}

MorId loop_endomorphism(const Groupoid& base, const SymObjectV& u, const SymMorphismV& endo,
                        int position) {
    if (position < 0 || position >= endo.length())
        fail(ErrorKind::IndexOutOfRange, "loop position out of range");
    MorId acc = endo.parts[static_cast<std::size_t>(position)];
    int j = endo.perm[static_cast<std::size_t>(position)];
    while (j != position) {
        acc = base.compose(endo.parts[static_cast<std::size_t>(j)], acc);
        j = endo.perm[static_cast<std::size_t>(j)];
    }
    if (base.src(acc) != u.items[static_cast<std::size_t>(position)])
        fail(ErrorKind::TypeMismatch, "endomorphism does not start at the given word");
    return acc;
}

// --- materialized layer --------------------------------------------------------

ObjId SymGroupoid::object_id(const SymObjectV& u) const {
    ObjId r = find_object(u);
    if (r == -1)
        fail(ErrorKind::UnknownObject, "word is not an object of this materialization");
    return r;
}

ObjId SymGroupoid::find_object(const SymObjectV& u) const {
    auto it = object_index_.find(u);
    return it == object_index_.end() ? -1 : it->second;
}

MorId SymGroupoid::morphism_id(ObjId src, const SymMorphismV& f) const {
    auto it = morphism_index_.find({src, f});
    if (it == morphism_index_.end())
        fail(ErrorKind::UnknownElement, "morphism view not present in this materialization");
    return it->second;
}

namespace {

std::string word_name(const Groupoid& base, const SymObjectV& u) {
    std::ostringstream os;
    os << "[";
    for (std::size_t i = 0; i < u.items.size(); ++i)
        os << (i ? "," : "") << base.object_name(u.items[i]);
    os << "]";
    return os.str();
}

std::string sym_mor_name(const Groupoid& base, const SymMorphismV& f) {
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < f.perm.size(); ++i) os << (i ? " " : "") << f.perm[i];
    os << "|";
    for (std::size_t i = 0; i < f.parts.size(); ++i)
        os << (i ? "," : "") << base.name_of(f.parts[i]);
    os << ")";
    return os.str();
}

} // namespace

std::shared_ptr<const SymGroupoid> materialize_sym(
    GroupoidPtr base, int max_length, std::size_t morphism_budget,
    const std::function<bool(const SymObjectV&)>& keep) {
    auto sg = std::make_shared<SymGroupoid>();
    sg->base = base;
    sg->max_length = max_length;

    // Words by length, lexicographic within a length.
    for (int len = 0; len <= max_length; ++len) {
        SymObjectV w;
        w.items.assign(static_cast<std::size_t>(len), 0);
        while (true) {
            if (len == 0 || base->object_count() > 0) {
                if (!keep || keep(w)) {
                    ObjId id = static_cast<ObjId>(sg->objects.size());
                    sg->objects.push_back(w);
                    sg->object_index_.emplace(w, id);
                }
            }
            if (len == 0) break;
            int i = len - 1;
            while (i >= 0 && w.items[static_cast<std::size_t>(i)] + 1 == base->object_count()) {
                w.items[static_cast<std::size_t>(i)] = 0;
                --i;
            }
            if (i < 0) break;
            ++w.items[static_cast<std::size_t>(i)];
        }
    }

    RawGroupoid raw;
    for (const auto& w : sg->objects) raw.object_names.push_back(word_name(*base, w));

    // Morphisms: all homs between stored words, ids in (src, tgt, hom order).
    std::map<std::pair<ObjId, ObjId>, std::vector<MorId>> hom_ids;
    for (ObjId s = 0; s < static_cast<ObjId>(sg->objects.size()); ++s) {
        for (ObjId t = 0; t < static_cast<ObjId>(sg->objects.size()); ++t) {
            auto homs = sym_hom(*base, sg->objects[static_cast<std::size_t>(s)],
                                sg->objects[static_cast<std::size_t>(t)]);
            if (homs.empty()) continue;
            auto& ids = hom_ids[{s, t}];
            for (auto& f : homs) {
                if (sg->morphisms.size() >= morphism_budget)
                    fail(ErrorKind::BudgetExceeded,
                         "symmetric construction exceeds the morphism budget of " +
                             std::to_string(morphism_budget));
                MorId id = static_cast<MorId>(sg->morphisms.size());
                raw.morphisms.push_back({sym_mor_name(*base, f), s, t});
                sg->morphism_index_.emplace(std::make_pair(s, f), id);
                sg->morphisms.push_back(std::move(f));
                ids.push_back(id);
            }
        }
    }

    // Identities.
    raw.identities.resize(sg->objects.size());
    for (ObjId s = 0; s < static_cast<ObjId>(sg->objects.size()); ++s)
        raw.identities[static_cast<std::size_t>(s)] =
            sg->morphism_id(s, sym_identity(*base, sg->objects[static_cast<std::size_t>(s)]));

    // Composition and inverse tables via structural operations.
    for (const auto& [st, fs] : hom_ids) {
        auto [s, t] = st;
        for (ObjId w = 0; w < static_cast<ObjId>(sg->objects.size()); ++w) {
            auto it = hom_ids.find({t, w});
            if (it == hom_ids.end()) continue;
            for (MorId gid : it->second)
                for (MorId fid : fs) {
                    auto comp = sym_compose(*base, sg->morphisms[static_cast<std::size_t>(gid)],
                                            sg->morphisms[static_cast<std::size_t>(fid)]);
                    raw.compose.push_back({gid, fid, sg->morphism_id(s, comp)});
                }
        }
    }
    raw.inverse.reserve(sg->morphisms.size());
    for (MorId m = 0; m < static_cast<MorId>(sg->morphisms.size()); ++m) {
        ObjId t = raw.morphisms[static_cast<std::size_t>(m)].tgt;
        raw.inverse.push_back(
            {m, sg->morphism_id(t, sym_inverse(*base, sg->morphisms[static_cast<std::size_t>(m)]))});
    }

    sg->carrier = Groupoid::from_trusted_tables(std::move(raw));
    return sg;
}

} // namespace kitbench
