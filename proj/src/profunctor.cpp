#include "kitbench/profunctor.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "kitbench/subgroups.hpp"
#include "kitbench/util.hpp"

namespace kitbench {

namespace {

std::string describe_elem(const Profunctor& p, ElemId e) {
    std::ostringstream os;
    os << "element " << e << " '" << p.name(e) << "' in cell ("
       << p.target()->object_name(p.tgt_obj(e)) << ", "
       << p.source()->object_name(p.src_obj(e)) << ")";
    return os.str();
}

} // namespace

// --- Builder -----------------------------------------------------------------

Profunctor::Builder::Builder(GroupoidPtr source, GroupoidPtr target)
    : source_(std::move(source)), target_(std::move(target)) {
    if (!source_ || !target_) fail(ErrorKind::UsageError, "profunctor needs both groupoids");
    count_a_.assign(static_cast<std::size_t>(source_->object_count()), 0);
    count_b_.assign(static_cast<std::size_t>(target_->object_count()), 0);
    left_.resize(static_cast<std::size_t>(source_->morphism_count()));
    right_.resize(static_cast<std::size_t>(target_->morphism_count()));
}

ElemId Profunctor::Builder::add_element(ObjId b, ObjId a, std::string name) {
    if (a < 0 || a >= source_->object_count())
        fail(ErrorKind::UnknownObject, "source object " + std::to_string(a) + " out of range");
    if (b < 0 || b >= target_->object_count())
        fail(ErrorKind::UnknownObject, "target object " + std::to_string(b) + " out of range");
    const auto id = static_cast<ElemId>(elems_.size());
    elems_.push_back(Elem{b, a, std::move(name)});
    pos_a_.push_back(count_a_[static_cast<std::size_t>(a)]++);
    pos_b_.push_back(count_b_[static_cast<std::size_t>(b)]++);
    return id;
}

void Profunctor::Builder::set_left(MorId alpha, ElemId p, ElemId q) {
    if (alpha < 0 || alpha >= source_->morphism_count())
        fail(ErrorKind::DanglingId, "left action by unknown morphism " + std::to_string(alpha));
    if (p < 0 || q < 0 || p >= static_cast<ElemId>(elems_.size()) ||
        q >= static_cast<ElemId>(elems_.size()))
        fail(ErrorKind::UnknownElement, "left action on unknown element");
    const Elem& ep = elems_[static_cast<std::size_t>(p)];
    const Elem& eq = elems_[static_cast<std::size_t>(q)];
    if (source_->src(alpha) != ep.a)
        fail(ErrorKind::TypeMismatch,
             "left action: morphism " + source_->name_of(alpha) + " does not start at object " +
                 source_->object_name(ep.a));
    if (eq.a != source_->tgt(alpha) || eq.b != ep.b)
        fail(ErrorKind::TypeMismatch,
             "left action result lands in the wrong cell for " + source_->name_of(alpha));
    auto& row = left_[static_cast<std::size_t>(alpha)];
    const auto pos = static_cast<std::size_t>(pos_a_[static_cast<std::size_t>(p)]);
    if (row.size() <= pos) row.resize(pos + 1, -1);
    if (row[pos] != -1 && row[pos] != q)
        fail(ErrorKind::TypeMismatch, "left action set twice with different results");
    row[pos] = q;
}

void Profunctor::Builder::set_right(ElemId p, MorId beta, ElemId q) {
    if (beta < 0 || beta >= target_->morphism_count())
        fail(ErrorKind::DanglingId, "right action by unknown morphism " + std::to_string(beta));
    if (p < 0 || q < 0 || p >= static_cast<ElemId>(elems_.size()) ||
        q >= static_cast<ElemId>(elems_.size()))
        fail(ErrorKind::UnknownElement, "right action on unknown element");
    const Elem& ep = elems_[static_cast<std::size_t>(p)];
    const Elem& eq = elems_[static_cast<std::size_t>(q)];
    if (target_->tgt(beta) != ep.b)
        fail(ErrorKind::TypeMismatch,
             "right action: morphism " + target_->name_of(beta) + " does not end at object " +
                 target_->object_name(ep.b));
    if (eq.b != target_->src(beta) || eq.a != ep.a)
        fail(ErrorKind::TypeMismatch,
             "right action result lands in the wrong cell for " + target_->name_of(beta));
    auto& row = right_[static_cast<std::size_t>(beta)];
    const auto pos = static_cast<std::size_t>(pos_b_[static_cast<std::size_t>(p)]);
    if (row.size() <= pos) row.resize(pos + 1, -1);
    if (row[pos] != -1 && row[pos] != q)
        fail(ErrorKind::TypeMismatch, "right action set twice with different results");
    row[pos] = q;
}

Profunctor Profunctor::Builder::build(bool validate) {
    Profunctor out;
    out.source_ = source_;
    out.target_ = target_;
    const int na = source_->object_count();
    const int nb = target_->object_count();
    out.elems_.reserve(elems_.size());
    for (const Elem& e : elems_) out.elems_.push_back(Profunctor::Elem{e.b, e.a, e.name});
    out.cells_.assign(static_cast<std::size_t>(na) * static_cast<std::size_t>(nb), {});
    out.elems_by_a_.assign(static_cast<std::size_t>(na), {});
    out.elems_by_b_.assign(static_cast<std::size_t>(nb), {});
    out.pos_in_a_ = pos_a_;
    out.pos_in_b_ = pos_b_;
    for (ElemId e = 0; e < static_cast<ElemId>(elems_.size()); ++e) {
        const Elem& el = elems_[static_cast<std::size_t>(e)];
        out.cells_[static_cast<std::size_t>(el.b) * static_cast<std::size_t>(na) +
                   static_cast<std::size_t>(el.a)]
            .push_back(e);
        out.elems_by_a_[static_cast<std::size_t>(el.a)].push_back(e);
        out.elems_by_b_[static_cast<std::size_t>(el.b)].push_back(e);
    }
    // Pad action rows out to their final bucket sizes so lookups can always
    // index; missing entries stay -1 and are caught below or at use time.
    for (MorId m = 0; m < source_->morphism_count(); ++m) {
        auto& row = left_[static_cast<std::size_t>(m)];
        row.resize(out.elems_by_a_[static_cast<std::size_t>(source_->src(m))].size(), -1);
    }
    for (MorId m = 0; m < target_->morphism_count(); ++m) {
        auto& row = right_[static_cast<std::size_t>(m)];
        row.resize(out.elems_by_b_[static_cast<std::size_t>(target_->tgt(m))].size(), -1);
    }
    out.left_ = std::move(left_);
    out.right_ = std::move(right_);

    if (validate) {
        const Groupoid& A = *source_;
        const Groupoid& B = *target_;
        // totality
        for (MorId m = 0; m < A.morphism_count(); ++m)
            for (std::size_t pos = 0; pos < out.left_[static_cast<std::size_t>(m)].size(); ++pos)
                if (out.left_[static_cast<std::size_t>(m)][pos] == -1)
                    fail(ErrorKind::UnknownElement,
                         "left action of " + A.name_of(m) + " undefined on " +
                             describe_elem(out, out.elems_by_a_[static_cast<std::size_t>(
                                                    A.src(m))][pos]));
        for (MorId m = 0; m < B.morphism_count(); ++m)
            for (std::size_t pos = 0; pos < out.right_[static_cast<std::size_t>(m)].size(); ++pos)
                if (out.right_[static_cast<std::size_t>(m)][pos] == -1)
                    fail(ErrorKind::UnknownElement,
                         "right action of " + B.name_of(m) + " undefined on " +
                             describe_elem(out, out.elems_by_b_[static_cast<std::size_t>(
                                                    B.tgt(m))][pos]));
        // identity actions
        for (ElemId e = 0; e < out.element_count(); ++e) {
            if (out.act_left(A.identity(out.src_obj(e)), e) != e)
                fail(ErrorKind::BadIdentity, "identity acts nontrivially on " + describe_elem(out, e));
            if (out.act_right(e, B.identity(out.tgt_obj(e))) != e)
                fail(ErrorKind::BadIdentity, "identity acts nontrivially on " + describe_elem(out, e));
        }
        // left functoriality: (a2 . (a1 . p)) = (a2 after a1) . p
        for (MorId a2 = 0; a2 < A.morphism_count(); ++a2)
            for (MorId a1 = 0; a1 < A.morphism_count(); ++a1) {
                if (!A.composable(a2, a1)) continue;
                const MorId a21 = A.compose(a2, a1);
                for (ElemId e : out.elems_by_a_[static_cast<std::size_t>(A.src(a1))])
                    if (out.act_left(a2, out.act_left(a1, e)) != out.act_left(a21, e))
                        fail(ErrorKind::TypeMismatch,
                             "left action not functorial at " + describe_elem(out, e) + " via " +
                                 A.name_of(a2) + " after " + A.name_of(a1));
            }
        // right functoriality: ((p . b1) . b2) = p . (b1 after b2)
        for (MorId b1 = 0; b1 < B.morphism_count(); ++b1)
            for (MorId b2 = 0; b2 < B.morphism_count(); ++b2) {
                if (!B.composable(b1, b2)) continue;
                const MorId b12 = B.compose(b1, b2);
                for (ElemId e : out.elems_by_b_[static_cast<std::size_t>(B.tgt(b1))])
                    if (out.act_right(out.act_right(e, b1), b2) != out.act_right(e, b12))
                        fail(ErrorKind::TypeMismatch,
                             "right action not functorial at " + describe_elem(out, e) + " via " +
                                 B.name_of(b1) + " then " + B.name_of(b2));
            }
        // the two actions commute
        for (ElemId e = 0; e < out.element_count(); ++e)
            for (MorId al = 0; al < A.morphism_count(); ++al) {
                if (A.src(al) != out.src_obj(e)) continue;
                for (MorId be = 0; be < B.morphism_count(); ++be) {
                    if (B.tgt(be) != out.tgt_obj(e)) continue;
                    if (out.act_right(out.act_left(al, e), be) !=
                        out.act_left(al, out.act_right(e, be)))
                        fail(ErrorKind::TypeMismatch,
                             "actions do not commute at " + describe_elem(out, e) + " via " +
                                 A.name_of(al) + " / " + B.name_of(be));
                }
            }
    }
    return out;
}

// --- accessors -----------------------------------------------------------------

std::size_t Profunctor::check(ElemId p) const {
    if (p < 0 || p >= static_cast<ElemId>(elems_.size()))
        fail(ErrorKind::IndexOutOfRange,
             "profunctor element " + std::to_string(p) + " outside [0, " +
                 std::to_string(elems_.size()) + ")");
    return static_cast<std::size_t>(p);
}

const std::vector<ElemId>& Profunctor::cell(ObjId b, ObjId a) const {
    if (a < 0 || a >= source_->object_count())
        fail(ErrorKind::UnknownObject, "cell source object " + std::to_string(a) + " out of range");
    if (b < 0 || b >= target_->object_count())
        fail(ErrorKind::UnknownObject, "cell target object " + std::to_string(b) + " out of range");
    return cells_[static_cast<std::size_t>(b) * static_cast<std::size_t>(source_->object_count()) +
                  static_cast<std::size_t>(a)];
}

const std::vector<ElemId>& Profunctor::elements_by_source(ObjId a) const {
    if (a < 0 || a >= source_->object_count())
        fail(ErrorKind::UnknownObject, "source object " + std::to_string(a) + " out of range");
    return elems_by_a_[static_cast<std::size_t>(a)];
}

const std::vector<ElemId>& Profunctor::elements_by_target(ObjId b) const {
    if (b < 0 || b >= target_->object_count())
        fail(ErrorKind::UnknownObject, "target object " + std::to_string(b) + " out of range");
    return elems_by_b_[static_cast<std::size_t>(b)];
}

ElemId Profunctor::act_left(MorId alpha, ElemId p) const {
    const std::size_t i = check(p);
    if (alpha < 0 || alpha >= source_->morphism_count())
        fail(ErrorKind::DanglingId, "unknown source morphism " + std::to_string(alpha));
    if (source_->src(alpha) != elems_[i].a)
        fail(ErrorKind::TypeMismatch,
             "morphism " + source_->name_of(alpha) + " does not act on " + describe_elem(*this, p));
    const ElemId q =
        left_[static_cast<std::size_t>(alpha)][static_cast<std::size_t>(pos_in_a_[i])];
    if (q < 0)
        fail(ErrorKind::UnknownElement,
             "left action of " + source_->name_of(alpha) + " undefined on " +
                 describe_elem(*this, p));
    return q;
}

ElemId Profunctor::act_right(ElemId p, MorId beta) const {
    const std::size_t i = check(p);
    if (beta < 0 || beta >= target_->morphism_count())
        fail(ErrorKind::DanglingId, "unknown target morphism " + std::to_string(beta));
    if (target_->tgt(beta) != elems_[i].b)
        fail(ErrorKind::TypeMismatch,
             "morphism " + target_->name_of(beta) + " does not act on " + describe_elem(*this, p));
    const ElemId q =
        right_[static_cast<std::size_t>(beta)][static_cast<std::size_t>(pos_in_b_[i])];
    if (q < 0)
        fail(ErrorKind::UnknownElement,
             "right action of " + target_->name_of(beta) + " undefined on " +
                 describe_elem(*this, p));
    return q;
}

// --- hom profunctor --------------------------------------------------------------

Profunctor identity_profunctor(const GroupoidPtr& g, bool validate) {
    Profunctor::Builder b(g, g);
    const int m = g->morphism_count();
    for (MorId f = 0; f < m; ++f) b.add_element(g->src(f), g->tgt(f), g->name_of(f));
    for (MorId alpha = 0; alpha < m; ++alpha)
        for (MorId f = 0; f < m; ++f)
            if (g->composable(alpha, f)) b.set_left(alpha, f, g->compose(alpha, f));
    for (MorId beta = 0; beta < m; ++beta)
        for (MorId f = 0; f < m; ++f)
            if (g->composable(f, beta)) b.set_right(f, beta, g->compose(f, beta));
    return b.build(validate);
}

// --- coend composition --------------------------------------------------------

ElemId ComposeResult::class_of(ElemId p, ElemId q) const {
    const auto it = pair_class.find({p, q});
    if (it == pair_class.end())
        fail(ErrorKind::UnknownElement,
             "pair (" + std::to_string(p) + ", " + std::to_string(q) +
                 ") is not a composable pair of this composite");
    return it->second;
}

ComposeResult compose_profunctors(const Profunctor& p, const Profunctor& q) {
    if (p.target() != q.source())
        fail(ErrorKind::BaseMismatch,
             "composition needs the first profunctor's target to be the second's source");
    const GroupoidPtr& A = p.source();
    const GroupoidPtr& B = p.target();
    const GroupoidPtr& C = q.target();

    // Pairs (x in P(b,a), y in Q(c,b)) indexed contiguously, middle object by
    // middle object; within one middle object x varies slower than y.
    const int nb = B->object_count();
    std::vector<std::size_t> offset(static_cast<std::size_t>(nb) + 1, 0);
    for (ObjId b = 0; b < nb; ++b)
        offset[static_cast<std::size_t>(b) + 1] =
            offset[static_cast<std::size_t>(b)] +
            p.elements_by_target(b).size() * q.elements_by_source(b).size();
    const std::size_t total = offset[static_cast<std::size_t>(nb)];

    const auto pair_index = [&](ElemId x, ElemId y) {
        const ObjId b = p.tgt_obj(x);
        return offset[static_cast<std::size_t>(b)] +
               static_cast<std::size_t>(p.pos_in_target_bucket(x)) *
                   q.elements_by_source(b).size() +
               static_cast<std::size_t>(q.pos_in_source_bucket(y));
    };

    UnionFind uf(total);
    for (MorId beta = 0; beta < B->morphism_count(); ++beta) {
        const ObjId bsrc = B->src(beta);
        const ObjId btgt = B->tgt(beta);
        if (beta == B->identity(bsrc)) continue;
        for (ElemId x : p.elements_by_target(btgt)) {
            const ElemId xb = p.act_right(x, beta);
            for (ElemId y : q.elements_by_source(bsrc))
                uf.unite(pair_index(xb, y), pair_index(x, q.act_left(beta, y)));
        }
    }

    ComposeResult out{Profunctor{}, {}, {}};
    Profunctor::Builder builder(A, C);
    std::vector<ElemId> class_of_pair(total, -1);
    std::vector<std::pair<ElemId, ElemId>> pair_elems(total);
    for (ObjId b = 0; b < nb; ++b)
        for (ElemId x : p.elements_by_target(b))
            for (ElemId y : q.elements_by_source(b))
                pair_elems[pair_index(x, y)] = {x, y};
    for (std::size_t i = 0; i < total; ++i) {
        const std::size_t root = uf.find(i);
        if (class_of_pair[root] == -1) {
            const auto [x, y] = pair_elems[i];
            const ElemId id = builder.add_element(
                q.tgt_obj(y), p.src_obj(x), "[" + p.name(x) + ";" + q.name(y) + "]");
            class_of_pair[root] = id;
            out.witness.emplace_back(p.tgt_obj(x), x, y);
        }
        class_of_pair[i] = class_of_pair[root];
    }
    for (std::size_t i = 0; i < total; ++i)
        out.pair_class[{pair_elems[i].first, pair_elems[i].second}] = class_of_pair[i];

    const auto rep_class = [&](ElemId x, ElemId y) { return class_of_pair[pair_index(x, y)]; };
    for (std::size_t e = 0; e < out.witness.size(); ++e) {
        const auto [b, x, y] = out.witness[e];
        (void)b;
        const ObjId a = p.src_obj(x);
        const ObjId c = q.tgt_obj(y);
        for (MorId alpha = 0; alpha < A->morphism_count(); ++alpha)
            if (A->src(alpha) == a)
                builder.set_left(alpha, static_cast<ElemId>(e), rep_class(p.act_left(alpha, x), y));
        for (MorId gamma = 0; gamma < C->morphism_count(); ++gamma)
            if (C->tgt(gamma) == c)
                builder.set_right(static_cast<ElemId>(e), gamma, rep_class(x, q.act_right(y, gamma)));
    }
    out.composite = builder.build(false);
    return out;
}

// --- dual ----------------------------------------------------------------------

Profunctor dual_profunctor(const Profunctor& p) {
    const GroupoidPtr src = opposite(p.target());
    const GroupoidPtr tgt = opposite(p.source());
    Profunctor::Builder b(src, tgt);
    for (ElemId e = 0; e < p.element_count(); ++e)
        b.add_element(p.src_obj(e), p.tgt_obj(e), p.name(e));
    // Source of the dual is the opposite target: a morphism beta with
    // tgt(beta) = b in the original starts at b in the opposite, and its left
    // action is the original right action. Symmetrically for the other side.
    for (MorId beta = 0; beta < p.target()->morphism_count(); ++beta) {
        const ObjId bt = p.target()->tgt(beta);
        for (ElemId e : p.elements_by_target(bt)) b.set_left(beta, e, p.act_right(e, beta));
    }
    for (MorId alpha = 0; alpha < p.source()->morphism_count(); ++alpha) {
        const ObjId as = p.source()->src(alpha);
        for (ElemId e : p.elements_by_source(as)) b.set_right(e, alpha, p.act_left(alpha, e));
    }
    return b.build(false);
}

// --- tensor ----------------------------------------------------------------------

ElemId TensorResult::pair_elem(ElemId p, ElemId q) const {
    const auto it = index.find({p, q});
    if (it == index.end())
        fail(ErrorKind::UnknownElement,
             "no tensor element for pair (" + std::to_string(p) + ", " + std::to_string(q) + ")");
    return it->second;
}

TensorResult tensor_profunctors(const Profunctor& p, const Profunctor& q) {
    TensorResult out{product(p.source(), q.source()), product(p.target(), q.target()),
                     Profunctor{}, {}, {}};
    Profunctor::Builder b(out.source_structure.result, out.target_structure.result);
    const int nbt = out.target_structure.result->object_count();
    const int nas = out.source_structure.result->object_count();
    for (ObjId bt = 0; bt < nbt; ++bt) {
        const auto [bp, bq] = out.target_structure.obj_pair(bt);
        for (ObjId as = 0; as < nas; ++as) {
            const auto [ap, aq] = out.source_structure.obj_pair(as);
            for (ElemId x : p.cell(bp, ap))
                for (ElemId y : q.cell(bq, aq)) {
                    const ElemId id =
                        b.add_element(bt, as, "(" + p.name(x) + "," + q.name(y) + ")");
                    out.components.emplace_back(x, y);
                    out.index[{x, y}] = id;
                }
        }
    }
    const Groupoid& S = *out.source_structure.result;
    const Groupoid& T = *out.target_structure.result;
    for (ElemId e = 0; e < static_cast<ElemId>(out.components.size()); ++e) {
        const auto [x, y] = out.components[static_cast<std::size_t>(e)];
        for (MorId m = 0; m < S.morphism_count(); ++m) {
            if (S.src(m) != out.source_structure.pair_obj(p.src_obj(x), q.src_obj(y))) continue;
            const auto [f, g] = out.source_structure.mor_pair(m);
            b.set_left(m, e, out.index.at({p.act_left(f, x), q.act_left(g, y)}));
        }
        for (MorId m = 0; m < T.morphism_count(); ++m) {
            if (T.tgt(m) != out.target_structure.pair_obj(p.tgt_obj(x), q.tgt_obj(y))) continue;
            const auto [f, g] = out.target_structure.mor_pair(m);
            b.set_right(e, m, out.index.at({p.act_right(x, f), q.act_right(y, g)}));
        }
    }
    out.tensor = b.build(false);
    return out;
}

// --- stabilization --------------------------------------------------------------

StabilizationReport is_stabilized(const Profunctor& p, const Kit& source_kit,
                                  const Kit& target_kit) {
    if (source_kit.base() != p.source() || target_kit.base() != p.target())
        fail(ErrorKind::BaseMismatch, "kits must live on the profunctor's own groupoids");
    const Groupoid& A = *p.source();
    const Groupoid& B = *p.target();
    std::map<ObjId, Mask> orth_src, orth_tgt;
    const auto orth_of = [](const Groupoid& g, ObjId o, const Mask& u, std::map<ObjId, Mask>& c) {
        auto it = c.find(o);
        if (it == c.end()) it = c.emplace(o, orth_union_mask(*shared_endo_table(g, o), u)).first;
        return it->second;
    };

    StabilizationReport rep;
    for (ElemId e = 0; e < p.element_count(); ++e) {
        const ObjId a = p.src_obj(e);
        const ObjId b = p.tgt_obj(e);
        const Mask& su = source_kit.union_mask(a);
        const Mask& tu = target_kit.union_mask(b);
        const Mask& so = orth_of(A, a, su, orth_src);
        const Mask& to = orth_of(B, b, tu, orth_tgt);
        const auto& ea = A.endos(a);
        const auto& eb = B.endos(b);
        for (std::size_t i = 0; i < ea.size(); ++i) {
            const ElemId ae = p.act_left(ea[i], e);
            for (std::size_t j = 0; j < eb.size(); ++j) {
                if (p.act_right(ae, eb[j]) != e) continue;
                const bool fwd = mask_test(su, static_cast<int>(i)) &&
                                 !mask_test(tu, static_cast<int>(j));
                const bool bwd = mask_test(to, static_cast<int>(j)) &&
                                 !mask_test(so, static_cast<int>(i));
                if (!fwd && !bwd) continue;
                rep.stabilized = false;
                rep.elem = e;
                rep.alpha = ea[i];
                rep.beta = eb[j];
                rep.forward_failed = fwd;
                rep.backward_failed = bwd;
                std::ostringstream os;
                os << describe_elem(p, e) << " is fixed by (" << A.name_of(ea[i]) << ", "
                   << B.name_of(eb[j]) << ") but ";
                if (fwd)
                    os << A.name_of(ea[i]) << " lies in the source union while "
                       << B.name_of(eb[j]) << " misses the target union";
                else
                    os << B.name_of(eb[j]) << " lies in the target orthogonal while "
                       << A.name_of(ea[i]) << " misses the source orthogonal";
                rep.detail = os.str();
                return rep;
            }
        }
    }
    return rep;
}

// --- symmetric lift -------------------------------------------------------------

ElemId SymLiftResult::elem_id(ObjId v_obj, ObjId u_obj, const LiftElem& e) const {
    const auto it = index.find(std::tuple(v_obj, u_obj, e));
    if (it == index.end())
        fail(ErrorKind::UnknownElement, "no lifted element with that shape in that cell");
    return it->second;
}

SymLiftResult sym_lift(const Profunctor& p, const SymGroupoidPtr& source_sym,
                       const SymGroupoidPtr& target_sym) {
    if (!source_sym || !target_sym || source_sym->base != p.source() ||
        target_sym->base != p.target())
        fail(ErrorKind::BaseMismatch,
             "symmetric lift needs word groupoids over the profunctor's own bases");
    SymLiftResult out{source_sym, target_sym, Profunctor{}, {}, {}};
    Profunctor::Builder b(source_sym->carrier, target_sym->carrier);

    const auto elem_name = [&](const SymLiftResult::LiftElem& e) {
        std::ostringstream os;
        os << "(";
        for (int i : e.phi) os << i;
        os << "|";
        for (std::size_t j = 0; j < e.parts.size(); ++j)
            os << (j ? "," : "") << p.name(e.parts[j]);
        os << ")";
        return os.str();
    };

    const int nv = target_sym->carrier->object_count();
    const int nu = source_sym->carrier->object_count();
    for (ObjId v = 0; v < nv; ++v) {
        const SymObjectV& vw = target_sym->object_view(v);
        for (ObjId u = 0; u < nu; ++u) {
            const SymObjectV& uw = source_sym->object_view(u);
            const int n = uw.length();
            if (vw.length() != n) continue;
            for (const auto& phi : all_permutations(n)) {
                // parts[j] ranges over P(v[j], u[phi[j]]); odometer, last
                // position fastest, matching the word-morphism ordering.
                std::vector<const std::vector<ElemId>*> pools(static_cast<std::size_t>(n));
                bool empty = false;
                for (int j = 0; j < n; ++j) {
                    pools[static_cast<std::size_t>(j)] =
                        &p.cell(vw.items[static_cast<std::size_t>(j)],
                                uw.items[static_cast<std::size_t>(phi[static_cast<std::size_t>(j)])]);
                    if (pools[static_cast<std::size_t>(j)]->empty()) empty = true;
                }
                if (empty) continue;
                std::vector<std::size_t> at(static_cast<std::size_t>(n), 0);
                while (true) {
                    SymLiftResult::LiftElem el;
                    el.phi = phi;
                    el.parts.resize(static_cast<std::size_t>(n));
                    for (int j = 0; j < n; ++j)
                        el.parts[static_cast<std::size_t>(j)] =
                            (*pools[static_cast<std::size_t>(j)])[at[static_cast<std::size_t>(j)]];
                    const ElemId id = b.add_element(v, u, elem_name(el));
                    out.index[std::tuple(v, u, el)] = id;
                    out.views.push_back(std::move(el));
                    int j = n - 1;
                    while (j >= 0 && ++at[static_cast<std::size_t>(j)] ==
                                         pools[static_cast<std::size_t>(j)]->size()) {
                        at[static_cast<std::size_t>(j)] = 0;
                        --j;
                    }
                    if (j < 0) break;
                }
            }
        }
    }

    // Second pass: actions. Each element's cell comes back off the index map.
    const Groupoid& SC = *source_sym->carrier;
    const Groupoid& TC = *target_sym->carrier;
    std::vector<std::pair<ObjId, ObjId>> cell_of(out.views.size());
    for (const auto& [key, id] : out.index)
        cell_of[static_cast<std::size_t>(id)] = {std::get<0>(key), std::get<1>(key)};
    for (ElemId e = 0; e < static_cast<ElemId>(out.views.size()); ++e) {
        const SymLiftResult::LiftElem& el = out.views[static_cast<std::size_t>(e)];
        const auto [v, u] = cell_of[static_cast<std::size_t>(e)];
        const int n = static_cast<int>(el.phi.size());
        for (MorId al = 0; al < SC.morphism_count(); ++al) {
            if (SC.src(al) != u) continue;
            const SymMorphismV& sv = source_sym->morphism_view(al);
            SymLiftResult::LiftElem res;
            res.phi = compose_perm(sv.perm, el.phi);
            res.parts.resize(static_cast<std::size_t>(n));
            for (int j = 0; j < n; ++j)
                res.parts[static_cast<std::size_t>(j)] = p.act_left(
                    sv.parts[static_cast<std::size_t>(el.phi[static_cast<std::size_t>(j)])],
                    el.parts[static_cast<std::size_t>(j)]);
            b.set_left(al, e, out.index.at(std::tuple(v, SC.tgt(al), res)));
        }
        for (MorId be = 0; be < TC.morphism_count(); ++be) {
            if (TC.tgt(be) != v) continue;
            const SymMorphismV& tv = target_sym->morphism_view(be);
            SymLiftResult::LiftElem res;
            res.phi = compose_perm(el.phi, tv.perm);
            res.parts.resize(static_cast<std::size_t>(n));
            for (int j = 0; j < n; ++j) {
                const int tj = tv.perm[static_cast<std::size_t>(j)];
                res.parts[static_cast<std::size_t>(j)] =
                    p.act_right(el.parts[static_cast<std::size_t>(tj)],
                                tv.parts[static_cast<std::size_t>(j)]);
            }
            b.set_right(e, be, out.index.at(std::tuple(TC.src(be), u, res)));
        }
    }
    out.lift = b.build(false);
    return out;
}

// --- random profunctors ---------------------------------------------------------

Profunctor random_orbit_profunctor(const GroupoidPtr& source, const GroupoidPtr& target,
                                   std::mt19937& rng, int max_orbits, int max_elems_per_cell) {
    if (source->object_count() != 1 || target->object_count() != 1)
        fail(ErrorKind::UsageError, "random orbit profunctors need one-object groupoids");
    const ProductStructure ps = product(source, target);
    const Groupoid& GH = *ps.result;
    const auto lattice = subgroup_lattice(GH, 0);
    const int nelem = GH.morphism_count();
    const MorId id_src = source->identity(0);
    const MorId id_tgt = target->identity(0);

    Profunctor::Builder b(source, target);
    struct Orbit {
        std::vector<int> coset_of;    // per group element, coset index
        std::vector<MorId> reps;      // per coset, least member
        std::vector<ElemId> elem_of;  // per coset, builder element
    };
    std::vector<Orbit> orbits;

    const int want = 1 + static_cast<int>(rng() % static_cast<std::uint32_t>(max_orbits));
    int budget = max_elems_per_cell;
    for (int o = 0; o < want && budget > 0; ++o) {
        const Subgroup* chosen = nullptr;
        for (int attempt = 0; attempt < 12 && !chosen; ++attempt) {
            const Subgroup& s =
                lattice->groups[rng() % static_cast<std::uint32_t>(lattice->groups.size())];
            if (nelem / s.order() <= budget) chosen = &s;
        }
        if (!chosen) chosen = &lattice->groups[static_cast<std::size_t>(lattice->find(
                         endo_group(GH, 0)))];  // the full group: a single coset
        Orbit orb;
        orb.coset_of.assign(static_cast<std::size_t>(nelem), -1);
        for (MorId z = 0; z < nelem; ++z) {
            if (orb.coset_of[static_cast<std::size_t>(z)] != -1) continue;
            const int c = static_cast<int>(orb.reps.size());
            orb.reps.push_back(z);
            for (MorId s : chosen->elements)
                orb.coset_of[static_cast<std::size_t>(GH.compose(z, s))] = c;
        }
        budget -= static_cast<int>(orb.reps.size());
        const int oi = static_cast<int>(orbits.size());
        for (std::size_t c = 0; c < orb.reps.size(); ++c)
            orb.elem_of.push_back(
                b.add_element(0, 0, "o" + std::to_string(oi) + "c" + std::to_string(c)));
        orbits.push_back(std::move(orb));
    }

    for (const Orbit& orb : orbits)
        for (std::size_t c = 0; c < orb.reps.size(); ++c) {
            const MorId z = orb.reps[c];
            for (MorId alpha = 0; alpha < source->morphism_count(); ++alpha) {
                const MorId z2 = GH.compose(ps.pair_mor(alpha, id_tgt), z);
                b.set_left(alpha, orb.elem_of[c],
                           orb.elem_of[static_cast<std::size_t>(
                               orb.coset_of[static_cast<std::size_t>(z2)])]);
            }
            for (MorId beta = 0; beta < target->morphism_count(); ++beta) {
                const MorId z2 = GH.compose(ps.pair_mor(id_src, target->inverse(beta)), z);
                b.set_right(orb.elem_of[c], beta,
                            orb.elem_of[static_cast<std::size_t>(
                                orb.coset_of[static_cast<std::size_t>(z2)])]);
            }
        }
    return b.build(true);
}

CompositionCheck composition_stabilized_check(const GroupoidPtr& a, const GroupoidPtr& b,
                                              const GroupoidPtr& c, std::uint64_t seed,
                                              int trials) {
    const std::vector<Kit> ka = enumerate_boolean_kits(a);
    const std::vector<Kit> kb = enumerate_boolean_kits(b);
    const std::vector<Kit> kc = enumerate_boolean_kits(c);
    std::mt19937 rng(static_cast<std::uint32_t>(seed));
    const auto pick = [&rng](const std::vector<Kit>& ks) -> const Kit& {
        return ks[rng() % static_cast<std::uint32_t>(ks.size())];
    };
    const auto stabilized_sample = [&rng](const GroupoidPtr& s, const GroupoidPtr& t,
                                          const Kit& ks, const Kit& kt) {
        std::optional<Profunctor> found;
        for (int attempt = 0; attempt < 60 && !found; ++attempt) {
            Profunctor cand = random_orbit_profunctor(s, t, rng);
            if (is_stabilized(cand, ks, kt).stabilized) found = std::move(cand);
        }
        return found;
    };

    CompositionCheck out;
    int guard = trials * 40;
    while (out.trials < trials && guard-- > 0) {
        const Kit& K1 = pick(ka);
        const Kit& K2 = pick(kb);
        const Kit& K3 = pick(kc);
        const auto P = stabilized_sample(a, b, K1, K2);
        if (!P) continue;
        const auto Q = stabilized_sample(b, c, K2, K3);
        if (!Q) continue;
        ++out.trials;
        const ComposeResult comp = compose_profunctors(*P, *Q);
        const StabilizationReport rep = is_stabilized(comp.composite, K1, K3);
        if (!rep.stabilized) {
            ++out.failures;
            if (out.first_failure.empty()) out.first_failure = rep.detail;
        }
    }
    return out;
}

} // namespace kitbench
