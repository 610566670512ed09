#pragma once

// Profunctors between groupoids: a family of element sets indexed by pairs
// (target object, source object), with a covariant action of the source on
// the second index and a contravariant action of the target on the first.
// Composition is the coend: triples sharing a middle object, glued by the
// middle action on both sides, computed with a union-find over generators.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <tuple>
#include <vector>

#include "kitbench/groupoid.hpp"
#include "kitbench/kit.hpp"
#include "kitbench/sym.hpp"

namespace kitbench {

using ElemId = std::int32_t;

class Profunctor {
public:
    class Builder {
    public:
        Builder(GroupoidPtr source, GroupoidPtr target);

        /// New element in the cell at (target object b, source object a).
        ElemId add_element(ObjId b, ObjId a, std::string name);

        /// alpha . p for alpha : a -> a' in the source; the result must lie
        /// in the cell (b(p), a').
        void set_left(MorId alpha, ElemId p, ElemId q);

        /// p . beta for beta : b' -> b(p) in the target; the result must lie
        /// in the cell (b', a(p)).
        void set_right(ElemId p, MorId beta, ElemId q);

        /// `validate` runs the full functoriality / commutation / totality
        /// sweep; constructions that fill the tables from already-verified
        /// formulas may skip it.
        Profunctor build(bool validate = true);

    private:
        friend class Profunctor;
        GroupoidPtr source_, target_;
        struct Elem {
            ObjId b, a;
            std::string name;
        };
        std::vector<Elem> elems_;
        std::vector<int> pos_a_, pos_b_;          // per element, position in its bucket
        std::vector<int> count_a_, count_b_;      // bucket sizes so far
        std::vector<std::vector<ElemId>> left_;   // [alpha][pos in a-bucket], -1 unset
        std::vector<std::vector<ElemId>> right_;  // [beta][pos in b-bucket], -1 unset
    };

    const GroupoidPtr& source() const { return source_; }
    const GroupoidPtr& target() const { return target_; }

    int element_count() const { return static_cast<int>(elems_.size()); }
    ObjId src_obj(ElemId p) const { return elems_[check(p)].a; }
    ObjId tgt_obj(ElemId p) const { return elems_[check(p)].b; }
    const std::string& name(ElemId p) const { return elems_[check(p)].name; }

    /// Elements of the cell at (b, a), ascending.
    const std::vector<ElemId>& cell(ObjId b, ObjId a) const;

    ElemId act_left(MorId alpha, ElemId p) const;
    ElemId act_right(ElemId p, MorId beta) const;

    /// Elements grouped by one index, ascending, with each element's
    /// position inside its group. Used by the coend kernel.
    const std::vector<ElemId>& elements_by_source(ObjId a) const;
    const std::vector<ElemId>& elements_by_target(ObjId b) const;
    int pos_in_source_bucket(ElemId p) const { return pos_in_a_[check(p)]; }
    int pos_in_target_bucket(ElemId p) const { return pos_in_b_[check(p)]; }

private:
    friend class Builder;
    GroupoidPtr source_, target_;
    struct Elem {
        ObjId b, a;
        std::string name;
    };
    std::vector<Elem> elems_;
    std::vector<std::vector<ElemId>> cells_;      // b * nA + a
    std::vector<std::vector<ElemId>> elems_by_a_; // per source object
    std::vector<std::vector<ElemId>> elems_by_b_; // per target object
    std::vector<int> pos_in_a_, pos_in_b_;
    std::vector<std::vector<ElemId>> left_, right_;

    std::size_t check(ElemId p) const;
};

/// The hom profunctor of `g`: cell (b, a) is hom(b, a), the source acting by
/// postcomposition and the target by precomposition. `validate` reruns the
/// builder's axiom sweep, which is cubic and only worth it on small bases.
Profunctor identity_profunctor(const GroupoidPtr& g, bool validate = false);

/// Coend composite "p then q". Element classes carry canonical witnesses:
/// the least (middle object, first element, second element) triple.
struct ComposeResult {
    Profunctor composite;
    std::vector<std::tuple<ObjId, ElemId, ElemId>> witness;  // per composite element

    /// Class of the pair (p in P(b,a), q in Q(c,b)).
    ElemId class_of(ElemId p, ElemId q) const;

    std::map<std::pair<ElemId, ElemId>, ElemId> pair_class;
};
ComposeResult compose_profunctors(const Profunctor& p, const Profunctor& q);

/// Same elements viewed between the opposite groupoids: the two action
/// tables swap roles. An involution.
Profunctor dual_profunctor(const Profunctor& p);

/// Pointwise product: cells are pairs, actions are componentwise.
struct TensorResult {
    ProductStructure source_structure;
    ProductStructure target_structure;
    Profunctor tensor;
    ElemId pair_elem(ElemId p, ElemId q) const;
    std::vector<std::pair<ElemId, ElemId>> components;  // per tensor element
    std::map<std::pair<ElemId, ElemId>, ElemId> index;
};
TensorResult tensor_profunctors(const Profunctor& p, const Profunctor& q);

/// Stabilization of P against kits on its source and target: whenever
/// alpha . p . beta = p, membership of alpha in the source union forces beta
/// into the target union, and beta in the target orthogonal union forces
/// alpha into the source orthogonal union.
struct StabilizationReport {
    bool stabilized = true;
    // first failing datum when not stabilized
    ElemId elem = -1;
    MorId alpha = -1, beta = -1;
    bool forward_failed = false;   // alpha in union, beta outside
    bool backward_failed = false;  // beta in orthogonal union, alpha outside
    std::string detail;
};
StabilizationReport is_stabilized(const Profunctor& p, const Kit& source_kit,
                                  const Kit& target_kit);

/// The symmetric lift: words on both sides, elements are a matching
/// permutation plus one element per target position.
struct SymLiftResult {
    SymGroupoidPtr source_sym, target_sym;
    Profunctor lift;
    /// element = (phi, parts): parts[j] sits in P(v[j], u[phi[j]]).
    struct LiftElem {
        std::vector<int> phi;
        std::vector<ElemId> parts;
        auto operator<=>(const LiftElem&) const = default;
    };
    std::vector<LiftElem> views;  // per lift element
    ElemId elem_id(ObjId v_obj, ObjId u_obj, const LiftElem& e) const;
    std::map<std::tuple<ObjId, ObjId, LiftElem>, ElemId> index;
};
SymLiftResult sym_lift(const Profunctor& p, const SymGroupoidPtr& source_sym,
                       const SymGroupoidPtr& target_sym);

/// Random profunctor between one-object groupoids: a disjoint union of coset
/// actions of random subgroups of End(source) x End(target). Deterministic in
/// the rng state.
Profunctor random_orbit_profunctor(const GroupoidPtr& source, const GroupoidPtr& target,
                                   std::mt19937& rng, int max_orbits = 3,
                                   int max_elems_per_cell = 8);

/// Seeded end-to-end check that composites of stabilized profunctors remain
/// stabilized, over one-object bases with every Boolean kit combination.
struct CompositionCheck {
    int trials = 0;
    int failures = 0;
    std::string first_failure;
};
CompositionCheck composition_stabilized_check(const GroupoidPtr& a, const GroupoidPtr& b,
                                              const GroupoidPtr& c, std::uint64_t seed,
                                              int trials);

} // namespace kitbench
