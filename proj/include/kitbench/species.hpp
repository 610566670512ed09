#pragma once

// Species of structures over a truncated word groupoid. The plain Set-valued
// case is a family of finite symmetric-group actions, one per arity, with
// analytic evaluation (orbit counting of structures paired with argument
// tuples), freeness detection, and polynomial coefficients. The groupoid
// case packages a profunctor out of the word groupoid with the kit pair that
// certifies its stability; evaluation on a presheaf runs the same union-find
// coend as the profunctor engine, with argument tuples in place of single
// sections. On top of evaluation sit the derivative (letter insertion), the
// generic-element trace that recovers a stable species from its evaluated
// functor, the one-letter trace of a stabilized profunctor, a cartesian
// (pullback) check for transformations, and the two-wire disjunction
// fixture.

#include <array>
#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "kitbench/connectives.hpp"
#include "kitbench/exponential.hpp"
#include "kitbench/groupoid.hpp"
#include "kitbench/kit.hpp"
#include "kitbench/presheaf.hpp"
#include "kitbench/profunctor.hpp"
#include "kitbench/sym.hpp"

namespace kitbench {

// --- Set-valued species -------------------------------------------------------

/// A finite set per arity 0..max_arity, each carrying an action of the
/// permutations of that many positions. Permutations are image vectors
/// (sigma[i] is where position i goes), ordered lexicographically.
class SetSpecies {
public:
    class Builder {
    public:
        /// Tabulates every permutation per arity; arities past 6 are refused
        /// (GroupTooLarge) because the tables grow factorially.
        explicit Builder(int max_arity);

        /// New element at `arity`.
        int add_element(int arity, std::string name = "");

        /// sigma . x = image, for sigma a permutation of `arity`.
        void set_action(int arity, const std::vector<int>& sigma, int x, int image);

        /// `validate` runs the totality / identity / composition sweep;
        /// constructions filling the table from verified formulas may skip it.
        SetSpecies build(bool validate = true);

    private:
        friend class SetSpecies;
        int max_arity_ = 0;
        std::vector<std::vector<std::vector<int>>> perms_;  // per arity, lex
        std::vector<std::vector<std::string>> names_;       // per arity
        std::vector<std::vector<std::vector<int>>> action_; // [arity][perm rank][elem]
    };

    int max_arity() const { return static_cast<int>(names_.size()) - 1; }
    int size(int arity) const;
    int total_size() const;
    const std::string& element_name(int arity, int x) const;

    /// The permutations of `arity` in rank order.
    const std::vector<std::vector<int>>& permutations(int arity) const;

    /// sigma . x.
    int act(int arity, const std::vector<int>& sigma, int x) const;

    /// Action by rank into `permutations(arity)`.
    int act_rank(int arity, int rank, int x) const;

private:
    SetSpecies() = default;
    std::vector<std::vector<std::vector<int>>> perms_;
    std::vector<std::vector<std::string>> names_;
    std::vector<std::vector<std::vector<int>>> action_;
};

/// copies[n] regular orbits at arity n: each copy holds one element per
/// permutation, acted on by composition. Every stabilizer is trivial.
SetSpecies free_set_species(const std::vector<int>& copies);

/// One regular orbit at every arity up to `max_arity`.
SetSpecies regular_set_species(int max_arity);

/// A single element at `at_arity` fixed by every permutation.
SetSpecies point_set_species(int max_arity, int at_arity);

SetSpecies empty_set_species(int max_arity);

/// Orbits of the pairs (element of F(n), tuple in X^n) under the relation
/// moving a permutation across the pair, for X = {0..set_size-1}.
struct AnalyticOrbits {
    std::vector<int> per_arity;  // orbit count at each arity
    int total = 0;
    struct Rep {
        int arity = 0;
        int elem = 0;
        std::vector<int> tuple;
    };
    std::vector<Rep> reps;  // least pair per orbit, ascending
};
AnalyticOrbits analytic_eval_set(const SetSpecies& f, int set_size,
                                 std::size_t budget = 1'000'000);

/// Every element at every arity has trivial stabilizer; the witness is the
/// first nonidentity permutation found fixing an element.
struct SetFreeness {
    bool free = true;
    int arity = -1;
    int elem = -1;
    std::vector<int> fixing;
};
SetFreeness is_free_species(const SetSpecies& f);

/// When free, coefficients[n] counts the orbits of F(n) (so that
/// |F(n)| = coefficients[n] * n!); otherwise the non-free witness is filled
/// in and the coefficients are left empty.
struct PolynomialReport {
    bool free = true;
    std::vector<int> coefficients;
    int arity = -1;
    int elem = -1;
    std::vector<int> fixing;
    std::string detail;
};
PolynomialReport polynomial_coefficients(const SetSpecies& f);

// --- species over a groupoid ----------------------------------------------------

/// A profunctor from the word groupoid of a base into a target, with the kit
/// pair that certifies stability: the base kit lifted to the words on the
/// source side and the target kit on the other. `stable` records the
/// is_stabilized verdict against that pair.
struct Species {
    Profunctor prof;  // source: sym->carrier, target: the output groupoid
    SymGroupoidPtr sym;
    Kit base_kit;    // on sym->base
    Kit bang;        // the lift of base_kit to sym->carrier
    Kit target_kit;  // on prof.target()
    bool stable = false;
};

/// Wires the pieces together: checks that the profunctor runs from the word
/// carrier, that the kits live on the right groupoids (BaseMismatch), lifts
/// the base kit, and records the stability verdict.
Species make_species(Profunctor prof, const SymGroupoidPtr& sym, const Kit& base_kit,
                     const Kit& target_kit, int endo_cap = 48);

/// The same data as a species over the one-object base: elements of F(n) sit
/// at the length-n word, permutations act through the word morphisms, and
/// both kits are the point's only kit. The word groupoid must be built over
/// a one-object one-morphism base (BaseMismatch) to length at least the top
/// arity (BudgetExceeded).
Species as_species(const SetSpecies& f, const SymGroupoidPtr& sym);

/// Every stabilizer, taken inside the word groupoid's endomorphism groups,
/// lies in the kit's family. The kit must live on the carrier.
struct KSpeciesReport {
    bool ok = true;
    int arity = -1;
    int elem = -1;
    std::string detail;
};
KSpeciesReport is_K_species(const SetSpecies& f, const SymGroupoidPtr& sym, const Kit& k);

// --- sums of representables over a word ------------------------------------------

/// The coproduct of the representables at the letters of a word: a section
/// over a' is a pair (position, morphism a' -> letter), acted on by
/// precomposition in the second component.
struct WordSum {
    Presheaf sum;
    std::vector<int> position_of;    // per section
    std::vector<MorId> morphism_of;  // per section

    /// Section id of (position, gamma); UnknownElement on a miss.
    SecId section(int position, MorId gamma) const;

    std::vector<std::map<MorId, SecId>> index;  // per position
};
WordSum word_sum(const GroupoidPtr& base, const SymObjectV& u);

/// The presheaf map induced by a word morphism u -> v: the summand at
/// position i lands in the summand at its image position, postcomposed with
/// the morphism carried there.
std::vector<SecId> word_sum_map(const WordSum& from, const WordSum& to,
                                const SymMorphismV& alpha);

// --- evaluation -------------------------------------------------------------------

/// One evaluated coend: classes of (element, argument tuple over the
/// element's word) glued by moving word morphisms across the pair. Keeps the
/// canonical witness per class (least pair) and the full pair-to-class
/// lookup, so the evaluated functor can also act on presheaf maps.
struct SpeciesEval {
    Presheaf result;    // on the species target
    Presheaf argument;  // the evaluated presheaf
    SymGroupoidPtr sym;

    std::vector<ElemId> rep_elem;               // per result section
    std::vector<std::vector<SecId>> rep_tuple;  // per result section

    /// Class of (p, tuple), where tuple[i] is a section of the argument at
    /// the i-th letter of p's word.
    SecId class_of(ElemId p, const std::vector<SecId>& tuple) const;

    // dense pair indexing, filled by species_eval
    std::vector<ObjId> elem_word;      // per element, its word object
    std::vector<std::size_t> offset;   // per element, first pair index (+1 sentinel)
    std::vector<SecId> pair_class;     // pair index -> result section
};

/// Evaluate the species on a presheaf over its base. The argument must be
/// stabilized for the base kit (NotStabilized); the pair count is capped by
/// `budget` (BudgetExceeded). When the species is stable the result passes
/// is_stabilized_presheaf against the target kit.
SpeciesEval species_eval(const Species& s, const Presheaf& x, std::size_t budget = 200'000);

/// The evaluated functor's action on a presheaf map between two arguments of
/// the same species: [p with tuple] goes to [p with the mapped tuple].
/// `component` must be a natural map from `from.argument` to `to.argument`.
std::vector<SecId> eval_transport(const SpeciesEval& from, const SpeciesEval& to,
                                  const std::vector<SecId>& component);

/// Checks that `family` (element of p -> element of q) preserves cells and
/// commutes with both actions; TypeMismatch otherwise.
void validate_element_family(const Profunctor& p, const Profunctor& q,
                             const std::vector<ElemId>& family);

/// The map between evaluations of two species (same words, same target)
/// induced by an equivariant element family: [p with tuple] to
/// [family[p] with the same tuple].
std::vector<SecId> family_transport(const SpeciesEval& on_p, const SpeciesEval& on_q,
                                    const std::vector<ElemId>& family);

/// Word morphisms identifying two evaluation pairs: alpha from p's word to
/// q's word with alpha . p = q and ybar pulled back along alpha equal to
/// xbar. Equal classes of a stable species evaluated on a stabilized
/// argument admit exactly one.
int connecting_count(const Species& s, const Presheaf& x, ElemId p,
                     const std::vector<SecId>& xbar, ElemId q,
                     const std::vector<SecId>& ybar);

// --- derivative -------------------------------------------------------------------

/// The species of structures with one letter set aside: over the product of
/// the word carrier and the base, the cell at (b, (u, a)) holds the original
/// elements at the word u extended by the letter a. Words at the truncation
/// length leave nothing to extend, so those cells are empty. The source kit
/// is the tensor of the word kit with the base kit.
struct DerivativeResult {
    ProductStructure structure;  // word carrier x base
    Profunctor prof;
    Kit source_kit;
    Kit target_kit;
    std::vector<ElemId> from_elem;  // per derivative element, the original
    StabilizationReport stabilized;
};
DerivativeResult derivative(const Species& s, bool validate = true);

// --- generic elements and traces ---------------------------------------------------

/// An element presented as its own unit class: the evaluation of the species
/// at the sum of representables of its word, paired with the identity tuple.
struct GenericElement {
    ObjId target_obj = 0;     // object of the element in the target
    ObjId word_obj = 0;       // the element's word in the carrier
    ElemId elem = -1;         // the element itself
    SecId unit_section = -1;  // its class in the evaluation at the word's sum
};

/// The generic elements of a stable species' evaluated functor, listed
/// through the unit bijection (NotStabilized for unstable species).
std::vector<GenericElement> generic_elements(const Species& s, std::size_t budget = 200'000);

/// Verifies that the unit classes are exactly the generic classes of the
/// evaluation at every word (a class is generic when some member pairs its
/// element with a tuple that assembles an isomorphism of sums of
/// representables) and that the unit is injective and natural in both the
/// word and the target. This recovers the species from its evaluated
/// functor.
struct TraceReport {
    bool ok = true;
    int words_checked = 0;
    int elements = 0;
    std::string detail;
};
TraceReport trace_roundtrip(const Species& s, std::size_t budget = 200'000);

/// Universal-property genericity of a section of an evaluated functor: every
/// commuting square through the evaluation must admit exactly one diagonal
/// fill. The quantification runs over the argument itself plus the given
/// probe presheaves, with every natural map between them; the number of
/// squares examined is capped by `budget` (ProbeBudgetExceeded). For
/// functors evaluated from a stable species the probe family of quotiented
/// representables decides genericity exactly.
struct GenericCheck {
    bool generic = true;
    long long squares_checked = 0;
    std::string detail;  // the failing square
};
GenericCheck is_generic(const Species& s, const Presheaf& x, SecId g,
                        const std::vector<Presheaf>& probes, std::size_t budget = 100'000);

// --- one-letter traces of profunctors ----------------------------------------------

/// The species supported at one-letter words whose cells copy a stabilized
/// profunctor (NotStabilized otherwise): the trace of the functor the
/// profunctor induces by application. Longer and empty words carry nothing.
Species linear_trace(const Profunctor& p, const SymGroupoidPtr& sym, const Kit& source_kit,
                     const Kit& target_kit);

/// Round trip through the one-letter trace: the trace is stable, its cells
/// biject with the profunctor's through evaluation at each representable
/// (which also reproduces plain profunctor application), and its generic
/// elements vanish at every word of length other than one.
struct LinearRoundtrip {
    bool ok = true;
    int cells_checked = 0;
    int words_checked = 0;
    std::string detail;
};
LinearRoundtrip linear_roundtrip(const Profunctor& p, const SymGroupoidPtr& sym,
                                 const Kit& source_kit, const Kit& target_kit,
                                 std::size_t budget = 200'000);

// --- cartesian transformations ------------------------------------------------------

/// A natural map between presheaves over the species base, used as a test
/// edge for the pullback check.
struct PresheafMap {
    Presheaf from;
    Presheaf to;
    std::vector<SecId> component;
};

/// Checks that the transformation induced by an equivariant element family
/// has pullback naturality squares over every test map, by exact fiber
/// counting object by object. `detail` describes the first failing square.
struct CartesianReport {
    bool cartesian = true;
    int squares_checked = 0;
    std::string detail;
};
CartesianReport is_cartesian(const Species& p, const Species& q,
                             const std::vector<ElemId>& family,
                             const std::vector<PresheafMap>& tests,
                             std::size_t budget = 200'000);

// --- the two-wire disjunction fixture ------------------------------------------------

/// The disjunction of two marked input wires: the inputs groupoid has a
/// false and a true letter per wire, the output groupoid a false and a true
/// object. One structure consumes both false letters (in either order), and
/// one structure per wire consumes that wire's true letter.
struct ParallelOr {
    Species species;
    GroupoidPtr inputs;  // discrete: first-false, first-true, second-false, second-true
    GroupoidPtr output;  // discrete: false, true
};
ParallelOr parallel_or_fixture();

/// Evaluate the fixture on a presheaf with the given section counts at
/// (first-false, first-true, second-false, second-true); returns the section
/// counts at (false, true). Comes out to (ff * sf, ft + st).
std::pair<int, int> parallel_or_eval(const ParallelOr& fixture, const std::array<int, 4>& sizes,
                                     std::size_t budget = 200'000);

} // namespace kitbench
