#pragma once

// The word-groupoid exponential on kits, truncated at the materialization
// length. A word endomorphism belongs to the lifted union exactly when the
// base loop it traces at every position belongs to the union at that letter;
// the three structure maps (extraction to a letter, duplication through
// words of words, insertion of a letter) are profunctors over the same
// carriers, and flattening relates the two word layers.

#include <functional>
#include <string>

#include "kitbench/connectives.hpp"
#include "kitbench/groupoid.hpp"
#include "kitbench/kit.hpp"
#include "kitbench/profunctor.hpp"
#include "kitbench/sym.hpp"

namespace kitbench {

/// Lift a Boolean kit to the word groupoid: at each word, the union holds
/// the endomorphisms whose every cycle loop lies in the union at the letter
/// where the cycle starts. Throws NotBoolean for non-Boolean input,
/// BudgetExceeded when some word has more than `endo_cap` endomorphisms.
Kit bang_kit(const SymGroupoidPtr& sym, const Kit& k, int endo_cap = 48);

/// De Morgan dual of the lift: orthogonal of the lift of the orthogonal.
/// `sym_op` must be a word groupoid over the opposite of k's base; the
/// result lives on the opposite of sym_op's carrier.
Kit whynot_kit(const SymGroupoidPtr& sym_op, const Kit& k, int endo_cap = 48);

// --- flattening ----------------------------------------------------------------

/// Total letter count of a word over `inner`'s carrier objects.
int flattened_weight(const SymGroupoid& inner, const SymObjectV& outer_word);

/// Concatenation of the blocks of a word of words; `outer` must be built
/// over `inner`'s carrier. The result is a word over `inner`'s base.
SymObjectV flatten_object(const SymGroupoid& outer, const SymGroupoid& inner, ObjId w);

/// A word-of-words morphism flattens to the word morphism that sends the
/// k-th letter of block b to the image block at the image position of its
/// block morphism, carrying that morphism's part. Functorial and compatible
/// with inverses and powers.
SymMorphismV flatten_morphism(const SymGroupoid& outer, const SymGroupoid& inner, MorId m);

// --- structure maps --------------------------------------------------------------

/// Extraction: cell (a, u) holds the word morphisms from the one-letter word
/// of `a` into u; words act by postcomposition, letters by precomposition
/// through their one-letter word morphism.
Profunctor dereliction(const SymGroupoidPtr& sym, bool validate = false);

/// Duplication: cell (w, u) holds the word morphisms from flatten(w) into u;
/// words act by postcomposition, words of words by precomposition through
/// their flattening. Every object of `outer` must flatten inside `inner`'s
/// length bound (materialize `outer` with a flattened-weight filter).
Profunctor digging(const SymGroupoidPtr& inner, const SymGroupoidPtr& outer,
                   bool validate = false);

/// Insertion: cell (u, a) holds the word morphisms from u into the
/// one-letter word of `a`.
Profunctor coderiction(const SymGroupoidPtr& sym, bool validate = false);

// --- the exponential and the additive structure ----------------------------------

/// Compares the lift of the biproduct kit of `left` and `right` against the
/// tensor of their lifts, through the canonical splitting of a mixed word
/// into its left-letter and right-letter subwords. Checks the union masks in
/// both directions at every word up to `max_length`.
struct SeelyCheck {
    bool ok = true;
    int words_checked = 0;
    std::string detail;  // first mismatch
};
SeelyCheck seely_compare(const Kit& left, const Kit& right, int max_length,
                         std::size_t morphism_budget = 500'000, int endo_cap = 48);

} // namespace kitbench
