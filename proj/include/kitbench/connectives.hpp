#pragma once

// Connectives on groupoids-with-kits. The multiplicatives (tensor, par,
// linear implication) require Boolean inputs and produce Boolean kits on a
// product groupoid; the additives (with, plus) work on any kits and coincide
// on the biproduct. Everything is computed on union masks via the power
// rules in kit.hpp.

#include "kitbench/groupoid.hpp"
#include "kitbench/kit.hpp"

namespace kitbench {

struct KitOnProduct {
    ProductStructure structure;
    Kit kit;
};

struct KitOnCoproduct {
    CoproductStructure structure;
    Kit kit;
};

/// Tensor: pairs of family members, closed up to a Boolean kit on A x B.
KitOnProduct tensor_kits(const Kit& a, const Kit& b);

/// Par: the dual of the tensor of the duals, on A x B.
KitOnProduct par_kits(const Kit& a, const Kit& b);

/// Linear implication, on op(A) x B: subgroups all of whose elements
/// (alpha, beta) push membership forward (alpha in the union of A's kit
/// forces beta into B's) and pull orthogonality back (beta in the orthogonal
/// union forces alpha into A's orthogonal union).
KitOnProduct limp_kits(const Kit& a, const Kit& b);

/// Additives: the kit at an injected object is the component kit. The two
/// operations agree because the underlying groupoid sum is a biproduct; both
/// names are kept for the two roles they play.
KitOnCoproduct with_kits(const Kit& a, const Kit& b);
KitOnCoproduct plus_kits(const Kit& a, const Kit& b);

/// Dual object: the orthogonal kit on the opposite groupoid.
Kit dual_kit(const Kit& k);

} // namespace kitbench
