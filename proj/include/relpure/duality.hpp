#pragma once

#include <vector>

#include "relpure/classes.hpp"
#include "relpure/purity.hpp"

namespace relpure {

/* Character module M^+ = Hom(M, Q/Z) of a finite module, realized at the
 * finite level: every character of M lands in (1/e)Z/Z where e is the
 * exponent of M.  Over Z/m we use the standard identification of (Z/m)^+
 * with Z/m itself and compute Hom_R(M, R); over Z we compute Hom(M, Z/e).
 * Pairing values are reported as numerators over `denominator`. */
struct DualModule {
  FPModule original;
  FPModule dual;   /* the character module, ready for further constructions */
  FPModule target; /* where raw evaluations land: R over Z/m, Z/e over Z */
  Int denominator; /* e = exponent of original */
  HomModule hom;   /* decode/encode between dual coordinates and actual maps */
};

/* throws InfiniteModule for modules with free part; verifies |M^+| = |M| and
 * non-degeneracy of the pairing (TheoryViolation on failure) */
DualModule pontryagin_dual(const FPModule& M);

/* <x, y> as the numerator k of k/e in Q/Z */
Int pair_eval(const DualModule& D, const Vec& x, const Vec& y);

/* exponent: least e > 0 with e.M = 0; throws InfiniteModule */
Int module_exponent(const FPModule& M);

/* contravariant action: f : M -> N induces dual(f) : N^+ -> M^+, the map
 * characterized by <x, dual(f)(y)>_M = <f(x), y>_N */
ModuleMap dual_map(const ModuleMap& f, const DualModule& DM, const DualModule& DN);
ModuleMap dual_map(const ModuleMap& f); /* convenience: constructs both duals */

/* arrow-reversed character sequence 0 -> C^+ -> B^+ -> A^+ -> 0; the
 * constructor verifies exactness at all three spots (TheoryViolation) */
struct DualSequence {
  DualModule A, B, C;
  ModuleMap proj_dual; /* C^+ -> B^+ */
  ModuleMap incl_dual; /* B^+ -> A^+ */
};
DualSequence dual_ses(const ShortExactSequence& seq);

/* S-pure flatness */
struct FlatReport {
  bool flat{false};
  bool decided{false};     /* true when the verdict is an exact decision */
  long refuting_index{-1}; /* corpus sequence whose tensoring lost injectivity */
  Vec kernel_witness;      /* nonzero element of M (x) A that dies in M (x) B */
  long sampled{0};         /* S-pure corpus sequences examined */
};

/* Exact decision over finite coefficient rings: M is S-pure flat iff M^+ is
 * S-pure injective.  The corpus cross-checks the verdict by tensoring M
 * against its S-pure members (contradiction raises TheoryViolation).  Over Z
 * the injectivity decision on the dual is unavailable, so only two verdicts
 * are exact: free modules are flat, and a corpus refutation is final; an
 * unrefuted non-free module over Z is reported with decided = false. */
FlatReport is_s_pure_flat(const FPModule& M, const ModuleClass& S,
                          const std::vector<ShortExactSequence>& corpus = {});

}  // namespace relpure
