#pragma once
/*
 * Module classes S: finite representative lists of finitely presented
 * modules, deduplicated by canonical form.  Generators for the standard
 * kinds (cyclic free, bounded finitely presented, cyclically presented
 * cyclic, cyclically presented) plus member-wise transpose.
 */
#include <string>
#include <vector>

#include "relpure/fpmod.hpp"

namespace relpure {

enum class ClassKind {
  CyclicFree,
  FinitelyPresentedBounded,
  CyclicCyclicallyPresented,
  CyclicallyPresented,
  TransposeOf,
  Explicit,
};

std::string class_kind_name(ClassKind k);

struct ClassBounds {
  long max_gens{1};
  long max_rels{1};
  Int entry_bound{0}; /* entries enumerated in [0, entry_bound); ignored over Z/m (uses [0, m)) */
  long member_cap{256};
};

struct ModuleClass {
  Ring ring;
  std::vector<FPModule> members; /* pairwise non-isomorphic */
  ClassKind kind{ClassKind::Explicit};
  ClassBounds bounds;

  bool contains_free_rank_one() const;
};

/* enumerate the class of the given kind; the ring (with its square
 * zero-relation presentation) is always adjoined first */
ModuleClass generate_class(const Ring& ring, ClassKind kind, const ClassBounds& bounds);

/* member-wise Auslander transpose, deduplicated */
ModuleClass transpose_class(const ModuleClass& S);

/* wrap an explicit member list (deduplicated, order of first occurrence) */
ModuleClass explicit_class(const Ring& ring, const std::vector<FPModule>& members);

}  // namespace relpure
