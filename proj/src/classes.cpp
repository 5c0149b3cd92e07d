#include "relpure/classes.hpp"

#include <set>

namespace relpure {

std::string class_kind_name(ClassKind k) {
  switch (k) {
    case ClassKind::CyclicFree: return "CyclicFree";
    case ClassKind::FinitelyPresentedBounded: return "FinitelyPresentedBounded";
    case ClassKind::CyclicCyclicallyPresented: return "CyclicCyclicallyPresented";
    case ClassKind::CyclicallyPresented: return "CyclicallyPresented";
    case ClassKind::TransposeOf: return "TransposeOf";
    case ClassKind::Explicit: return "Explicit";
  }
  return "?";
}

bool ModuleClass::contains_free_rank_one() const {
  std::string want = canonicalize(FPModule::free_module(ring, 1)).signature();
  for (const auto& m : members)
    if (canonicalize(m).signature() == want) return true;
  return false;
}

namespace {

struct Dedup {
  std::set<std::string> seen;
  std::vector<FPModule>* out;
  long cap;

  void add(const FPModule& M) {
    if (seen.insert(canonicalize(M).signature()).second) {
      out->push_back(M);
      if (static_cast<long>(out->size()) > cap)
        throw ScaleExceeded("class member cap " + std::to_string(cap) + " exceeded");
    }
  }
};

/* entry range for enumerations: [0, m) over Z/m, [0, entry_bound) over Z */
Int entry_limit(const Ring& ring, const ClassBounds& b) {
  if (!ring.is_z()) return ring.m;
  if (b.entry_bound <= 0) throw BadInput("entry_bound must be positive over the integers");
  return b.entry_bound;
}

/* odometer over `len` digits each in [0, lim) */
bool bump(std::vector<Int>& digits, const Int& lim) {
  size_t p = digits.size();
  while (p > 0) {
    --p;
    digits[p] += 1;
    if (digits[p] < lim) return true;
    digits[p] = 0;
  }
  return false;
}

}  // namespace

ModuleClass generate_class(const Ring& ring, ClassKind kind, const ClassBounds& bounds) {
  ModuleClass S;
  S.ring = ring;
  S.kind = kind;
  S.bounds = bounds;
  Dedup dd{{}, &S.members, bounds.member_cap};
  /* the ring itself always comes first, with the square zero presentation
   * that makes its transpose free again */
  dd.add(FPModule::free_module(ring, 1));

  switch (kind) {
    case ClassKind::CyclicFree:
      break; /* exactly {R} */

    case ClassKind::CyclicCyclicallyPresented: {
      /* R/(r), excluding the zero module (r a unit) */
      Int lim = entry_limit(ring, bounds);
      for (Int r = 0; r < lim; ++r) {
        FPModule M = FPModule::cyclic(ring, r);
        if (!is_zero_module(M)) dd.add(M);
      }
      break;
    }

    case ClassKind::CyclicallyPresented: {
      /* R^n / R.g — one relation vector; the zero module stays when the
       * enumeration produces it */
      Int lim = entry_limit(ring, bounds);
      for (long n = 1; n <= bounds.max_gens; ++n) {
        std::vector<Int> g(static_cast<size_t>(n), Int(0));
        do {
          Mat rel(n, 1);
          for (long i = 0; i < n; ++i) rel.at(i, 0) = g[i];
          dd.add(FPModule(ring, n, rel));
        } while (bump(g, lim));
      }
      break;
    }

    case ClassKind::FinitelyPresentedBounded: {
      Int lim = entry_limit(ring, bounds);
      for (long n = 1; n <= bounds.max_gens; ++n)
        for (long k = 0; k <= bounds.max_rels; ++k) {
          std::vector<Int> cells(static_cast<size_t>(n * k), Int(0));
          do {
            Mat rel(n, k);
            for (long i = 0; i < n; ++i)
              for (long j = 0; j < k; ++j) rel.at(i, j) = cells[i * k + j];
            dd.add(FPModule(ring, n, rel));
          } while (bump(cells, lim));
        }
      break;
    }

    case ClassKind::TransposeOf:
    case ClassKind::Explicit:
      throw BadInput("generate_class handles enumerated kinds only");
  }
  return S;
}

ModuleClass transpose_class(const ModuleClass& S) {
  ModuleClass T;
  T.ring = S.ring;
  T.kind = ClassKind::TransposeOf;
  T.bounds = S.bounds;
  Dedup dd{{}, &T.members, S.bounds.member_cap};
  for (const auto& m : S.members) dd.add(auslander_transpose(m));
  return T;
}

ModuleClass explicit_class(const Ring& ring, const std::vector<FPModule>& members) {
  ModuleClass S;
  S.ring = ring;
  S.kind = ClassKind::Explicit;
  Dedup dd{{}, &S.members, S.bounds.member_cap};
  for (const auto& m : members) {
    if (m.ring != ring) throw BadInput("class member over the wrong ring");
    dd.add(m);
  }
  return S;
}

}  // namespace relpure
