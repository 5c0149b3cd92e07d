#pragma once
/*
 * Relative homological algebra over finite coefficient rings: S-pure
 * projective precovers, S-pure resolutions and coresolutions, relative Ext
 * computed from either side, and S-pure projective/injective dimensions
 * over exhaustively enumerated module corpora.
 *
 * The precover of M is the evaluation map out of one copy of U per
 * generator of Hom(U, M), summed over class members U; since R is a member
 * it is surjective, and its kernel inclusion is S-pure because every map
 * U -> M factors through it.  Resolutions iterate precovers on canonicalized
 * syzygies, coresolutions iterate preenvelopes on cosyzygies, and Ext^n is
 * the n-th cohomology of Hom(P_o, N) or, equivalently, of Hom(M, I^o); the
 * two are computed independently and compared by canonical form.
 */
#include "relpure/envelopes.hpp"

namespace relpure {

/* ---- S-pure projective precovers ---- */
struct Precover {
  FPModule source; /* P, a direct sum of class members */
  FPModule target; /* M */
  ModuleMap map;   /* pi : P -> M, surjective evaluation */
  std::vector<std::pair<long, ModuleMap>> index; /* (class member, f_gamma) */
};
/* verify = also check that the kernel inclusion is an S-pure monomorphism */
Precover precover(const FPModule& M, const ModuleClass& S, bool verify = false,
                  const EnvelopeCaps& caps = {});

/* find s : X -> p.src with p.mat * s ≡ T (mod p.dst relations) and s a
 * well-defined module map; the lifting problem along a surjection */
std::optional<Mat> solve_lift(const ModuleMap& p, const FPModule& X, const Mat& T);

/* ---- S-pure projectivity via section search ---- */
struct ProjVerdict {
  bool projective{false};
  std::optional<ModuleMap> section; /* s with pi . s = identity */
};
ProjVerdict is_s_pure_projective(const FPModule& M, const ModuleClass& S,
                                 const EnvelopeCaps& caps = {});

/* ---- resolutions and coresolutions ---- */
struct Resolution {
  FPModule M;
  std::vector<FPModule> terms; /* P_0, P_1, ... */
  std::vector<ModuleMap> maps; /* maps[0] : P_0 -> M, maps[i] : P_i -> P_{i-1} */
  bool stabilized{false}; /* terminated within depth: a syzygy was zero or
                           * itself S-pure projective (final term) */
};
Resolution resolve(const FPModule& M, const ModuleClass& S, long depth,
                   const EnvelopeCaps& caps = {});

struct Coresolution {
  FPModule N;
  std::vector<FPModule> terms; /* I^0, I^1, ... */
  std::vector<ModuleMap> maps; /* maps[0] : N -> I^0, maps[i] : I^{i-1} -> I^i */
  bool stabilized{false}; /* terminated within depth: a cosyzygy was zero or
                           * itself S-pure injective (final term) */
};
Coresolution coresolve(const FPModule& N, const ModuleClass& S, long depth,
                       const EnvelopeCaps& caps = {});

/* ---- relative Ext, both ways ---- */
struct ExtResult {
  long degree{0};
  FPModule via_projective; /* H^n of Hom(P_o, N) */
  FPModule via_injective;  /* H^n of Hom(M, I^o) */
  bool isomorphic{false};  /* canonical forms agree */
  std::string signature;   /* canonical signature of the common value */
};
ExtResult rel_ext(const FPModule& M, const FPModule& N, const ModuleClass& S, long n,
                  const EnvelopeCaps& caps = {});

/* n-th cohomology of Hom(P_o, N) resp. Hom(M, I^o) for an explicitly given
 * (co)resolution; rel_ext uses these with depth n + 2, and passing a deeper
 * one must not change the answer up to isomorphism */
FPModule ext_via_projective(const Resolution& R, const FPModule& N, long n);
FPModule ext_via_injective(const FPModule& M, const Coresolution& C, long n);

/* ---- S-pure dimensions over a bounded corpus ---- */
struct DimEntry {
  std::vector<Int> factors; /* invariant factors of the corpus module */
  long projective{-1};      /* exact dimension; -1 means ">= depth" */
  long injective{-1};
};
struct DimReport {
  Int order_bound{0};
  long depth{0};
  std::vector<DimEntry> entries;
  /* suprema over the corpus; when an entry is unresolved the supremum is
   * itself only the lower bound `depth` and the exact flag is false */
  long global_projective{0};
  bool projective_exact{true};
  long global_injective{0};
  bool injective_exact{true};
};
/* enumerates every module of order <= order_bound (invariant-factor chains
 * over Z/m are exhaustive) and measures both dimensions by iterated
 * syzygy/cosyzygy splitting up to depth */
DimReport pure_dims(const Ring& ring, const ModuleClass& S, const Int& order_bound, long depth,
                    const EnvelopeCaps& caps = {});

}  // namespace relpure
