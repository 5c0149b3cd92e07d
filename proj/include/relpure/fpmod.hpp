#pragma once
/*
 * Finitely presented modules over Z or Z/m, maps between them, canonical
 * forms via Smith reduction, and the functors Hom, tensor, direct sum and
 * transpose.  A module is the cokernel of its stored presentation
 * mu : R^k -> R^n (an n x k matrix whose columns are relations); elements
 * are length-n coordinate vectors modulo the column span.
 */
#include <algorithm>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "relpure/linalg.hpp"

namespace relpure {

struct FPModule {
  Ring ring;
  long n{0};  /* generators */
  Mat rel;    /* n x k, columns are relations */

  FPModule() = default;
  FPModule(Ring r, long gens, Mat relations);
  long k() const { return rel.cols; }
  static FPModule zero_module(const Ring& r) { return FPModule(r, 0, Mat::zero(0, 0)); }
  /* free of given rank, presented with a square block of zero relations so
   * that the stored transpose of a free module is again free */
  static FPModule free_module(const Ring& r, long rank);
  static FPModule cyclic(const Ring& r, const Int& d); /* R/(d), one relation */
};

/* membership of v in the column span of W modulo the relations of X;
 * returns coefficients on W's columns when solvable */
std::optional<Vec> express_in(const FPModule& X, const Mat& W, const Vec& v);
bool is_zero_element(const FPModule& X, const Vec& v);
bool elements_equal(const FPModule& X, const Vec& a, const Vec& b);

struct ModuleMap {
  FPModule src, dst;
  Mat mat; /* dst.n x src.n, acts on generator coordinates */

  Vec apply(const Vec& x) const;
  ModuleMap compose(const ModuleMap& inner) const; /* this after inner */
};

/* checked constructor: verifies the matrix carries source relations into the
 * target relation span */
ModuleMap make_map(const FPModule& src, const FPModule& dst, const Mat& m);
ModuleMap identity_map(const FPModule& M);
ModuleMap zero_map(const FPModule& src, const FPModule& dst);
bool maps_equal(const ModuleMap& f, const ModuleMap& g);
bool is_zero_map(const ModuleMap& f);
bool is_injective(const ModuleMap& f);
bool is_surjective(const ModuleMap& f);

/*
 * Invariant-factor decomposition.  factors lists the non-unit cyclic orders
 * in ascending divisibility (over Z/m every entry divides m; a full factor
 * R itself is recorded as m); free_rank counts Z summands (integers only).
 * to_canon / from_canon are mutually inverse isomorphisms with the diagonal
 * model `canon`, verified on construction.
 */
struct CanonicalForm {
  std::vector<Int> factors;
  long free_rank{0};
  FPModule canon;
  ModuleMap to_canon, from_canon;

  bool is_finite() const { return free_rank == 0; }
  Int order() const; /* throws InfiniteModule when infinite */
  std::string signature() const; /* isomorphism-class key (includes ring) */
};

CanonicalForm canonicalize(const FPModule& M);
bool is_zero_module(const FPModule& M);
bool isomorphic(const FPModule& M, const FPModule& N);

/* smallest generating set for the column span of A (diagonal compression);
 * used to keep presentations short along subquotient chains */
Mat column_reduce(const Mat& A, const Ring& ring);

/* ---- constructions ---- */
struct DirectSum {
  FPModule sum;
  std::vector<ModuleMap> inj, proj;
};
DirectSum direct_sum(const std::vector<FPModule>& parts);

FPModule tensor(const FPModule& M, const FPModule& N);
ModuleMap tensor_maps(const ModuleMap& f, const ModuleMap& g);
/* coordinates of the pure tensor x (x) y inside tensor(M, N) */
Vec tensor_elems(const FPModule& M, const FPModule& N, const Vec& x, const Vec& y);

/* cokernel of the transposed stored presentation (presentation-dependent) */
FPModule auslander_transpose(const FPModule& M);

/* ---- subobjects ---- */
struct SubmoduleData {
  FPModule sub;
  ModuleMap incl; /* sub -> ambient; matrix columns are the chosen generators */
};
SubmoduleData submodule(const FPModule& X, const Mat& gens);
std::pair<FPModule, ModuleMap> quotient_by(const FPModule& X, const Mat& gens);
SubmoduleData kernel_of(const ModuleMap& f);
SubmoduleData image_of(const ModuleMap& f);
std::pair<FPModule, ModuleMap> cokernel_of(const ModuleMap& f);
/* homology ker(g)/im(f) at the middle of  A --f--> B --g--> C, g.f = 0 */
FPModule homology_at(const ModuleMap& f, const ModuleMap& g);

/* ---- Hom ---- */
struct HomModule {
  FPModule M, N;
  FPModule H;       /* Hom(M, N) as a module */
  FPModule ambient; /* N^(n_M), column-stacked map matrices */
  Mat gen_lift;     /* (n_M * n_N) x n_H: ambient coordinates of H's generators */

  ModuleMap decode(const Vec& h) const;
  std::optional<Vec> encode(const ModuleMap& f) const;
};
HomModule hom_module(const FPModule& M, const FPModule& N);

/* induced map Hom(M, N) -> Hom(M', N') from pre : M' -> M and post : N -> N'
 * (pass nullptr for an identity on either side) */
ModuleMap induced_hom_map(const HomModule& from, const HomModule& to, const ModuleMap* pre,
                          const ModuleMap* post);

/* ---- element enumeration ---- */
/* visits every element exactly once (odometer over canonical coordinates,
 * first coordinate slowest); throws when infinite or above cap (cap 0 = off) */
void enumerate_elements(const FPModule& M, const Int& cap,
                        const std::function<void(const Vec&)>& visit);
std::vector<Vec> element_list(const FPModule& M, const Int& cap);
Int module_order(const FPModule& M); /* throws InfiniteModule */

/* additive order of an element; throws InfiniteModule on infinite order */
Int element_order(const CanonicalForm& cf, const Vec& x);

/* canonical coordinate key: equal strings iff equal elements */
std::string element_key(const CanonicalForm& cf, const Vec& x);

}  // namespace relpure
