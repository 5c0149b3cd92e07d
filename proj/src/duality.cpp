#include "relpure/duality.hpp"

#include <utility>

namespace relpure {

namespace {

/* the stacked evaluation map M -> target^(dual generators); its injectivity
 * is exactly left non-degeneracy of the pairing */
ModuleMap evaluation_map(const FPModule& M, const FPModule& target, const HomModule& hom) {
  const long g = hom.H.n;
  Mat P(g * target.n, M.n);
  for (long i = 0; i < g; ++i) {
    Vec e(static_cast<size_t>(g));
    e[i] = 1;
    Mat row = hom.decode(e).mat; /* target.n x M.n */
    for (long r = 0; r < target.n; ++r)
      for (long c = 0; c < M.n; ++c) P.at(i * target.n + r, c) = row.at(r, c);
  }
  FPModule pow(M.ring, g * target.n, Mat::kronecker(Mat::identity(g), target.rel));
  return make_map(M, pow, P);
}

}  // namespace

Int module_exponent(const FPModule& M) {
  CanonicalForm cf = canonicalize(M);
  if (!cf.is_finite()) throw InfiniteModule("exponent of a module with free part");
  return cf.factors.empty() ? Int(1) : cf.factors.back();
}

DualModule pontryagin_dual(const FPModule& M) {
  CanonicalForm cf = canonicalize(M);
  if (!cf.is_finite()) throw InfiniteModule("character module of an infinite module");

  DualModule D;
  D.original = M;
  D.denominator = cf.factors.empty() ? Int(1) : cf.factors.back();
  D.target = M.ring.is_z() ? FPModule::cyclic(M.ring, D.denominator)
                           : FPModule::free_module(M.ring, 1);
  D.hom = hom_module(M, D.target);
  D.dual = D.hom.H;

  /* |M^+| = |M| and the canonical map M -> evaluations is injective; for
   * finite modules the two together force two-sided non-degeneracy */
  if (canonicalize(D.dual).order() != cf.order())
    throw TheoryViolation("character module has the wrong order");
  if (!is_injective(evaluation_map(M, D.target, D.hom)))
    throw TheoryViolation("degenerate pairing: some element pairs to zero with every character");
  return D;
}

Int pair_eval(const DualModule& D, const Vec& x, const Vec& y) {
  ModuleMap f = D.hom.decode(y); /* original -> target, 1 x n matrix */
  Vec val = f.apply(x);          /* one coordinate in the target */
  const Ring& ring = D.original.ring;
  Int e = D.denominator;
  if (e == 0) throw TheoryViolation("pairing with zero denominator");
  Int raw = val[0];
  Int k;
  if (ring.is_z()) {
    k = raw; /* target is Z/e already */
  } else {
    /* raw/m = k/e in Q/Z; e * raw is divisible by m because e kills M */
    Int scaled = e * raw;
    if (scaled % ring.m != 0) throw TheoryViolation("pairing value outside (1/e)Z/Z");
    k = scaled / ring.m;
  }
  k %= e;
  if (k < 0) k += e;
  return k;
}

ModuleMap dual_map(const ModuleMap& f, const DualModule& DM, const DualModule& DN) {
  if (f.src.n != DM.original.n || f.src.rel != DM.original.rel)
    throw BadInput("dual_map: DM is not the dual of the source");
  if (f.dst.n != DN.original.n || f.dst.rel != DN.original.rel)
    throw BadInput("dual_map: DN is not the dual of the target");
  const FPModule& M = DM.original;
  const Ring& ring = M.ring;
  Mat result(DM.dual.n, DN.dual.n);
  Int eM = DM.denominator, eN = DN.denominator;
  Int d = gcd_int(eM, eN);
  for (long j = 0; j < DN.dual.n; ++j) {
    Vec ej(static_cast<size_t>(DN.dual.n));
    ej[j] = 1;
    Mat row = DN.hom.decode(ej).mat.mul(f.mat); /* 1 x n_M valued in DN.target */
    if (ring.is_z()) {
      /* convert v/eN to (v') / eM: v' = (v / (eN/d)) * (eM/d) */
      Int down = eN / d, up = eM / d;
      for (long c = 0; c < M.n; ++c) {
        Int v = row.at(0, c) % eN;
        if (v < 0) v += eN;
        if (v % down != 0)
          throw TheoryViolation("composite character does not land in (1/e)Z/Z");
        row.at(0, c) = (v / down) * up;
      }
    }
    ModuleMap comp = make_map(M, DM.target, row);
    std::optional<Vec> enc = DM.hom.encode(comp);
    if (!enc) throw TheoryViolation("composite character not recognized in the dual");
    for (long i = 0; i < DM.dual.n; ++i) result.at(i, j) = (*enc)[i];
  }
  return make_map(DN.dual, DM.dual, result);
}

ModuleMap dual_map(const ModuleMap& f) {
  DualModule DM = pontryagin_dual(f.src);
  DualModule DN = pontryagin_dual(f.dst);
  return dual_map(f, DM, DN);
}

DualSequence dual_ses(const ShortExactSequence& seq) {
  DualSequence ds{pontryagin_dual(seq.A), pontryagin_dual(seq.B), pontryagin_dual(seq.C),
                  ModuleMap{}, ModuleMap{}};
  ds.proj_dual = dual_map(seq.proj, ds.B, ds.C);
  ds.incl_dual = dual_map(seq.incl, ds.A, ds.B);
  if (!is_injective(ds.proj_dual))
    throw TheoryViolation("dual of a surjection is not injective");
  if (!is_surjective(ds.incl_dual))
    throw TheoryViolation("dual of an injection is not surjective");
  if (!is_zero_map(ds.incl_dual.compose(ds.proj_dual)))
    throw TheoryViolation("dual sequence is not a complex");
  if (!is_zero_module(homology_at(ds.proj_dual, ds.incl_dual)))
    throw TheoryViolation("dual sequence is not exact in the middle");
  return ds;
}

}  // namespace relpure
