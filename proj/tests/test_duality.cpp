#include <vector>

#include "doctest.h"
#include "relpure/duality.hpp"
#include "test_helpers.hpp"

using namespace relpure;

namespace {

const Ring Z = Ring::integers();
Ring Zm(long m) { return Ring::mod(Int(m)); }

Int gcd_i(Int a, Int b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    Int t = a % b;
    a = b;
    b = t;
  }
  return a;
}

/* the defining property of the dual map, compared inside Q/Z */
bool adjoint_identity(const ModuleMap& f, const DualModule& DM, const DualModule& DN,
                      const ModuleMap& fplus, const Vec& x, const Vec& y) {
  Int lhs = pair_eval(DM, x, fplus.apply(y));
  Int rhs = pair_eval(DN, f.apply(x), y);
  Int L = DM.denominator / gcd_i(DM.denominator, DN.denominator) * DN.denominator;
  return (lhs * (L / DM.denominator)) % L == (rhs * (L / DN.denominator)) % L;
}

FPModule random_finite(rt::Rng& rng, const Ring& ring, long max_n = 2) {
  for (;;) {
    long n = 1 + rng.below(max_n);
    Mat rel = ring.is_z() ? rt::random_mat(rng, n, n, -3, 4)
                          : rt::random_mat(rng, n, 1 + rng.below(2), 0, static_cast<long>(ring.m));
    FPModule M(ring, n, rel);
    CanonicalForm cf = canonicalize(M);
    if (!cf.is_finite()) continue;
    if (cf.order() > 32) continue;
    return M;
  }
}

/* a random hom f : M -> N found by solving for each generator image */
ModuleMap random_map(rt::Rng& rng, const FPModule& M, const FPModule& N) {
  HomModule h = hom_module(M, N);
  Vec coords(static_cast<size_t>(h.H.n));
  for (auto& c : coords) c = rng.below(6);
  return h.decode(coords);
}

}  // namespace

TEST_CASE("character modules of pinned examples") {
  /* (Z/2)^+ = Z/2, over Z and over Z/4 */
  DualModule a = pontryagin_dual(FPModule::cyclic(Z, Int(2)));
  CHECK(canonicalize(a.dual).factors == std::vector<Int>{Int(2)});
  CHECK(a.denominator == 2);
  DualModule b = pontryagin_dual(FPModule::cyclic(Zm(4), Int(2)));
  CHECK(canonicalize(b.dual).factors == std::vector<Int>{Int(2)});

  /* (Z/2 + Z/4)^+ = Z/2 + Z/4 */
  FPModule M(Z, 2, rt::mat({{2, 0}, {0, 4}}));
  DualModule c = pontryagin_dual(M);
  CHECK(canonicalize(c.dual).factors == std::vector<Int>{Int(2), Int(4)});
  CHECK(c.denominator == 4);

  /* 0^+ = 0, R^+ = R over Z/m */
  CHECK(is_zero_module(pontryagin_dual(FPModule::zero_module(Zm(6))).dual));
  CHECK(is_zero_module(pontryagin_dual(FPModule::zero_module(Z)).dual));
  DualModule r = pontryagin_dual(FPModule::free_module(Zm(6), 1));
  CHECK(isomorphic(r.dual, FPModule::free_module(Zm(6), 1)));

  /* no character module for infinite modules */
  CHECK_THROWS_AS(pontryagin_dual(FPModule::free_module(Z, 1)), InfiniteModule);
}

TEST_CASE("dual order and double dual across a corpus") {
  rt::Rng rng(31);
  for (int t = 0; t < 14; ++t) {
    Ring ring = t % 3 == 0 ? Z : (t % 3 == 1 ? Zm(8) : Zm(12));
    FPModule M = random_finite(rng, ring);
    DualModule D = pontryagin_dual(M);
    CHECK(canonicalize(D.dual).order() == canonicalize(M).order());
    DualModule DD = pontryagin_dual(D.dual);
    CHECK(isomorphic(DD.dual, M));
  }
}

TEST_CASE("pairing values and non-degeneracy data") {
  /* M = Z/4 over Z/8: dual generated by the character 1 |-> 2/8 = 1/4 */
  FPModule M = FPModule::cyclic(Zm(8), Int(4));
  DualModule D = pontryagin_dual(M);
  CHECK(D.denominator == 4);
  REQUIRE(D.dual.n >= 1);
  /* find a dual element pairing the generator to 1/4 */
  bool found = false;
  for (long c = 0; c < 8 && !found; ++c) {
    Vec y(static_cast<size_t>(D.dual.n));
    y[0] = c;
    found = pair_eval(D, rt::vec({1}), y) == 1;
  }
  CHECK(found);
  /* biadditivity in the first slot */
  Vec y1(static_cast<size_t>(D.dual.n));
  y1[0] = 1;
  Int p1 = pair_eval(D, rt::vec({1}), y1);
  Int p2 = pair_eval(D, rt::vec({2}), y1);
  CHECK((p1 * 2) % D.denominator == p2);
}

TEST_CASE("dual maps: pinned, functorial, adjoint") {
  /* (Z/2 --2--> Z/4)^+ is the surjection Z/4 -> Z/2, over Z/4 */
  FPModule M2 = FPModule::cyclic(Zm(4), Int(2));
  FPModule R4 = FPModule::free_module(Zm(4), 1);
  ModuleMap incl = make_map(M2, R4, rt::mat({{2}}));
  DualModule DM = pontryagin_dual(M2), DN = pontryagin_dual(R4);
  ModuleMap dd = dual_map(incl, DM, DN);
  CHECK(is_surjective(dd));
  CHECK(isomorphic(dd.src, R4));
  CHECK(isomorphic(dd.dst, M2));

  /* same statement over Z */
  FPModule A = FPModule::cyclic(Z, Int(2)), B = FPModule::cyclic(Z, Int(4));
  ModuleMap inclZ = make_map(A, B, rt::mat({{2}}));
  ModuleMap ddZ = dual_map(inclZ);
  CHECK(is_surjective(ddZ));
  CHECK(canonicalize(ddZ.src).factors == std::vector<Int>{Int(4)});
  CHECK(canonicalize(ddZ.dst).factors == std::vector<Int>{Int(2)});

  rt::Rng rng(47);
  for (int t = 0; t < 10; ++t) {
    Ring ring = t % 2 ? Zm(8) : Z;
    FPModule X = random_finite(rng, ring), Y = random_finite(rng, ring),
             W = random_finite(rng, ring);
    DualModule DX = pontryagin_dual(X), DY = pontryagin_dual(Y), DW = pontryagin_dual(W);

    /* identity and zero dualize to identity and zero */
    CHECK(maps_equal(dual_map(identity_map(X), DX, DX), identity_map(DX.dual)));
    CHECK(is_zero_map(dual_map(zero_map(X, Y), DX, DY)));

    /* contravariance: (g f)^+ = f^+ g^+ */
    ModuleMap f = random_map(rng, X, Y), g = random_map(rng, Y, W);
    ModuleMap lhs = dual_map(g.compose(f), DX, DW);
    ModuleMap rhs = dual_map(f, DX, DY).compose(dual_map(g, DY, DW));
    CHECK(maps_equal(lhs, rhs));

    /* adjoint identity on sampled elements */
    ModuleMap fplus = dual_map(f, DX, DY);
    for (int s = 0; s < 4; ++s) {
      Vec x(static_cast<size_t>(X.n)), y(static_cast<size_t>(DY.dual.n));
      for (auto& v : x) v = rng.below(8);
      for (auto& v : y) v = rng.below(8);
      CHECK(adjoint_identity(f, DX, DY, fplus, x, y));
    }
  }
}

TEST_CASE("dualizing a short exact sequence reverses and stays exact") {
  /* pinned: 0 -> Z/2 -> Z/4 -> Z/2 -> 0 over Z/4 */
  ShortExactSequence seq = make_ses(FPModule::free_module(Zm(4), 1), {rt::vec({2})});
  DualSequence ds = dual_ses(seq);
  CHECK(canonicalize(ds.B.dual).factors == std::vector<Int>{Int(4)});

  rt::Rng rng(77);
  for (int t = 0; t < 8; ++t) {
    Ring ring = t % 2 ? Zm(9) : Zm(4);
    FPModule B = random_finite(rng, ring);
    std::vector<Vec> gens;
    for (long i = 0; i < rng.below(3); ++i) {
      Vec v(static_cast<size_t>(B.n));
      for (auto& x : v) x = rng.below(static_cast<long>(ring.m));
      gens.push_back(v);
    }
    dual_ses(make_ses(B, gens)); /* constructor throws if exactness fails */
  }
  /* and over Z with finite modules */
  ShortExactSequence zseq = make_ses(FPModule::cyclic(Z, Int(8)), {rt::vec({2})});
  dual_ses(zseq);
  CHECK(true);
}
