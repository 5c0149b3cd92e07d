#include <map>
#include <set>
#include <string>

#include "doctest.h"
#include "relpure/purity.hpp"
#include "test_helpers.hpp"

using namespace relpure;

namespace {

const Ring Z = Ring::integers();
Ring Zm(long m) { return Ring::mod(Int(m)); }

FPModule random_module(rt::Rng& rng, const Ring& ring, long max_n = 2, long max_k = 2) {
  long n = 1 + rng.below(max_n);
  long k = rng.below(max_k + 1);
  Mat rel = ring.is_z() ? rt::random_mat(rng, n, k, -3, 4)
                        : rt::random_mat(rng, n, k, 0, static_cast<long>(ring.m));
  return FPModule(ring, n, rel);
}

/* a random sequence 0 -> <random elements> -> B -> quotient -> 0 */
ShortExactSequence random_ses(rt::Rng& rng, const Ring& ring) {
  for (;;) {
    FPModule B = random_module(rng, ring);
    if (ring.is_z()) {
      /* keep B finite so the definitional oracle can enumerate it */
      Mat sq = rt::random_mat(rng, B.n, B.n, -3, 4);
      if (determinantal_divisor(sq, B.n) == 0) continue;
      B = FPModule(Z, B.n, sq);
    }
    if (module_order(B) > 36) continue;
    long t = rng.below(3);
    std::vector<Vec> gens;
    long spread = ring.is_z() ? 6 : static_cast<long>(ring.m);
    for (long i = 0; i < t; ++i) {
      Vec v(static_cast<size_t>(B.n));
      for (auto& x : v) x = rng.below(spread);
      gens.push_back(std::move(v));
    }
    return make_ses(B, gens);
  }
}

/* definitional purity: every map member -> C, built by element enumeration,
 * must lift through the projection elementwise */
bool oracle_pure(const ShortExactSequence& seq, const ModuleClass& S) {
  auto belems = element_list(seq.B, Int(128));
  auto celems = element_list(seq.C, Int(128));
  CanonicalForm cfC = canonicalize(seq.C);
  /* fibers of proj over each element of C */
  std::map<std::string, std::vector<Vec>> fiber;
  for (const auto& b : belems) fiber[element_key(cfC, seq.proj.apply(b))].push_back(b);

  for (const auto& U : S.members) {
    const long p = U.n;
    auto tuple_respects = [&](const FPModule& X, const std::vector<Vec>& tup) {
      for (long c = 0; c < U.k(); ++c) {
        Vec s(static_cast<size_t>(X.n));
        for (long i = 0; i < p; ++i)
          for (long r = 0; r < X.n; ++r) s[r] += U.rel.at(i, c) * tup[i][r];
        if (!is_zero_element(X, s)) return false;
      }
      return true;
    };
    /* odometer over all p-tuples of C-elements */
    std::vector<size_t> fi(static_cast<size_t>(p), 0);
    for (;;) {
      std::vector<Vec> ftup;
      for (long i = 0; i < p; ++i) ftup.push_back(celems[fi[i]]);
      if (tuple_respects(seq.C, ftup)) {
        /* search a lift through the fibers */
        std::vector<const std::vector<Vec>*> pool;
        for (long i = 0; i < p; ++i) pool.push_back(&fiber[element_key(cfC, ftup[i])]);
        std::vector<size_t> gi(static_cast<size_t>(p), 0);
        bool lifted = false;
        for (;;) {
          std::vector<Vec> gtup;
          for (long i = 0; i < p; ++i) gtup.push_back((*pool[i])[gi[i]]);
          if (tuple_respects(seq.B, gtup)) {
            lifted = true;
            break;
          }
          long q = p;
          bool done = true;
          while (q > 0) {
            --q;
            if (++gi[q] < pool[q]->size()) {
              done = false;
              break;
            }
            gi[q] = 0;
          }
          if (done) break;
        }
        if (!lifted) return false;
      }
      long q = p;
      bool done = true;
      while (q > 0) {
        --q;
        if (++fi[q] < celems.size()) {
          done = false;
          break;
        }
        fi[q] = 0;
      }
      if (done) break;
    }
  }
  return true;
}

/* random unimodular change of coordinates (elementary operations) */
Mat random_unimodular(rt::Rng& rng, long n, const Ring& ring) {
  Mat P = Mat::identity(n);
  for (int step = 0; step < 6 && n >= 1; ++step) {
    long op = rng.below(n >= 2 ? 3 : 1);
    if (op == 0 && !ring.is_z()) {
      /* scale a row by a unit */
      long i = rng.below(n);
      Int u = 1 + rng.below(static_cast<long>(ring.m) - 1);
      if (!ring.is_unit(u)) continue;
      for (long j = 0; j < n; ++j) P.at(i, j) = ring.reduce(P.at(i, j) * u);
    } else if (op == 1) {
      long i = rng.below(n), j = rng.below(n);
      if (i == j) continue;
      Int c = 1 + rng.below(3);
      for (long t = 0; t < n; ++t) P.at(i, t) = ring.reduce(P.at(i, t) + c * P.at(j, t));
    } else if (op == 2) {
      long i = rng.below(n), j = rng.below(n);
      for (long t = 0; t < n; ++t) std::swap(P.at(i, t), P.at(j, t));
    }
  }
  return P;
}

const std::vector<Criterion> kAll = {Criterion::DefinitionLift, Criterion::TransposeTensor,
                                     Criterion::MatrixIntersection, Criterion::EquationTransfer};

}  // namespace

TEST_CASE("sequence construction and validation") {
  /* B = Z/4 over Z/4 with A generated by 2 */
  ShortExactSequence s = make_ses(FPModule::free_module(Zm(4), 1), {rt::vec({2})});
  CHECK(canonicalize(s.A).factors == std::vector<Int>{Int(2)});
  CHECK(canonicalize(s.C).factors == std::vector<Int>{Int(2)});

  /* empty generators: C = B; all generators: C = 0 */
  FPModule M(Zm(6), 2, rt::mat({{2, 0}, {0, 3}}));
  ShortExactSequence s0 = make_ses(M, {});
  CHECK(is_zero_module(s0.A));
  CHECK(isomorphic(s0.C, M));
  ShortExactSequence s1 = make_ses(M, {rt::vec({1, 0}), rt::vec({0, 1})});
  CHECK(is_zero_module(s1.C));
  CHECK(isomorphic(s1.A, M));

  /* ses_from_inclusion rejects non-injective maps */
  FPModule R4 = FPModule::free_module(Zm(4), 1);
  CHECK_THROWS_AS(ses_from_inclusion(make_map(R4, R4, rt::mat({{2}}))), BadInput);
}

TEST_CASE("pinned purity over the integers") {
  /* 0 -> Z --2--> Z -> Z/2 -> 0 */
  FPModule ZZ = FPModule::free_module(Z, 1);
  ShortExactSequence seq = ses_from_inclusion(make_map(ZZ, ZZ, rt::mat({{2}})));
  CHECK(canonicalize(seq.C).factors == std::vector<Int>{Int(2)});

  ModuleClass S2 = explicit_class(Z, {FPModule::cyclic(Z, Int(2))});
  ModuleClass S3 = explicit_class(Z, {FPModule::cyclic(Z, Int(3))});
  ModuleClass SR = generate_class(Z, ClassKind::CyclicFree, {.entry_bound = Int(1)});

  for (Criterion c : kAll) {
    PurityVerdict v2 = is_s_pure(seq, S2, c);
    CHECK_FALSE(v2.pure);
    CHECK(recheck_certificate(seq, S2, v2));
    PurityVerdict v3 = is_s_pure(seq, S3, c);
    CHECK(v3.pure);
    CHECK(recheck_certificate(seq, S3, v3));
    CHECK(is_s_pure(seq, SR, c).pure);
  }

  /* certificate content for the equation-transfer failure */
  PurityVerdict v = is_s_pure(seq, S2, Criterion::EquationTransfer);
  REQUIRE(v.certificate.system.has_value());
  CHECK(v.certificate.system->mu == rt::mat({{2}}));
  CHECK(v.certificate.witness_index == 0);

  /* the definition-lift failure names an unliftable map */
  PurityVerdict vi = is_s_pure(seq, S2, Criterion::DefinitionLift);
  REQUIRE(vi.certificate.unliftable.has_value());
  CHECK_FALSE(is_zero_element(seq.C, vi.certificate.unliftable->col(0)));
}

TEST_CASE("pinned purity over Z/4: the classic non-split embedding") {
  ShortExactSequence seq = make_ses(FPModule::free_module(Zm(4), 1), {rt::vec({2})});
  ModuleClass Scc = generate_class(Zm(4), ClassKind::CyclicCyclicallyPresented, {});
  ModuleClass SR = generate_class(Zm(4), ClassKind::CyclicFree, {});

  for (Criterion c : kAll) {
    PurityVerdict v = is_s_pure(seq, Scc, c);
    CHECK_FALSE(v.pure);
    CHECK(recheck_certificate(seq, Scc, v));
    CHECK(is_s_pure(seq, SR, c).pure);
  }
  CHECK_FALSE(oracle_pure(seq, Scc));
  CHECK(oracle_pure(seq, SR));
}

TEST_CASE("split sequences are pure for every class") {
  rt::Rng rng(101);
  for (int t = 0; t < 6; ++t) {
    Ring ring = t % 2 ? Zm(8) : Zm(6);
    FPModule A = random_module(rng, ring), C = random_module(rng, ring);
    DirectSum ds = direct_sum({A, C});
    ShortExactSequence seq = ses_from_inclusion(ds.inj[0]);
    ModuleClass S = generate_class(ring, ClassKind::CyclicCyclicallyPresented, {});
    CrossCheckReport rep = purity_cross_check(seq, S);
    CHECK(rep.pure);
    for (const auto& v : rep.verdicts) CHECK(recheck_certificate(seq, S, v));
  }
}

TEST_CASE("all four criteria match the definitional oracle on a random corpus") {
  rt::Rng rng(2024);
  long checked = 0, impure = 0;
  for (long m : {4, 6, 8}) {
    ModuleClass Scc = generate_class(Zm(m), ClassKind::CyclicCyclicallyPresented, {});
    ModuleClass Scp = generate_class(Zm(m), ClassKind::CyclicallyPresented, {.max_gens = 2});
    std::vector<ShortExactSequence> seqs;
    /* seed the socle embedding: non-split exactly when m is not squarefree */
    seqs.push_back(make_ses(FPModule::free_module(Zm(m), 1), {rt::vec({2})}));
    for (int t = 0; t < 6; ++t) seqs.push_back(random_ses(rng, Zm(m)));
    for (const ShortExactSequence& seq : seqs) {
      for (const ModuleClass* S : {&Scc, &Scp}) {
        bool expect = oracle_pure(seq, *S);
        CrossCheckReport rep = purity_cross_check(seq, *S); /* throws on disagreement */
        CHECK(rep.pure == expect);
        ++checked;
        impure += rep.pure ? 0 : 1;
        for (const auto& v : rep.verdicts) CHECK(recheck_certificate(seq, *S, v));
      }
    }
  }
  /* integer sequences with finite total module */
  ModuleClass SZ = explicit_class(
      Z, {FPModule::free_module(Z, 1), FPModule::cyclic(Z, Int(2)), FPModule::cyclic(Z, Int(4))});
  std::vector<ShortExactSequence> zseqs;
  zseqs.push_back(make_ses(FPModule::cyclic(Z, Int(4)), {rt::vec({2})}));
  for (int t = 0; t < 6; ++t) zseqs.push_back(random_ses(rng, Z));
  for (const ShortExactSequence& seq : zseqs) {
    bool expect = oracle_pure(seq, SZ);
    CrossCheckReport rep = purity_cross_check(seq, SZ);
    CHECK(rep.pure == expect);
    ++checked;
    impure += rep.pure ? 0 : 1;
  }
  /* the corpus must exercise both outcomes */
  CHECK(checked >= 40);
  CHECK(impure >= 5);
  CHECK(impure <= checked - 5);
}

TEST_CASE("monotonicity: a larger class imposes a stronger purity condition") {
  rt::Rng rng(77);
  ModuleClass big = generate_class(Zm(8), ClassKind::CyclicCyclicallyPresented, {});
  ModuleClass small = explicit_class(Zm(8), {big.members[0], big.members[1]});
  for (int t = 0; t < 10; ++t) {
    ShortExactSequence seq = random_ses(rng, Zm(8));
    if (is_s_pure(seq, big).pure) CHECK(is_s_pure(seq, small).pure);
  }
}

TEST_CASE("purity descends to intermediate extensions") {
  rt::Rng rng(88);
  ModuleClass S = generate_class(Zm(4), ClassKind::CyclicCyclicallyPresented, {});
  int interesting = 0;
  for (int t = 0; t < 25; ++t) {
    FPModule L = random_module(rng, Zm(4), 3, 2);
    if (module_order(L) > 64) continue;
    /* A generated by one element, B by that element plus another */
    Vec a(static_cast<size_t>(L.n)), b(static_cast<size_t>(L.n));
    for (auto& x : a) x = rng.below(4);
    for (auto& x : b) x = rng.below(4);
    ShortExactSequence aInL = make_ses(L, {a});
    if (!is_s_pure(aInL, S).pure) continue;
    ++interesting;
    SubmoduleData Bsub = submodule(L, Mat::col_vec(a).hstack(Mat::col_vec(b)));
    Vec e0(static_cast<size_t>(Bsub.sub.n));
    e0[0] = 1;
    ShortExactSequence aInB = make_ses(Bsub.sub, {e0});
    CHECK(is_s_pure(aInB, S).pure);
  }
  CHECK(interesting >= 5);
}

TEST_CASE("purity verdicts transport along isomorphisms") {
  rt::Rng rng(99);
  for (int t = 0; t < 20; ++t) {
    Ring ring = t % 2 ? Zm(4) : Zm(6);
    ModuleClass S = generate_class(ring, ClassKind::CyclicCyclicallyPresented, {});
    ShortExactSequence seq = random_ses(rng, ring);
    Mat P = random_unimodular(rng, seq.B.n, ring);
    FPModule B2(ring, seq.B.n, P.mul(seq.B.rel));
    Mat gens2 = P.mul(seq.incl.mat);
    std::vector<Vec> cols;
    for (long c = 0; c < gens2.cols; ++c) cols.push_back(gens2.col(c));
    ShortExactSequence seq2 = make_ses(B2, cols);
    CHECK(is_s_pure(seq, S).pure == is_s_pure(seq2, S).pure);
  }
}

TEST_CASE("certificate re-verification rejects tampered certificates") {
  FPModule ZZ = FPModule::free_module(Z, 1);
  ShortExactSequence seq = ses_from_inclusion(make_map(ZZ, ZZ, rt::mat({{2}})));
  ModuleClass S2 = explicit_class(Z, {FPModule::cyclic(Z, Int(2))});
  ModuleClass S3 = explicit_class(Z, {FPModule::cyclic(Z, Int(3))});

  PurityVerdict bad = is_s_pure(seq, S2, Criterion::EquationTransfer);
  REQUIRE_FALSE(bad.pure);
  {
    PurityVerdict t = bad;
    t.certificate.system->a_abstract[0] += 1;
    CHECK_FALSE(recheck_certificate(seq, S2, t));
  }
  {
    PurityVerdict t = bad;
    t.certificate.system->b_solution[0] += 1;
    CHECK_FALSE(recheck_certificate(seq, S2, t));
  }
  {
    PurityVerdict t = is_s_pure(seq, S2, Criterion::DefinitionLift);
    t.certificate.unliftable = Mat::zero(seq.C.n, 1); /* the zero map lifts */
    CHECK_FALSE(recheck_certificate(seq, S2, t));
  }
  {
    PurityVerdict t = is_s_pure(seq, S2, Criterion::TransposeTensor);
    REQUIRE(t.certificate.kernel_witness.has_value());
    for (auto& x : *t.certificate.kernel_witness) x = 0; /* zero is not a witness */
    CHECK_FALSE(recheck_certificate(seq, S2, t));
  }
  {
    PurityVerdict good = is_s_pure(seq, S3, Criterion::EquationTransfer);
    REQUIRE(good.pure);
    REQUIRE(recheck_certificate(seq, S3, good));
    PurityVerdict t = good;
    REQUIRE(!t.certificate.lifts[0].empty());
    t.certificate.lifts[0][0].second[0] += 1; /* break the recorded solution */
    CHECK_FALSE(recheck_certificate(seq, S3, t));
  }
}

TEST_CASE("projective members stay flat on pure sequences") {
  rt::Rng rng(123);
  /* hypothesis holds: S = {R} and a self-transpose explicit class */
  std::vector<ShortExactSequence> corpus;
  for (int t = 0; t < 8; ++t) corpus.push_back(random_ses(rng, Zm(4)));

  ModuleClass SR = generate_class(Zm(4), ClassKind::CyclicFree, {});
  Co26Report r1 = co26_check(SR, corpus);
  CHECK(r1.inclusion_holds);
  CHECK(r1.sequences_checked == 8);
  CHECK(r1.pure_sequences == 8); /* cyclic-free purity holds for every sequence */

  ModuleClass S2 = generate_class(Zm(4), ClassKind::CyclicCyclicallyPresented, {});
  Co26Report r2 = co26_check(S2, corpus);
  CHECK(r2.inclusion_holds);
  CHECK(r2.pure_sequences <= r2.sequences_checked);

  /* hypothesis fails: a member not isomorphic to any transpose */
  ModuleClass S3 = explicit_class(
      Z, {FPModule::free_module(Z, 1), FPModule(Z, 2, rt::mat({{2}, {0}}))});
  Co26Report r3 = co26_check(S3, {});
  CHECK_FALSE(r3.inclusion_holds);
  CHECK(r3.witness_index == 1);
}

TEST_CASE("purity equivalence of classes") {
  rt::Rng rng(321);
  std::vector<ShortExactSequence> corpus;
  FPModule ZZ = FPModule::free_module(Z, 1);
  corpus.push_back(ses_from_inclusion(make_map(ZZ, ZZ, rt::mat({{2}}))));
  for (int t = 0; t < 5; ++t) corpus.push_back(random_ses(rng, Z));

  ModuleClass SR = generate_class(Z, ClassKind::CyclicFree, {.entry_bound = Int(1)});
  ModuleClass SR2 = explicit_class(Z, {FPModule::free_module(Z, 1), FPModule::cyclic(Z, Int(2))});
  ClassEquivalence same = purity_equivalent(SR, SR, corpus);
  CHECK(same.equivalent);
  ClassEquivalence diff = purity_equivalent(SR, SR2, corpus);
  CHECK_FALSE(diff.equivalent);
  CHECK(diff.distinguishing_index == 0);
  CHECK(diff.s1_verdict);
  CHECK_FALSE(diff.s2_verdict);
}

TEST_CASE("transpose of cyclically presented matches cyclic quotients at desk scale") {
  /* small slice of the ideal-class coincidence over Z/4 */
  ModuleClass Scp = generate_class(Zm(4), ClassKind::CyclicallyPresented, {.max_gens = 2});
  ModuleClass T = transpose_class(Scp);
  ModuleClass ideals = explicit_class(Zm(4), {FPModule::free_module(Zm(4), 1),
                                              FPModule::cyclic(Zm(4), Int(2)),
                                              FPModule::cyclic(Zm(4), Int(1))});
  rt::Rng rng(555);
  std::vector<ShortExactSequence> corpus;
  corpus.push_back(make_ses(FPModule::free_module(Zm(4), 1), {rt::vec({2})}));
  for (int t = 0; t < 12; ++t) corpus.push_back(random_ses(rng, Zm(4)));
  ClassEquivalence eq = purity_equivalent(T, ideals, corpus);
  CHECK(eq.equivalent);
}
