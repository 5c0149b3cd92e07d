#pragma once
/*
 * Short exact sequences 0 -> A -> B -> C -> 0 and the four equivalent
 * S-purity criteria, each an independent computation path:
 *
 *   (i)   DefinitionLift      Hom(U, B) -> Hom(U, C) surjective for U in S
 *   (ii)  TransposeTensor     tr(U) (x) A -> tr(U) (x) B injective
 *   (iii) MatrixIntersection  mu(A^n) = A^k cap mu(B^n) inside B^k
 *   (iv)  EquationTransfer    mu x = a soluble in B forces soluble in A
 *
 * where, for a member U with stored presentation U.rel (generators x
 * relation columns), mu := U.rel^T.  Failures carry re-checkable
 * certificates; agreement of all criteria is enforced by the cross-check.
 */
#include <optional>
#include <string>
#include <vector>

#include "relpure/classes.hpp"
#include "relpure/fpmod.hpp"

namespace relpure {

/* criteria cross-checks disagreeing is always an implementation bug */
struct CriteriaDisagree : TheoryViolation {
  explicit CriteriaDisagree(const std::string& w) : TheoryViolation(w) {}
};

struct ShortExactSequence {
  FPModule A, B, C;
  ModuleMap incl; /* A -> B, injective */
  ModuleMap proj; /* B -> C, surjective, kernel = image of incl */
};

/* A = submodule of B generated by the given elements, C = B/A; exactness of
 * the result is verified by construction checks */
ShortExactSequence make_ses(const FPModule& B, const std::vector<Vec>& a_gens);
/* same, but from an arbitrary injective map (the image is taken as A) */
ShortExactSequence ses_from_inclusion(const ModuleMap& incl);
/* full invariant re-verification (mono, epi, image = kernel) */
void verify_ses(const ShortExactSequence& seq);

enum class Criterion { DefinitionLift, TransposeTensor, MatrixIntersection, EquationTransfer };
std::string criterion_name(Criterion c);

/* failure data for (iii)/(iv): the system mu x = a with its B-solution */
struct LinearSystem {
  Mat mu;          /* U.k() x U.n over the ring */
  Vec a_abstract;  /* right-hand side in A^(U.k()) module coordinates */
  Vec a_ambient;   /* the same tuple pushed into B^(U.k()) coordinates */
  Vec b_solution;  /* x in B^(U.n) module coordinates solving mu x = a */
};

struct PurityCertificate {
  bool pure{true};
  Criterion criterion{Criterion::EquationTransfer};
  long witness_index{-1}; /* offending member of S, -1 on success */
  std::optional<LinearSystem> system;   /* (iii)/(iv) failures */
  std::optional<Mat> unliftable;        /* (i) failures: matrix of f : U -> C */
  std::optional<Vec> kernel_witness;    /* (ii) failures: element of tr(U) (x) A */
  /* success data: per member of S, criterion-specific lifting solutions */
  std::vector<std::vector<std::pair<Vec, Vec>>> lifts; /* (problem, solution) pairs */
  std::string detail;
};

struct PurityVerdict {
  bool pure{true};
  Criterion criterion_used{Criterion::EquationTransfer};
  PurityCertificate certificate;
};

PurityVerdict is_s_pure(const ShortExactSequence& seq, const ModuleClass& S, Criterion c);
/* default criterion: EquationTransfer over Z, DefinitionLift over Z/m */
PurityVerdict is_s_pure(const ShortExactSequence& seq, const ModuleClass& S);

struct CrossCheckReport {
  bool pure{true};
  std::vector<PurityVerdict> verdicts; /* one per criterion, in enum order */
};
/* runs all four criteria; throws CriteriaDisagree on any mismatch */
CrossCheckReport purity_cross_check(const ShortExactSequence& seq, const ModuleClass& S);

/* independent re-verification of a verdict's certificate using the Hermite
 * solver (and exhaustive element search on tiny finite instances) */
bool recheck_certificate(const ShortExactSequence& seq, const ModuleClass& S,
                         const PurityVerdict& v);

/* S-pure projective implies S-pure flat, checked at desk scale: requires
 * S subset tr(S) up to isomorphism, then verifies each U in S stays
 * injective under (x) on every S-pure corpus sequence */
struct Co26Report {
  bool inclusion_holds{true};
  long witness_index{-1}; /* member of S missing from tr(S), if any */
  long sequences_checked{0};
  long pure_sequences{0};
};
Co26Report co26_check(const ModuleClass& S, const std::vector<ShortExactSequence>& corpus);

/* classes S1, S2 give identical verdicts across the corpus?  On failure the
 * index of the first distinguishing sequence is returned */
struct ClassEquivalence {
  bool equivalent{true};
  long distinguishing_index{-1};
  bool s1_verdict{false}, s2_verdict{false};
};
ClassEquivalence purity_equivalent(const ModuleClass& S1, const ModuleClass& S2,
                                   const std::vector<ShortExactSequence>& corpus);

}  // namespace relpure
