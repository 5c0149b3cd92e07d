#include "doctest.h"
#include "relpure/linalg.hpp"
#include "test_helpers.hpp"

using namespace relpure;
using rt::mat;
using rt::vec;

namespace {

/* Independent oracle: invariant factors from determinantal divisors,
 * d_i = D_i / D_{i-1} with D_i = gcd of all i x i minors. */
std::vector<Int> oracle_invariant_factors_z(const Mat& A) {
  std::vector<Int> out;
  Int prev = 1;
  long r = std::min(A.rows, A.cols);
  for (long i = 1; i <= r; ++i) {
    Int di = determinantal_divisor(A, i);
    if (di == 0) break;
    out.push_back(di / prev);
    prev = di;
  }
  return out;
}

void check_snf_contract(const Mat& A, const Ring& ring) {
  auto s = smith_normal_form(A, ring);
  /* re-multiplication */
  Mat lhs = s.U.mul(s.original).mul(s.V);
  if (ring.is_z()) {
    CHECK(lhs == s.D);
  } else {
    CHECK(lhs.reduced(ring) == s.D.reduced(ring));
  }
  /* diagonal, chain */
  for (long i = 0; i < s.D.rows; ++i)
    for (long j = 0; j < s.D.cols; ++j)
      if (i != j) CHECK(s.D.at(i, j) == 0);
  long lim = std::min(s.D.rows, s.D.cols);
  for (long i = 0; i + 1 < lim; ++i) {
    Int a = s.D.at(i, i), b = s.D.at(i + 1, i + 1);
    if (a != 0) CHECK(b % a == 0);
    if (a == 0) CHECK(b == 0);
  }
  /* transforms invertible: tracked inverses actually invert */
  CHECK(s.U.mul(s.Uinv).reduced(ring) == Mat::identity(A.rows).reduced(ring));
  CHECK(s.V.mul(s.Vinv).reduced(ring) == Mat::identity(A.cols).reduced(ring));
}

}  // namespace

TEST_CASE("smith normal form: pinned examples") {
  Ring z = Ring::integers();
  /* diag(2,3) -> diag(1,6) */
  auto s1 = smith_normal_form(mat({{2, 0}, {0, 3}}), z);
  CHECK(s1.D.at(0, 0) == 1);
  CHECK(s1.D.at(1, 1) == 6);
  /* zero matrix stays zero */
  auto s2 = smith_normal_form(Mat::zero(2, 2), z);
  CHECK(s2.D.is_zero());
  CHECK(s2.U == Mat::identity(2));
  CHECK(s2.V == Mat::identity(2));
  /* [[2,4],[6,8]] -> diag(2,4): d1 = gcd of entries, d1*d2 = |det| = 8 */
  auto s3 = smith_normal_form(mat({{2, 4}, {6, 8}}), z);
  CHECK(s3.D.at(0, 0) == 2);
  CHECK(s3.D.at(1, 1) == 4);
}

TEST_CASE("smith normal form: determinantal-divisor oracle on random matrices") {
  Ring z = Ring::integers();
  rt::Rng rng(12345);
  for (int trial = 0; trial < 60; ++trial) {
    long r = 1 + rng.below(4), c = 1 + rng.below(4);
    Mat A = rt::random_mat(rng, r, c, -9, 10);
    auto s = smith_normal_form(A, z);
    check_snf_contract(A, z);
    auto oracle = oracle_invariant_factors_z(A);
    /* compare the nonzero diagonal prefix with the oracle chain */
    size_t oi = 0;
    for (long i = 0; i < std::min(r, c); ++i) {
      Int d = s.D.at(i, i);
      if (d == 0) break;
      REQUIRE(oi < oracle.size());
      CHECK(d == oracle[oi]);
      ++oi;
    }
    CHECK(oi == oracle.size());
  }
}

TEST_CASE("smith normal form over Z/m: congruence contract") {
  rt::Rng rng(777);
  for (long m : {2, 4, 6, 8, 9, 12}) {
    Ring zm = Ring::mod(Int(m));
    for (int trial = 0; trial < 25; ++trial) {
      long r = 1 + rng.below(4), c = 1 + rng.below(4);
      Mat A = rt::random_mat(rng, r, c, 0, m);
      check_snf_contract(A, zm);
      /* unimodularity: |det U|, |det V| are units in Z/m */
      auto s = smith_normal_form(A, zm);
      Int det_u = determinantal_divisor(s.U, s.U.rows);
      Int det_v = determinantal_divisor(s.V, s.V.rows);
      CHECK(zm.is_unit(det_u));
      CHECK(zm.is_unit(det_v));
      /* diagonal entries are canonical associates: divisors of m */
      for (long i = 0; i < std::min(s.D.rows, s.D.cols); ++i) {
        Int d = s.D.at(i, i);
        if (d != 0) CHECK(Int(m) % d == 0);
      }
    }
  }
}

TEST_CASE("solve_linear: pinned examples") {
  Ring z4 = Ring::mod(Int(4));
  Ring z = Ring::integers();

  /* 2x = 1 over Z/4: no solution */
  CHECK(!solve_linear(mat({{2}}), vec({1}), z4).has_value());

  /* 2x = 0 over Z: x = 0, empty nullspace */
  auto r1 = solve_linear(mat({{2}}), vec({0}), z);
  REQUIRE(r1.has_value());
  CHECK(r1->x[0] == 0);
  CHECK(r1->nullspace.cols == 0);

  /* 2x = 2 over Z/4: x = 1 up to nullspace generated by 2 */
  auto r2 = solve_linear(mat({{2}}), vec({2}), z4);
  REQUIRE(r2.has_value());
  CHECK((r2->x[0] == 1 || r2->x[0] == 3));
  REQUIRE(r2->nullspace.cols >= 1);
  bool has2 = false;
  for (long c = 0; c < r2->nullspace.cols; ++c)
    if (r2->nullspace.at(0, c) == 2) has2 = true;
  CHECK(has2);
}

TEST_CASE("kernel_basis: pinned examples") {
  Ring z = Ring::integers();
  Ring z4 = Ring::mod(Int(4));
  CHECK(kernel_basis(mat({{2}}), z).cols == 0);
  auto k2 = kernel_basis(mat({{2}}), z4);
  REQUIRE(k2.cols == 1);
  CHECK(k2.at(0, 0) == 2);
  auto k3 = kernel_basis(mat({{1, 0}}), z);
  REQUIRE(k3.cols == 1);
  CHECK(k3.at(0, 0) == 0);
  CHECK((k3.at(1, 0) == 1 || k3.at(1, 0) == -1));
}

TEST_CASE("solve_linear: soundness and exhaustive completeness on small Z/m systems") {
  rt::Rng rng(424242);
  for (long m : {2, 3, 4, 6, 8, 9}) {
    Ring zm = Ring::mod(Int(m));
    for (int trial = 0; trial < 40; ++trial) {
      long rows = 1 + rng.below(3), cols = 1 + rng.below(3);
      Mat A = rt::random_mat(rng, rows, cols, 0, m);
      Vec b(rows);
      for (long i = 0; i < rows; ++i) b[i] = Int(rng.below(m));
      auto got = solve_linear(A, b, zm);
      /* oracle: enumerate all m^cols candidate solutions */
      bool any = false;
      std::vector<long> x(cols, 0);
      while (true) {
        bool ok = true;
        for (long i = 0; i < rows && ok; ++i) {
          Int acc = 0;
          for (long j = 0; j < cols; ++j) acc += A.at(i, j) * x[j];
          if (zm.reduce(acc) != zm.reduce(b[i])) ok = false;
        }
        if (ok) {
          any = true;
          break;
        }
        long p = 0;
        while (p < cols && x[p] == m - 1) x[p++] = 0;
        if (p == cols) break;
        ++x[p];
      }
      CHECK(any == got.has_value());
      if (got) {
        /* soundness of the returned solution and nullspace */
        Vec ax = A.mul_vec(got->x);
        for (long i = 0; i < rows; ++i) CHECK(zm.reduce(ax[i]) == zm.reduce(b[i]));
        for (long c = 0; c < got->nullspace.cols; ++c) {
          Vec av = A.mul_vec(got->nullspace.col(c));
          for (long i = 0; i < rows; ++i) CHECK(zm.reduce(av[i]) == 0);
        }
        /* completeness of the nullspace: every enumerated solution is
         * particular + combination of generators */
        std::vector<long> y(cols, 0);
        int checked = 0;
        while (checked < 200) {
          bool ok = true;
          for (long i = 0; i < rows && ok; ++i) {
            Int acc = 0;
            for (long j = 0; j < cols; ++j) acc += A.at(i, j) * y[j];
            if (zm.reduce(acc) != zm.reduce(b[i])) ok = false;
          }
          if (ok) {
            ++checked;
            Vec diff(cols);
            for (long j = 0; j < cols; ++j) diff[j] = Int(y[j]) - got->x[j];
            auto rep = solve_linear(got->nullspace, diff, zm);
            CHECK(rep.has_value());
          }
          long p = 0;
          while (p < cols && y[p] == m - 1) y[p++] = 0;
          if (p == cols) break;
          ++y[p];
        }
      }
    }
  }
}

TEST_CASE("hnf_solve agrees with solve_linear") {
  rt::Rng rng(999);
  Ring z = Ring::integers();
  for (int trial = 0; trial < 60; ++trial) {
    long rows = 1 + rng.below(3), cols = 1 + rng.below(4);
    Mat A = rt::random_mat(rng, rows, cols, -6, 7);
    Vec b(rows);
    for (long i = 0; i < rows; ++i) b[i] = Int(-6 + rng.below(13));
    auto a = solve_linear(A, b, z);
    auto h = hnf_solve(A, b, z);
    CHECK(a.has_value() == h.has_value());
    if (h) {
      Vec ax = A.mul_vec(*h);
      for (long i = 0; i < rows; ++i) CHECK(ax[i] == b[i]);
    }
  }
  for (long m : {4, 6, 9}) {
    Ring zm = Ring::mod(Int(m));
    for (int trial = 0; trial < 40; ++trial) {
      long rows = 1 + rng.below(3), cols = 1 + rng.below(3);
      Mat A = rt::random_mat(rng, rows, cols, 0, m);
      Vec b(rows);
      for (long i = 0; i < rows; ++i) b[i] = Int(rng.below(m));
      CHECK(solve_linear(A, b, zm).has_value() == hnf_solve(A, b, zm).has_value());
    }
  }
}
