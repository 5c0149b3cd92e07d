#pragma once
/*
 * Exact linear algebra over Z and Z/m: dense arbitrary-precision matrices,
 * Smith normal form with transform tracking, linear-system solving and
 * kernel computation.  Z/m systems are decided by lifting to Z with an
 * m*I augmentation block, so one integer engine serves both rings.
 *
 * A second, independent solver path (column-style Hermite normal form plus
 * exhaustive enumeration on tiny instances) backs certificate re-checking.
 */
#include <boost/multiprecision/cpp_int.hpp>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace relpure {

using Int = boost::multiprecision::cpp_int;
using Vec = std::vector<Int>;

/* ---- error taxonomy (mapped to CLI exit codes by the front end) ---- */
struct BadInput : std::invalid_argument {
  explicit BadInput(const std::string& w) : std::invalid_argument(w) {}
};
struct ScaleExceeded : std::runtime_error {
  explicit ScaleExceeded(const std::string& w) : std::runtime_error(w) {}
};
/* operation requires a finite coefficient ring */
struct InfiniteRing : std::invalid_argument {
  explicit InfiniteRing(const std::string& w) : std::invalid_argument(w) {}
};
struct InfiniteModule : std::runtime_error {
  explicit InfiniteModule(const std::string& w) : std::runtime_error(w) {}
};
struct TheoryViolation : std::runtime_error {
  explicit TheoryViolation(const std::string& w) : std::runtime_error(w) {}
};

/* ---- ring: Z (m == 0) or Z/m (m >= 2) ---- */
struct Ring {
  Int m{0};

  Ring() = default;
  explicit Ring(Int modulus) : m(std::move(modulus)) {
    if (m < 0 || m == 1) throw BadInput("ring modulus must be 0 (integers) or >= 2");
  }
  static Ring integers() { return Ring(Int(0)); }
  static Ring mod(const Int& mm) { return Ring(mm); }

  bool is_z() const { return m == 0; }
  bool finite() const { return m != 0; }
  Int reduce(const Int& x) const {
    if (is_z()) return x;
    Int r = x % m;
    if (r < 0) r += m;
    return r;
  }
  bool is_unit(const Int& x) const;
  bool operator==(const Ring& o) const { return m == o.m; }
  bool operator!=(const Ring& o) const { return m != o.m; }
  std::string str() const { return is_z() ? "Z" : "Z/" + m.str(); }
};

Int gcd_int(Int a, Int b);
Int lcm_int(const Int& a, const Int& b);

/* ---- dense matrix, row-major, immutable by convention ---- */
struct Mat {
  long rows{0}, cols{0};
  std::vector<Int> e;

  Mat() = default;
  Mat(long r, long c) : rows(r), cols(c), e(static_cast<size_t>(r) * c) {}
  static Mat identity(long n);
  static Mat zero(long r, long c) { return Mat(r, c); }
  static Mat from_rows(const std::vector<Vec>& rws);
  static Mat col_vec(const Vec& v);

  Int& at(long r, long c) { return e[static_cast<size_t>(r) * cols + c]; }
  const Int& at(long r, long c) const { return e[static_cast<size_t>(r) * cols + c]; }

  Mat transpose() const;
  Mat mul(const Mat& o) const;
  Vec mul_vec(const Vec& v) const;
  Mat hstack(const Mat& o) const;
  Mat vstack(const Mat& o) const;
  Mat cols_slice(long c0, long c1) const;   // columns [c0, c1)
  Mat rows_slice(long r0, long r1) const;
  Vec col(long c) const;
  void set_col(long c, const Vec& v);
  Mat scaled(const Int& s) const;
  Mat sub(const Mat& o) const;
  Mat add(const Mat& o) const;
  Mat reduced(const Ring& ring) const;
  static Mat kronecker(const Mat& a, const Mat& b);
  static Mat block_diag(const std::vector<Mat>& blocks);
  bool is_zero() const;
  bool operator==(const Mat& o) const { return rows == o.rows && cols == o.cols && e == o.e; }
  std::string str() const;
};

/* ---- Smith normal form ----
 * U * original * V = D over the ring, diagonal divisibility chain,
 * det(U), det(V) units.  Uinv/Vinv are tracked alongside.
 */
struct SmithDecomposition {
  Mat U, D, V, original;
  Mat Uinv, Vinv;
};

SmithDecomposition smith_normal_form(const Mat& A, const Ring& ring);

/* ---- linear systems ----
 * solve_linear: particular solution of A x = b over the ring plus column
 * generators of {x : A x = 0}; nullopt when unsolvable.  Exact, total.
 */
struct SolveResult {
  Vec x;
  Mat nullspace;  // columns generate the homogeneous solutions
};
std::optional<SolveResult> solve_linear(const Mat& A, const Vec& b, const Ring& ring);

/* Multi right-hand side variant: one decomposition, many columns; returns X
 * with A X = B, or nullopt if any column is unsolvable. */
std::optional<Mat> solve_linear_multi(const Mat& A, const Mat& B, const Ring& ring);

/* Factors A once so many right-hand sides can be solved independently;
 * solve() returns a particular solution of A x = b, nullopt when that b is
 * unsolvable.  Same semantics as solve_linear without the nullspace. */
class LinearSolver {
 public:
  LinearSolver(const Mat& A, const Ring& ring);
  std::optional<Vec> solve(const Vec& b) const;

 private:
  Ring ring_;
  long acols_; /* columns of the original A (before the modulus lift) */
  long n_, k_, lim_;
  Mat U_, V_;
  std::vector<Int> diag_;
};

/* Columns generate {x : A x = 0} over the ring. */
Mat kernel_basis(const Mat& A, const Ring& ring);

/* ---- independent verification path (certificate re-checking) ---- */
/* Column-style Hermite reduction over Z; solves A x = b without the Smith
 * machinery.  Particular solution only. */
std::optional<Vec> hnf_solve(const Mat& A, const Vec& b, const Ring& ring);

/* The 2x2-minor-based invariant check used by tests: gcd of all i x i minors. */
Int determinantal_divisor(const Mat& A, long i);

}  // namespace relpure
