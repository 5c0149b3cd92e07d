#include "relpure/linalg.hpp"

#include <algorithm>
#include <cstdlib>
#include <sstream>

namespace relpure {

Int gcd_int(Int a, Int b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    Int t = a % b;
    a = b;
    b = t;
  }
  return a;
}

Int lcm_int(const Int& a, const Int& b) {
  if (a == 0 || b == 0) return 0;
  Int g = gcd_int(a, b);
  Int r = (a / g) * b;
  return r < 0 ? -r : r;
}

bool Ring::is_unit(const Int& x) const {
  if (is_z()) return x == 1 || x == -1;
  return gcd_int(reduce(x), m) == 1;
}

Mat Mat::identity(long n) {
  Mat I(n, n);
  for (long i = 0; i < n; ++i) I.at(i, i) = 1;
  return I;
}

Mat Mat::from_rows(const std::vector<Vec>& rws) {
  Mat r(static_cast<long>(rws.size()), rws.empty() ? 0 : static_cast<long>(rws[0].size()));
  for (long i = 0; i < r.rows; ++i) {
    if (static_cast<long>(rws[i].size()) != r.cols) throw BadInput("ragged matrix rows");
    for (long j = 0; j < r.cols; ++j) r.at(i, j) = rws[i][j];
  }
  return r;
}

Mat Mat::col_vec(const Vec& v) {
  Mat r(static_cast<long>(v.size()), 1);
  for (long i = 0; i < r.rows; ++i) r.at(i, 0) = v[i];
  return r;
}

Mat Mat::transpose() const {
  Mat t(cols, rows);
  for (long i = 0; i < rows; ++i)
    for (long j = 0; j < cols; ++j) t.at(j, i) = at(i, j);
  return t;
}

Mat Mat::mul(const Mat& o) const {
  if (cols != o.rows) throw BadInput("matrix product shape mismatch");
  Mat r(rows, o.cols);
  for (long i = 0; i < rows; ++i)
    for (long k = 0; k < cols; ++k) {
      const Int& a = at(i, k);
      if (a == 0) continue;
      for (long j = 0; j < o.cols; ++j) {
        const Int& b = o.at(k, j);
        if (b != 0) r.at(i, j) += a * b;
      }
    }
  return r;
}

Vec Mat::mul_vec(const Vec& v) const {
  if (cols != static_cast<long>(v.size())) throw BadInput("matrix-vector shape mismatch");
  Vec r(static_cast<size_t>(rows));
  for (long i = 0; i < rows; ++i)
    for (long j = 0; j < cols; ++j)
      if (at(i, j) != 0 && v[j] != 0) r[i] += at(i, j) * v[j];
  return r;
}

Mat Mat::hstack(const Mat& o) const {
  if (rows != o.rows) throw BadInput("hstack row mismatch");
  Mat r(rows, cols + o.cols);
  for (long i = 0; i < rows; ++i) {
    for (long j = 0; j < cols; ++j) r.at(i, j) = at(i, j);
    for (long j = 0; j < o.cols; ++j) r.at(i, cols + j) = o.at(i, j);
  }
  return r;
}

Mat Mat::vstack(const Mat& o) const {
  if (cols != o.cols) throw BadInput("vstack col mismatch");
  Mat r(rows + o.rows, cols);
  for (long i = 0; i < rows; ++i)
    for (long j = 0; j < cols; ++j) r.at(i, j) = at(i, j);
  for (long i = 0; i < o.rows; ++i)
    for (long j = 0; j < cols; ++j) r.at(rows + i, j) = o.at(i, j);
  return r;
}

Mat Mat::cols_slice(long c0, long c1) const {
  Mat r(rows, c1 - c0);
  for (long i = 0; i < rows; ++i)
    for (long j = c0; j < c1; ++j) r.at(i, j - c0) = at(i, j);
  return r;
}

Mat Mat::rows_slice(long r0, long r1) const {
  Mat r(r1 - r0, cols);
  for (long i = r0; i < r1; ++i)
    for (long j = 0; j < cols; ++j) r.at(i - r0, j) = at(i, j);
  return r;
}

Vec Mat::col(long c) const {
  Vec v(static_cast<size_t>(rows));
  for (long i = 0; i < rows; ++i) v[i] = at(i, c);
  return v;
}

void Mat::set_col(long c, const Vec& v) {
  for (long i = 0; i < rows; ++i) at(i, c) = v[i];
}

Mat Mat::scaled(const Int& s) const {
  Mat r(rows, cols);
  for (size_t i = 0; i < e.size(); ++i) r.e[i] = e[i] * s;
  return r;
}

Mat Mat::sub(const Mat& o) const {
  if (rows != o.rows || cols != o.cols) throw BadInput("matrix difference shape mismatch");
  Mat r(rows, cols);
  for (size_t i = 0; i < e.size(); ++i) r.e[i] = e[i] - o.e[i];
  return r;
}

Mat Mat::add(const Mat& o) const {
  if (rows != o.rows || cols != o.cols) throw BadInput("matrix sum shape mismatch");
  Mat r(rows, cols);
  for (size_t i = 0; i < e.size(); ++i) r.e[i] = e[i] + o.e[i];
  return r;
}

Mat Mat::reduced(const Ring& ring) const {
  Mat r(rows, cols);
  for (size_t i = 0; i < e.size(); ++i) r.e[i] = ring.reduce(e[i]);
  return r;
}

Mat Mat::kronecker(const Mat& a, const Mat& b) {
  Mat r(a.rows * b.rows, a.cols * b.cols);
  for (long i = 0; i < a.rows; ++i)
    for (long j = 0; j < a.cols; ++j) {
      if (a.at(i, j) == 0) continue;
      for (long p = 0; p < b.rows; ++p)
        for (long q = 0; q < b.cols; ++q)
          r.at(i * b.rows + p, j * b.cols + q) = a.at(i, j) * b.at(p, q);
    }
  return r;
}

Mat Mat::block_diag(const std::vector<Mat>& blocks) {
  long r = 0, c = 0;
  for (const auto& b : blocks) {
    r += b.rows;
    c += b.cols;
  }
  Mat out(r, c);
  long ro = 0, co = 0;
  for (const auto& b : blocks) {
    for (long i = 0; i < b.rows; ++i)
      for (long j = 0; j < b.cols; ++j) out.at(ro + i, co + j) = b.at(i, j);
    ro += b.rows;
    co += b.cols;
  }
  return out;
}

bool Mat::is_zero() const {
  for (const auto& x : e)
    if (x != 0) return false;
  return true;
}

std::string Mat::str() const {
  std::ostringstream os;
  os << "[";
  for (long i = 0; i < rows; ++i) {
    os << (i ? "; " : "");
    for (long j = 0; j < cols; ++j) os << (j ? " " : "") << at(i, j).str();
  }
  os << "]";
  return os.str();
}

/* ------------------------------------------------------------------ */
/* Smith normal form with full transform tracking.                     */
/* Pivot: smallest nonzero absolute value, ties by lowest (row, col).  */
/* Exact over Z.  With a nonzero modulus every tracked matrix is kept  */
/* entrywise in [0, mod); the factorization then holds as a congruence */
/* U*A*V ≡ D (mod mod) with U, V units mod mod, which is all finite-   */
/* ring callers need.  Without the reduction, elimination on presenta- */
/* tions with many generators suffers catastrophic coefficient growth. */
/* ------------------------------------------------------------------ */
namespace {

struct SnfWork {
  Mat D, U, V, Uinv, Vinv;
  Int mod{0}; /* 0 = exact integer arithmetic */
};

void red_entry(Int& x, const Int& m) {
  x %= m;
  if (x < 0) x += m;
}

void swap_rows(SnfWork& w, long a, long b) {
  if (a == b) return;
  for (long j = 0; j < w.D.cols; ++j) std::swap(w.D.at(a, j), w.D.at(b, j));
  for (long j = 0; j < w.U.cols; ++j) std::swap(w.U.at(a, j), w.U.at(b, j));
  for (long i = 0; i < w.Uinv.rows; ++i) std::swap(w.Uinv.at(i, a), w.Uinv.at(i, b));
}

void swap_cols(SnfWork& w, long a, long b) {
  if (a == b) return;
  for (long i = 0; i < w.D.rows; ++i) std::swap(w.D.at(i, a), w.D.at(i, b));
  for (long i = 0; i < w.V.rows; ++i) std::swap(w.V.at(i, a), w.V.at(i, b));
  for (long j = 0; j < w.Vinv.cols; ++j) std::swap(w.Vinv.at(a, j), w.Vinv.at(b, j));
}

/* row[a] -= q * row[b] ; U tracks, Uinv gets the inverse column op */
void row_axpy(SnfWork& w, long a, long b, const Int& q) {
  if (q == 0) return;
  for (long j = 0; j < w.D.cols; ++j) w.D.at(a, j) -= q * w.D.at(b, j);
  for (long j = 0; j < w.U.cols; ++j) w.U.at(a, j) -= q * w.U.at(b, j);
  for (long i = 0; i < w.Uinv.rows; ++i) w.Uinv.at(i, b) += q * w.Uinv.at(i, a);
  if (w.mod != 0) {
    for (long j = 0; j < w.D.cols; ++j) red_entry(w.D.at(a, j), w.mod);
    for (long j = 0; j < w.U.cols; ++j) red_entry(w.U.at(a, j), w.mod);
    for (long i = 0; i < w.Uinv.rows; ++i) red_entry(w.Uinv.at(i, b), w.mod);
  }
}

/* col[a] -= q * col[b] */
void col_axpy(SnfWork& w, long a, long b, const Int& q) {
  if (q == 0) return;
  for (long i = 0; i < w.D.rows; ++i) w.D.at(i, a) -= q * w.D.at(i, b);
  for (long i = 0; i < w.V.rows; ++i) w.V.at(i, a) -= q * w.V.at(i, b);
  for (long j = 0; j < w.Vinv.cols; ++j) w.Vinv.at(b, j) += q * w.Vinv.at(a, j);
  if (w.mod != 0) {
    for (long i = 0; i < w.D.rows; ++i) red_entry(w.D.at(i, a), w.mod);
    for (long i = 0; i < w.V.rows; ++i) red_entry(w.V.at(i, a), w.mod);
    for (long j = 0; j < w.Vinv.cols; ++j) red_entry(w.Vinv.at(b, j), w.mod);
  }
}

void negate_row(SnfWork& w, long a) {
  for (long j = 0; j < w.D.cols; ++j) w.D.at(a, j) = -w.D.at(a, j);
  for (long j = 0; j < w.U.cols; ++j) w.U.at(a, j) = -w.U.at(a, j);
  for (long i = 0; i < w.Uinv.rows; ++i) w.Uinv.at(i, a) = -w.Uinv.at(i, a);
  if (w.mod != 0) {
    for (long j = 0; j < w.D.cols; ++j) red_entry(w.D.at(a, j), w.mod);
    for (long j = 0; j < w.U.cols; ++j) red_entry(w.U.at(a, j), w.mod);
    for (long i = 0; i < w.Uinv.rows; ++i) red_entry(w.Uinv.at(i, a), w.mod);
  }
}

bool find_pivot(const Mat& D, long t, long& pr, long& pc) {
  bool found = false;
  Int best = 0;
  for (long i = t; i < D.rows; ++i)
    for (long j = t; j < D.cols; ++j) {
      const Int& x = D.at(i, j);
      if (x == 0) continue;
      Int ax = x < 0 ? -x : x;
      if (!found || ax < best) {
        found = true;
        best = ax;
        pr = i;
        pc = j;
      }
    }
  return found;
}

struct Xgcd {
  Int g, s, u; /* s*a + u*b = g >= 0 */
};

Xgcd xgcd(const Int& a, const Int& b) {
  Int old_r = a, r = b, old_s = 1, s = 0, old_u = 0, u = 1;
  while (r != 0) {
    Int q = old_r / r;
    Int tmp = old_r - q * r;
    old_r = r;
    r = tmp;
    tmp = old_s - q * s;
    old_s = s;
    s = tmp;
    tmp = old_u - q * u;
    old_u = u;
    u = tmp;
  }
  if (old_r < 0) {
    old_r = -old_r;
    old_s = -old_s;
    old_u = -old_u;
  }
  return {old_r, old_s, old_u};
}

/* rows (t, i) <- (s*row_t + u*row_i, -(b/g)*row_t + (a/g)*row_i) with
 * a = D[t][t], b = D[i][t]: pivot becomes gcd(a, b), D[i][t] becomes 0.
 * One shot per entry — unlike quotient-remainder ping-pong this keeps the
 * number of elimination passes logarithmic in the pivot, which is what
 * bounds the entry growth of exact integer elimination. */
void row_gcd(SnfWork& w, long t, long i) {
  Int a = w.D.at(t, t), b = w.D.at(i, t);
  Xgcd x = xgcd(a, b);
  Int a1 = a / x.g, b1 = b / x.g;
  for (long j = 0; j < w.D.cols; ++j) {
    Int rt = w.D.at(t, j), ri = w.D.at(i, j);
    w.D.at(t, j) = x.s * rt + x.u * ri;
    w.D.at(i, j) = a1 * ri - b1 * rt;
  }
  for (long j = 0; j < w.U.cols; ++j) {
    Int rt = w.U.at(t, j), ri = w.U.at(i, j);
    w.U.at(t, j) = x.s * rt + x.u * ri;
    w.U.at(i, j) = a1 * ri - b1 * rt;
  }
  /* inverse of [[s, u], [-b1, a1]] is [[a1, -u], [b1, s]]: fold into the
   * columns of Uinv from the right */
  for (long r2 = 0; r2 < w.Uinv.rows; ++r2) {
    Int ct = w.Uinv.at(r2, t), ci = w.Uinv.at(r2, i);
    w.Uinv.at(r2, t) = a1 * ct + b1 * ci;
    w.Uinv.at(r2, i) = x.s * ci - x.u * ct;
  }
  if (w.mod != 0) {
    for (long j = 0; j < w.D.cols; ++j) {
      red_entry(w.D.at(t, j), w.mod);
      red_entry(w.D.at(i, j), w.mod);
    }
    for (long j = 0; j < w.U.cols; ++j) {
      red_entry(w.U.at(t, j), w.mod);
      red_entry(w.U.at(i, j), w.mod);
    }
    for (long r2 = 0; r2 < w.Uinv.rows; ++r2) {
      red_entry(w.Uinv.at(r2, t), w.mod);
      red_entry(w.Uinv.at(r2, i), w.mod);
    }
  }
}

/* columns (t, j) <- (s*col_t + u*col_j, -(b/g)*col_t + (a/g)*col_j) with
 * a = D[t][t], b = D[t][j] */
void col_gcd(SnfWork& w, long t, long j) {
  Int a = w.D.at(t, t), b = w.D.at(t, j);
  Xgcd x = xgcd(a, b);
  Int a1 = a / x.g, b1 = b / x.g;
  for (long i = 0; i < w.D.rows; ++i) {
    Int ct = w.D.at(i, t), cj = w.D.at(i, j);
    w.D.at(i, t) = x.s * ct + x.u * cj;
    w.D.at(i, j) = a1 * cj - b1 * ct;
  }
  for (long i = 0; i < w.V.rows; ++i) {
    Int ct = w.V.at(i, t), cj = w.V.at(i, j);
    w.V.at(i, t) = x.s * ct + x.u * cj;
    w.V.at(i, j) = a1 * cj - b1 * ct;
  }
  for (long c2 = 0; c2 < w.Vinv.cols; ++c2) {
    Int rt = w.Vinv.at(t, c2), rj = w.Vinv.at(j, c2);
    w.Vinv.at(t, c2) = a1 * rt + b1 * rj;
    w.Vinv.at(j, c2) = x.s * rj - x.u * rt;
  }
  if (w.mod != 0) {
    for (long i = 0; i < w.D.rows; ++i) {
      red_entry(w.D.at(i, t), w.mod);
      red_entry(w.D.at(i, j), w.mod);
    }
    for (long i = 0; i < w.V.rows; ++i) {
      red_entry(w.V.at(i, t), w.mod);
      red_entry(w.V.at(i, j), w.mod);
    }
    for (long c2 = 0; c2 < w.Vinv.cols; ++c2) {
      red_entry(w.Vinv.at(t, c2), w.mod);
      red_entry(w.Vinv.at(j, c2), w.mod);
    }
  }
}

SnfWork snf_core(const Mat& A, const Int& mod = Int(0)) {
  SnfWork w;
  w.mod = mod;
  w.D = A;
  w.U = Mat::identity(A.rows);
  w.Uinv = Mat::identity(A.rows);
  w.V = Mat::identity(A.cols);
  w.Vinv = Mat::identity(A.cols);
  if (mod != 0)
    for (auto& x : w.D.e) red_entry(x, mod);

  long t = 0;
  const long lim = std::min(A.rows, A.cols);
  while (t < lim) {
    long pr = 0, pc = 0;
    if (!find_pivot(w.D, t, pr, pc)) break;
    swap_rows(w, t, pr);
    swap_cols(w, t, pc);

    /* clear row t and column t; a gcd step replaces the pivot by a proper
     * divisor, so this settles after at most log2(pivot) rounds */
    bool dirty = true;
    while (dirty) {
      dirty = false;
      for (long i = t + 1; i < w.D.rows; ++i) {
        const Int& b = w.D.at(i, t);
        if (b == 0) continue;
        if (b % w.D.at(t, t) == 0) {
          row_axpy(w, i, t, b / w.D.at(t, t));
        } else {
          row_gcd(w, t, i); /* rewrites row t: the column pass must rerun */
          dirty = true;
        }
      }
      for (long j = t + 1; j < w.D.cols; ++j) {
        const Int& b = w.D.at(t, j);
        if (b == 0) continue;
        if (b % w.D.at(t, t) == 0) {
          col_axpy(w, j, t, b / w.D.at(t, t));
        } else {
          col_gcd(w, t, j); /* rewrites column t: the row pass must rerun */
          dirty = true;
        }
      }
    }

    if (w.D.at(t, t) < 0) negate_row(w, t);

    /* pivot must divide the remaining block; if not, fold the offending
     * row in and re-run the elimination for this t */
    bool restart = false;
    for (long i = t + 1; i < w.D.rows && !restart; ++i)
      for (long j = t + 1; j < w.D.cols && !restart; ++j)
        if (w.D.at(i, j) % w.D.at(t, t) != 0) {
          row_axpy(w, t, i, Int(-1)); /* row t += row i */
          restart = true;
        }
    if (!restart) ++t;
  }
  return w;
}

}  // namespace

namespace {

/* modular inverse of a unit */
Int mod_inverse(const Int& a, const Int& m) {
  Int old_r = a % m, r = m, old_s = 1, s = 0;
  if (old_r < 0) old_r += m;
  while (r != 0) {
    Int q = old_r / r;
    Int t = old_r - q * r;
    old_r = r;
    r = t;
    t = old_s - q * s;
    old_s = s;
    s = t;
  }
  Int inv = old_s % m;
  if (inv < 0) inv += m;
  return inv;
}

/* a unit u mod m with u * d = gcd(d, m) (mod m); d nonzero mod m */
Int unit_to_gcd(const Int& d, const Int& m) {
  Int g = gcd_int(d, m);
  Int dp = d / g, mp = m / g;
  Int u = mp == 1 ? Int(1) : mod_inverse(dp % mp, mp);
  /* lift u to a unit mod m */
  while (gcd_int(u, m) != 1) u += mp;
  return u % m;
}

}  // namespace

SmithDecomposition smith_normal_form(const Mat& A, const Ring& ring) {
  Mat input = ring.is_z() ? A : A.reduced(ring);
  SnfWork w = snf_core(input, ring.is_z() ? Int(0) : ring.m);
  SmithDecomposition s;
  s.original = input;
  if (ring.is_z()) {
    s.U = w.U;
    s.D = w.D;
    s.V = w.V;
    s.Uinv = w.Uinv;
    s.Vinv = w.Vinv;
    return s;
  }
  /* normalize each diagonal entry to its canonical associate gcd(d, m) by a
   * unit row scaling, so the stored representatives form an honest
   * divisibility chain with zeros (multiples of m) at the tail */
  const long lim = std::min(w.D.rows, w.D.cols);
  for (long i = 0; i < lim; ++i) {
    Int d = ring.reduce(w.D.at(i, i));
    if (d == 0) {
      w.D.at(i, i) = 0;
      continue;
    }
    Int g = gcd_int(d, ring.m);
    if (g % ring.m == 0) {
      w.D.at(i, i) = 0;
      continue;
    }
    if (d != g) {
      Int u = unit_to_gcd(d, ring.m);
      Int uinv = mod_inverse(u, ring.m);
      for (long j = 0; j < w.D.cols; ++j) w.D.at(i, j) = ring.reduce(u * w.D.at(i, j));
      for (long j = 0; j < w.U.cols; ++j) w.U.at(i, j) = ring.reduce(u * w.U.at(i, j));
      for (long r = 0; r < w.Uinv.rows; ++r) w.Uinv.at(r, i) = ring.reduce(uinv * w.Uinv.at(r, i));
    }
  }
  /* zeros must trail: reorder by swapping any zero diagonal before a nonzero */
  for (long i = 0; i < lim; ++i) {
    if (ring.reduce(w.D.at(i, i)) != 0) continue;
    for (long j = i + 1; j < lim; ++j)
      if (ring.reduce(w.D.at(j, j)) != 0) {
        swap_rows(w, i, j);
        swap_cols(w, i, j);
        break;
      }
  }
  s.U = w.U.reduced(ring);
  s.D = w.D.reduced(ring);
  s.V = w.V.reduced(ring);
  s.Uinv = w.Uinv.reduced(ring);
  s.Vinv = w.Vinv.reduced(ring);
  return s;
}

/* ------------------------------------------------------------------ */
/* Solving: over Z directly; over Z/m by lifting with an m*I block.    */
/* ------------------------------------------------------------------ */
namespace {

/* particular solution + nullspace columns of A x = b over Z */
std::optional<SolveResult> solve_z(const Mat& A, const Vec& b) {
  SnfWork w = snf_core(A);
  Vec ub = w.U.mul_vec(b);
  const long n = A.rows, k = A.cols, lim = std::min(n, k);
  Vec y(static_cast<size_t>(k));
  for (long i = 0; i < n; ++i) {
    const Int d = i < lim ? w.D.at(i, i) : Int(0);
    if (d == 0) {
      if (ub[i] != 0) return std::nullopt;
    } else {
      if (ub[i] % d != 0) return std::nullopt;
      y[i] = ub[i] / d;
    }
  }
  SolveResult r;
  r.x = w.V.mul_vec(y);
  std::vector<long> free_cols;
  for (long j = 0; j < k; ++j)
    if (j >= lim || w.D.at(j, j) == 0) free_cols.push_back(j);
  r.nullspace = Mat(k, static_cast<long>(free_cols.size()));
  for (size_t c = 0; c < free_cols.size(); ++c)
    for (long i = 0; i < k; ++i) r.nullspace.at(i, static_cast<long>(c)) = w.V.at(i, free_cols[c]);
  return r;
}

Mat lift_with_modulus(const Mat& A, const Ring& ring) {
  Mat mI = Mat::identity(A.rows).scaled(ring.m);
  return A.reduced(ring).hstack(mI);
}

/* least nonnegative y with d * y ≡ c (mod m), c reduced; nullopt if none */
std::optional<Int> solve_scalar_mod(const Int& d, const Int& c, const Int& m) {
  Int g = gcd_int(d, m); /* d == 0 gives g = m */
  if (c % g != 0) return std::nullopt;
  if (g % m == 0) return Int(0); /* equation is 0 ≡ 0; pick y = 0 */
  Int mg = m / g;
  Int u = mod_inverse((d / g) % mg, mg);
  return ((c / g) % mg) * u % mg;
}

/* particular solution + nullspace generators of L x ≡ b (mod m); the
 * factorization only holds mod m, so each diagonal step is a modular
 * congruence and torsion diagonals contribute scaled nullspace columns */
std::optional<SolveResult> solve_mod(const Mat& L, const Vec& b, const Int& m) {
  SnfWork w = snf_core(L, m);
  Vec ub = w.U.mul_vec(b);
  const long n = L.rows, k = L.cols, lim = std::min(n, k);
  Vec y(static_cast<size_t>(k));
  for (long i = 0; i < n; ++i) {
    Int c = ub[i] % m;
    if (c < 0) c += m;
    const Int d = i < lim ? w.D.at(i, i) : Int(0);
    auto yi = solve_scalar_mod(d, c, m);
    if (!yi) return std::nullopt;
    if (i < k) y[i] = *yi;
  }
  SolveResult r;
  r.x = w.V.mul_vec(y);
  std::vector<std::pair<long, Int>> gens; /* (V column, scale) */
  for (long j = 0; j < k; ++j) {
    const Int d = j < lim ? w.D.at(j, j) : Int(0);
    if (d == 0) {
      gens.emplace_back(j, Int(1));
      continue;
    }
    Int scale = m / gcd_int(d, m);
    if (scale % m != 0) gens.emplace_back(j, scale); /* scale = m is the zero column */
  }
  r.nullspace = Mat(k, static_cast<long>(gens.size()));
  for (size_t c = 0; c < gens.size(); ++c)
    for (long i = 0; i < k; ++i)
      r.nullspace.at(i, static_cast<long>(c)) = w.V.at(i, gens[c].first) * gens[c].second;
  return r;
}

}  // namespace

std::optional<SolveResult> solve_linear(const Mat& A, const Vec& b, const Ring& ring) {
  if (A.rows != static_cast<long>(b.size())) throw BadInput("solve_linear shape mismatch");
  if (ring.is_z()) return solve_z(A, b);
  Mat L = lift_with_modulus(A, ring);
  Vec br(b.size());
  for (size_t i = 0; i < b.size(); ++i) br[i] = ring.reduce(b[i]);
  auto zr = solve_mod(L, br, ring.m);
  if (!zr) return std::nullopt;
  SolveResult r;
  r.x.resize(static_cast<size_t>(A.cols));
  for (long i = 0; i < A.cols; ++i) r.x[i] = ring.reduce(zr->x[i]);
  /* project the lifted nullspace onto the first k coordinates, drop zeros */
  std::vector<Vec> cols;
  for (long c = 0; c < zr->nullspace.cols; ++c) {
    Vec v(static_cast<size_t>(A.cols));
    bool nz = false;
    for (long i = 0; i < A.cols; ++i) {
      v[i] = ring.reduce(zr->nullspace.at(i, c));
      nz = nz || v[i] != 0;
    }
    if (nz) cols.push_back(std::move(v));
  }
  r.nullspace = Mat(A.cols, static_cast<long>(cols.size()));
  for (size_t c = 0; c < cols.size(); ++c) r.nullspace.set_col(static_cast<long>(c), cols[c]);
  return r;
}

LinearSolver::LinearSolver(const Mat& A, const Ring& ring) : ring_(ring), acols_(A.cols) {
  const Mat work = ring.is_z() ? A : lift_with_modulus(A, ring);
  SnfWork w = snf_core(work, ring.is_z() ? Int(0) : ring.m);
  n_ = work.rows;
  k_ = work.cols;
  lim_ = std::min(n_, k_);
  diag_.resize(static_cast<size_t>(lim_));
  for (long i = 0; i < lim_; ++i) diag_[static_cast<size_t>(i)] = w.D.at(i, i);
  U_ = std::move(w.U);
  V_ = std::move(w.V);
}

std::optional<Vec> LinearSolver::solve(const Vec& b) const {
  if (static_cast<long>(b.size()) != n_) throw BadInput("LinearSolver shape mismatch");
  Vec br = b;
  if (!ring_.is_z())
    for (auto& x : br) x = ring_.reduce(x);
  Vec ub = U_.mul_vec(br);
  Vec y(static_cast<size_t>(k_));
  for (long i = 0; i < n_; ++i) {
    const Int d = i < lim_ ? diag_[static_cast<size_t>(i)] : Int(0);
    if (ring_.is_z()) {
      if (d == 0) {
        if (ub[static_cast<size_t>(i)] != 0) return std::nullopt;
      } else {
        if (ub[static_cast<size_t>(i)] % d != 0) return std::nullopt;
        y[static_cast<size_t>(i)] = ub[static_cast<size_t>(i)] / d;
      }
    } else {
      auto yi = solve_scalar_mod(d, ring_.reduce(ub[static_cast<size_t>(i)]), ring_.m);
      if (!yi) return std::nullopt;
      if (i < k_) y[static_cast<size_t>(i)] = *yi;
    }
  }
  Vec full = V_.mul_vec(y);
  Vec x(static_cast<size_t>(acols_));
  for (long i = 0; i < acols_; ++i) x[static_cast<size_t>(i)] = ring_.reduce(full[static_cast<size_t>(i)]);
  return x;
}

std::optional<Mat> solve_linear_multi(const Mat& A, const Mat& B, const Ring& ring) {
  if (A.rows != B.rows) throw BadInput("solve_linear_multi shape mismatch");
  const Mat work = ring.is_z() ? A : lift_with_modulus(A, ring);
  SnfWork w = snf_core(work, ring.is_z() ? Int(0) : ring.m);
  const long n = work.rows, k = work.cols, lim = std::min(n, k);
  Mat X(A.cols, B.cols);
  for (long c = 0; c < B.cols; ++c) {
    Vec b = B.col(c);
    if (!ring.is_z())
      for (auto& x : b) x = ring.reduce(x);
    Vec ub = w.U.mul_vec(b);
    Vec y(static_cast<size_t>(k));
    for (long i = 0; i < n; ++i) {
      const Int d = i < lim ? w.D.at(i, i) : Int(0);
      if (ring.is_z()) {
        if (d == 0) {
          if (ub[i] != 0) return std::nullopt;
        } else {
          if (ub[i] % d != 0) return std::nullopt;
          y[i] = ub[i] / d;
        }
      } else {
        auto yi = solve_scalar_mod(d, ring.reduce(ub[i]), ring.m);
        if (!yi) return std::nullopt;
        if (i < k) y[i] = *yi;
      }
    }
    Vec x = w.V.mul_vec(y);
    for (long i = 0; i < A.cols; ++i) X.at(i, c) = ring.reduce(x[i]);
  }
  return X;
}

Mat kernel_basis(const Mat& A, const Ring& ring) {
  Vec zero(static_cast<size_t>(A.rows));
  auto r = solve_linear(A, zero, ring);
  /* homogeneous systems are always solvable */
  return r->nullspace;
}

/* ------------------------------------------------------------------ */
/* Independent path: column Hermite reduction.                         */
/* ------------------------------------------------------------------ */
namespace {

/* Reduce A by unimodular column ops to column-echelon form, tracking V
 * with A_orig * V = H.  Returns pivot (row, col) list. */
struct HnfWork {
  Mat H, V;
  std::vector<std::pair<long, long>> pivots;
};

HnfWork hnf_core(const Mat& A) {
  HnfWork w;
  w.H = A;
  w.V = Mat::identity(A.cols);
  long t = 0;
  for (long r = 0; r < A.rows && t < A.cols; ++r) {
    /* gcd-fold columns t..end on row r */
    while (true) {
      long jmin = -1;
      Int best = 0;
      for (long j = t; j < w.H.cols; ++j) {
        const Int& x = w.H.at(r, j);
        if (x == 0) continue;
        Int ax = x < 0 ? -x : x;
        if (jmin < 0 || ax < best) {
          jmin = j;
          best = ax;
        }
      }
      if (jmin < 0) break; /* row r is zero beyond t */
      /* move min to col t */
      if (jmin != t) {
        for (long i = 0; i < w.H.rows; ++i) std::swap(w.H.at(i, t), w.H.at(i, jmin));
        for (long i = 0; i < w.V.rows; ++i) std::swap(w.V.at(i, t), w.V.at(i, jmin));
      }
      bool done = true;
      for (long j = t + 1; j < w.H.cols; ++j) {
        if (w.H.at(r, j) == 0) continue;
        Int q = w.H.at(r, j) / w.H.at(r, t);
        for (long i = 0; i < w.H.rows; ++i) w.H.at(i, j) -= q * w.H.at(i, t);
        for (long i = 0; i < w.V.rows; ++i) w.V.at(i, j) -= q * w.V.at(i, t);
        if (w.H.at(r, j) != 0) done = false;
      }
      if (done) break;
    }
    if (w.H.at(r, t) != 0) {
      if (w.H.at(r, t) < 0) {
        for (long i = 0; i < w.H.rows; ++i) w.H.at(i, t) = -w.H.at(i, t);
        for (long i = 0; i < w.V.rows; ++i) w.V.at(i, t) = -w.V.at(i, t);
      }
      w.pivots.emplace_back(r, t);
      ++t;
    }
  }
  return w;
}

std::optional<Vec> hnf_solve_z(const Mat& A, const Vec& b) {
  HnfWork w = hnf_core(A);
  /* forward-substitute through the echelon columns */
  Vec y(static_cast<size_t>(A.cols));
  Vec resid = b;
  for (const auto& [r, c] : w.pivots) {
    if (resid[r] % w.H.at(r, c) != 0) return std::nullopt;
    Int q = resid[r] / w.H.at(r, c);
    y[c] = q;
    if (q != 0)
      for (long i = 0; i < A.rows; ++i) resid[i] -= q * w.H.at(i, c);
  }
  for (long i = 0; i < A.rows; ++i)
    if (resid[i] != 0) return std::nullopt;
  return w.V.mul_vec(y);
}

}  // namespace

std::optional<Vec> hnf_solve(const Mat& A, const Vec& b, const Ring& ring) {
  if (A.rows != static_cast<long>(b.size())) throw BadInput("hnf_solve shape mismatch");
  if (ring.is_z()) return hnf_solve_z(A, b);
  Mat L = lift_with_modulus(A, ring);
  Vec br(b.size());
  for (size_t i = 0; i < b.size(); ++i) br[i] = ring.reduce(b[i]);
  auto x = hnf_solve_z(L, br);
  if (!x) return std::nullopt;
  Vec r(static_cast<size_t>(A.cols));
  for (long i = 0; i < A.cols; ++i) r[i] = ring.reduce((*x)[i]);
  return r;
}

/* gcd of all i x i minors (0 if all vanish); brute force, test-scale only */
Int determinantal_divisor(const Mat& A, long i) {
  if (i == 0) return 1;
  std::vector<long> rsel(i), csel(i);
  Int g = 0;
  /* enumerate i-subsets of rows and columns */
  std::vector<long> ridx(i), cidx(i);
  auto next_subset = [](std::vector<long>& s, long n) -> bool {
    long k = static_cast<long>(s.size());
    long p = k - 1;
    while (p >= 0 && s[p] == n - k + p) --p;
    if (p < 0) return false;
    ++s[p];
    for (long q = p + 1; q < k; ++q) s[q] = s[q - 1] + 1;
    return true;
  };
  auto det = [](const Mat& M) {
    /* fraction-free Gaussian (Bareiss) determinant */
    Mat B = M;
    long n = B.rows;
    Int prev = 1, sign = 1;
    for (long p = 0; p < n - 1; ++p) {
      if (B.at(p, p) == 0) {
        long s = -1;
        for (long r2 = p + 1; r2 < n; ++r2)
          if (B.at(r2, p) != 0) {
            s = r2;
            break;
          }
        if (s < 0) return Int(0);
        for (long j = 0; j < n; ++j) std::swap(B.at(p, j), B.at(s, j));
        sign = -sign;
      }
      for (long r2 = p + 1; r2 < n; ++r2)
        for (long j = p + 1; j < n; ++j)
          B.at(r2, j) = (B.at(r2, j) * B.at(p, p) - B.at(r2, p) * B.at(p, j)) / prev;
      prev = B.at(p, p);
    }
    return Int(sign * B.at(n - 1, n - 1));
  };
  if (i > A.rows || i > A.cols) return 0;
  for (long q = 0; q < i; ++q) ridx[q] = q;
  do {
    for (long q = 0; q < i; ++q) cidx[q] = q;
    do {
      Mat S(i, i);
      for (long a = 0; a < i; ++a)
        for (long b = 0; b < i; ++b) S.at(a, b) = A.at(ridx[a], cidx[b]);
      g = gcd_int(g, det(S));
    } while (next_subset(cidx, A.cols));
  } while (next_subset(ridx, A.rows));
  return g;
}

}  // namespace relpure
