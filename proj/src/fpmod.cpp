#include "relpure/fpmod.hpp"

#include <map>
#include <set>
#include <sstream>

namespace relpure {

FPModule::FPModule(Ring r, long gens, Mat relations) : ring(std::move(r)), n(gens), rel(std::move(relations)) {
  if (n < 0) throw BadInput("negative generator count");
  if (rel.rows != n) throw BadInput("presentation rows must equal generator count");
  if (!ring.is_z()) rel = rel.reduced(ring);
}

FPModule FPModule::free_module(const Ring& r, long rank) {
  return FPModule(r, rank, Mat::zero(rank, rank));
}

FPModule FPModule::cyclic(const Ring& r, const Int& d) {
  Mat m(1, 1);
  m.at(0, 0) = d;
  return FPModule(r, 1, m);
}

std::optional<Vec> express_in(const FPModule& X, const Mat& W, const Vec& v) {
  if (W.rows != X.n || static_cast<long>(v.size()) != X.n) throw BadInput("express_in shape mismatch");
  auto r = solve_linear(W.hstack(X.rel), v, X.ring);
  if (!r) return std::nullopt;
  Vec c(static_cast<size_t>(W.cols));
  for (long i = 0; i < W.cols; ++i) c[i] = X.ring.reduce(r->x[i]);
  return c;
}

bool is_zero_element(const FPModule& X, const Vec& v) {
  if (static_cast<long>(v.size()) != X.n) throw BadInput("element length mismatch");
  return solve_linear(X.rel, v, X.ring).has_value();
}

bool elements_equal(const FPModule& X, const Vec& a, const Vec& b) {
  if (a.size() != b.size()) throw BadInput("element length mismatch");
  Vec d(a.size());
  for (size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
  return is_zero_element(X, d);
}

Vec ModuleMap::apply(const Vec& x) const {
  Vec y = mat.mul_vec(x);
  for (auto& v : y) v = dst.ring.reduce(v);
  return y;
}

ModuleMap ModuleMap::compose(const ModuleMap& inner) const {
  if (src.ring != inner.dst.ring || src.n != inner.dst.n)
    throw BadInput("composition target/source mismatch");
  ModuleMap r;
  r.src = inner.src;
  r.dst = dst;
  r.mat = mat.mul(inner.mat).reduced(dst.ring);
  return r;
}

ModuleMap make_map(const FPModule& src, const FPModule& dst, const Mat& m) {
  if (src.ring != dst.ring) throw BadInput("map between different rings");
  if (m.rows != dst.n || m.cols != src.n) throw BadInput("map matrix shape mismatch");
  /* relations of the source must land in the relation span of the target */
  if (src.k() > 0 && !solve_linear_multi(dst.rel, m.mul(src.rel), dst.ring))
    throw BadInput("matrix does not define a module map (relations not respected)");
  ModuleMap f;
  f.src = src;
  f.dst = dst;
  f.mat = m.reduced(dst.ring);
  return f;
}

ModuleMap identity_map(const FPModule& M) {
  ModuleMap f;
  f.src = M;
  f.dst = M;
  f.mat = Mat::identity(M.n);
  return f;
}

ModuleMap zero_map(const FPModule& src, const FPModule& dst) {
  if (src.ring != dst.ring) throw BadInput("map between different rings");
  ModuleMap f;
  f.src = src;
  f.dst = dst;
  f.mat = Mat::zero(dst.n, src.n);
  return f;
}

bool maps_equal(const ModuleMap& f, const ModuleMap& g) {
  if (f.src.n != g.src.n || f.dst.n != g.dst.n || f.src.ring != g.src.ring) return false;
  /* all difference columns must lie in the target relation span */
  return solve_linear_multi(f.dst.rel, f.mat.sub(g.mat), f.dst.ring).has_value();
}

bool is_zero_map(const ModuleMap& f) {
  return solve_linear_multi(f.dst.rel, f.mat, f.dst.ring).has_value();
}

bool is_injective(const ModuleMap& f) { return is_zero_module(kernel_of(f).sub); }

bool is_surjective(const ModuleMap& f) { return is_zero_module(cokernel_of(f).first); }

/* ------------------------------------------------------------------ */
/* Canonical form                                                      */
/* ------------------------------------------------------------------ */

Int CanonicalForm::order() const {
  if (free_rank > 0) throw InfiniteModule("module has free rank " + std::to_string(free_rank));
  Int p = 1;
  for (const auto& f : factors) {
    if (f == 0) throw InfiniteModule("module has an infinite cyclic factor");
    p *= f;
  }
  return p;
}

std::string CanonicalForm::signature() const {
  std::ostringstream os;
  os << canon.ring.str() << "|free=" << free_rank << "|";
  for (size_t i = 0; i < factors.size(); ++i) os << (i ? "," : "") << factors[i].str();
  return os.str();
}

CanonicalForm canonicalize(const FPModule& M) {
  SmithDecomposition s = smith_normal_form(M.rel, M.ring);
  const long lim = std::min(M.n, M.k());
  /* classify each generator row; kept rows appear in row order, which puts
   * finite factors (ascending divisibility) before free rows */
  std::vector<long> kept;
  std::vector<Int> factors;
  long free_rank = 0;
  for (long i = 0; i < M.n; ++i) {
    Int d = i < lim ? s.D.at(i, i) : Int(0);
    if (M.ring.is_z()) {
      if (d == 1) continue; /* unit factor: generator dies */
      if (d == 0) {
        ++free_rank;
        kept.push_back(i);
      } else {
        factors.push_back(d);
        kept.push_back(i);
      }
    } else {
      Int c = d == 0 ? M.ring.m : d; /* R/(0) = R, a cyclic of order m */
      if (c == 1) continue;
      factors.push_back(c);
      kept.push_back(i);
    }
  }
  const long np = static_cast<long>(kept.size());
  const long nf = static_cast<long>(factors.size());
  Mat crel(np, nf);
  for (long j = 0; j < nf; ++j) crel.at(j, j) = factors[j];
  CanonicalForm cf;
  cf.factors = factors;
  cf.free_rank = free_rank;
  cf.canon = FPModule(M.ring, np, crel);
  Mat to(np, M.n), from(M.n, np);
  for (long a = 0; a < np; ++a)
    for (long j = 0; j < M.n; ++j) {
      to.at(a, j) = s.U.at(kept[a], j);
      from.at(j, a) = s.Uinv.at(j, kept[a]);
    }
  cf.to_canon = make_map(M, cf.canon, to);
  cf.from_canon = make_map(cf.canon, M, from);
  /* both composites must be identities (exact on canon, modulo relations on M) */
  if (!maps_equal(cf.to_canon.compose(cf.from_canon), identity_map(cf.canon)) ||
      !maps_equal(cf.from_canon.compose(cf.to_canon), identity_map(M)))
    throw TheoryViolation("canonical form maps fail to invert");
  return cf;
}

bool is_zero_module(const FPModule& M) {
  if (M.n == 0) return true;
  /* every generator must lie in the relation span */
  return solve_linear_multi(M.rel, Mat::identity(M.n), M.ring).has_value();
}

bool isomorphic(const FPModule& M, const FPModule& N) {
  return M.ring == N.ring && canonicalize(M).signature() == canonicalize(N).signature();
}

Mat column_reduce(const Mat& A, const Ring& ring) {
  if (A.cols == 0) return A;
  SmithDecomposition s = smith_normal_form(A, ring);
  const long lim = std::min(A.rows, A.cols);
  std::vector<Vec> cols;
  for (long i = 0; i < lim; ++i) {
    const Int& d = s.D.at(i, i);
    if (d == 0) continue;
    Vec c(static_cast<size_t>(A.rows));
    for (long r = 0; r < A.rows; ++r) c[r] = ring.reduce(d * s.Uinv.at(r, i));
    cols.push_back(std::move(c));
  }
  Mat out(A.rows, static_cast<long>(cols.size()));
  for (size_t j = 0; j < cols.size(); ++j) out.set_col(static_cast<long>(j), cols[j]);
  return out;
}

/* ------------------------------------------------------------------ */
/* Constructions                                                       */
/* ------------------------------------------------------------------ */

DirectSum direct_sum(const std::vector<FPModule>& parts) {
  if (parts.empty()) throw BadInput("direct_sum needs at least one summand");
  const Ring ring = parts[0].ring;
  long total = 0;
  std::vector<Mat> rels;
  for (const auto& p : parts) {
    if (p.ring != ring) throw BadInput("direct_sum over mixed rings");
    total += p.n;
    rels.push_back(p.rel);
  }
  DirectSum ds;
  ds.sum = FPModule(ring, total, Mat::block_diag(rels));
  long off = 0;
  for (const auto& p : parts) {
    Mat in(total, p.n), pr(p.n, total);
    for (long i = 0; i < p.n; ++i) {
      in.at(off + i, i) = 1;
      pr.at(i, off + i) = 1;
    }
    ds.inj.push_back(make_map(p, ds.sum, in));
    ds.proj.push_back(make_map(ds.sum, p, pr));
    off += p.n;
  }
  return ds;
}

FPModule tensor(const FPModule& M, const FPModule& N) {
  if (M.ring != N.ring) throw BadInput("tensor over mixed rings");
  /* generators e_i (x) e_j at index i * n_N + j; relations r (x) e_j and
   * e_i (x) s for presentation columns r of M and s of N */
  Mat rel = Mat::kronecker(M.rel, Mat::identity(N.n)).hstack(Mat::kronecker(Mat::identity(M.n), N.rel));
  return FPModule(M.ring, M.n * N.n, column_reduce(rel, M.ring));
}

ModuleMap tensor_maps(const ModuleMap& f, const ModuleMap& g) {
  return make_map(tensor(f.src, g.src), tensor(f.dst, g.dst), Mat::kronecker(f.mat, g.mat));
}

Vec tensor_elems(const FPModule& M, const FPModule& N, const Vec& x, const Vec& y) {
  if (static_cast<long>(x.size()) != M.n || static_cast<long>(y.size()) != N.n)
    throw BadInput("tensor_elems length mismatch");
  Vec t(static_cast<size_t>(M.n * N.n));
  for (long i = 0; i < M.n; ++i)
    for (long j = 0; j < N.n; ++j) t[i * N.n + j] = M.ring.reduce(x[i] * y[j]);
  return t;
}

FPModule auslander_transpose(const FPModule& M) {
  return FPModule(M.ring, M.k(), M.rel.transpose());
}

/* ------------------------------------------------------------------ */
/* Subobjects                                                          */
/* ------------------------------------------------------------------ */

SubmoduleData submodule(const FPModule& X, const Mat& gens) {
  if (gens.rows != X.n) throw BadInput("submodule generators live in the wrong ambient");
  /* relations on the generators: coefficient vectors y with gens*y inside
   * the ambient relation span */
  Mat ker = kernel_basis(gens.hstack(X.rel), X.ring);
  Mat sub_rel = column_reduce(ker.rows_slice(0, gens.cols), X.ring);
  SubmoduleData sd;
  sd.sub = FPModule(X.ring, gens.cols, sub_rel);
  sd.incl = make_map(sd.sub, X, gens);
  return sd;
}

std::pair<FPModule, ModuleMap> quotient_by(const FPModule& X, const Mat& gens) {
  if (gens.rows != X.n) throw BadInput("quotient generators live in the wrong ambient");
  FPModule q(X.ring, X.n, column_reduce(X.rel.hstack(gens), X.ring));
  ModuleMap proj = make_map(X, q, Mat::identity(X.n));
  return {q, proj};
}

SubmoduleData kernel_of(const ModuleMap& f) {
  /* all source vectors mapping into the target relation span */
  Mat ker = kernel_basis(f.mat.hstack(f.dst.rel), f.src.ring);
  Mat gens = column_reduce(ker.rows_slice(0, f.src.n), f.src.ring);
  return submodule(f.src, gens);
}

SubmoduleData image_of(const ModuleMap& f) { return submodule(f.dst, column_reduce(f.mat, f.dst.ring)); }

std::pair<FPModule, ModuleMap> cokernel_of(const ModuleMap& f) { return quotient_by(f.dst, f.mat); }

FPModule homology_at(const ModuleMap& f, const ModuleMap& g) {
  if (!is_zero_map(g.compose(f))) throw BadInput("homology_at needs g.f = 0");
  SubmoduleData K = kernel_of(g);
  /* express each image generator of f in the kernel's coordinates */
  auto coords = solve_linear_multi(K.incl.mat.hstack(f.dst.rel), f.mat, f.dst.ring);
  if (!coords) throw TheoryViolation("image does not sit inside the kernel despite g.f = 0");
  return quotient_by(K.sub, coords->rows_slice(0, K.sub.n)).first;
}

/* ------------------------------------------------------------------ */
/* Hom                                                                 */
/* ------------------------------------------------------------------ */

HomModule hom_module(const FPModule& M, const FPModule& N) {
  if (M.ring != N.ring) throw BadInput("hom over mixed rings");
  HomModule hm;
  hm.M = M;
  hm.N = N;
  /* ambient N^(n_M): coordinate (j, b) -> j * n_N + b holds column j of the
   * map matrix.  A matrix is a map iff it kills every presentation column of
   * M inside N, i.e. lies in the kernel of kron(mu_M^T, I) into N^(k_M). */
  hm.ambient = FPModule(M.ring, M.n * N.n, Mat::kronecker(Mat::identity(M.n), N.rel));
  FPModule target(M.ring, M.k() * N.n, Mat::kronecker(Mat::identity(M.k()), N.rel));
  Mat phi = Mat::kronecker(M.rel.transpose(), Mat::identity(N.n));
  SubmoduleData K = kernel_of(make_map(hm.ambient, target, phi));
  hm.H = K.sub;
  hm.gen_lift = K.incl.mat;
  return hm;
}

ModuleMap HomModule::decode(const Vec& h) const {
  if (static_cast<long>(h.size()) != H.n) throw BadInput("decode length mismatch");
  Vec w = gen_lift.mul_vec(h);
  Mat G(N.n, M.n);
  for (long j = 0; j < M.n; ++j)
    for (long b = 0; b < N.n; ++b) G.at(b, j) = M.ring.reduce(w[j * N.n + b]);
  return make_map(M, N, G);
}

std::optional<Vec> HomModule::encode(const ModuleMap& f) const {
  if (f.mat.rows != N.n || f.mat.cols != M.n) throw BadInput("encode shape mismatch");
  Vec w(static_cast<size_t>(M.n * N.n));
  for (long j = 0; j < M.n; ++j)
    for (long b = 0; b < N.n; ++b) w[j * N.n + b] = f.mat.at(b, j);
  return express_in(ambient, gen_lift, w);
}

ModuleMap induced_hom_map(const HomModule& from, const HomModule& to, const ModuleMap* pre,
                          const ModuleMap* post) {
  Mat cols(to.H.n, from.H.n);
  for (long t = 0; t < from.H.n; ++t) {
    Vec e(static_cast<size_t>(from.H.n));
    e[t] = 1;
    ModuleMap f = from.decode(e);
    Mat g = f.mat;
    if (pre) g = g.mul(pre->mat);
    if (post) g = post->mat.mul(g);
    ModuleMap composite = make_map(to.M, to.N, g.reduced(to.N.ring));
    auto enc = to.encode(composite);
    if (!enc) throw TheoryViolation("composite map failed to encode in the target hom module");
    cols.set_col(t, *enc);
  }
  return make_map(from.H, to.H, cols);
}

/* ------------------------------------------------------------------ */
/* Enumeration                                                         */
/* ------------------------------------------------------------------ */

void enumerate_elements(const FPModule& M, const Int& cap,
                        const std::function<void(const Vec&)>& visit) {
  CanonicalForm cf = canonicalize(M);
  Int order = cf.order(); /* throws when infinite */
  if (cap > 0 && order > cap)
    throw ScaleExceeded("module order " + order.str() + " above enumeration cap " + cap.str());
  const size_t np = cf.factors.size();
  Vec y(np);
  while (true) {
    visit(cf.from_canon.apply(y));
    /* odometer: last coordinate fastest, first slowest */
    size_t p = np;
    while (p > 0) {
      --p;
      y[p] += 1;
      if (y[p] < cf.factors[p]) break;
      y[p] = 0;
      if (p == 0) return;
    }
    if (np == 0) return;
  }
}

std::vector<Vec> element_list(const FPModule& M, const Int& cap) {
  std::vector<Vec> out;
  enumerate_elements(M, cap, [&](const Vec& v) { out.push_back(v); });
  return out;
}

Int module_order(const FPModule& M) { return canonicalize(M).order(); }

Int element_order(const CanonicalForm& cf, const Vec& x) {
  Vec y = cf.to_canon.apply(x);
  Int ord = 1;
  const size_t nf = cf.factors.size();
  for (size_t i = 0; i < y.size(); ++i) {
    if (i < nf) {
      const Int& c = cf.factors[i];
      Int r = y[i] % c;
      if (r < 0) r += c;
      ord = lcm_int(ord, c / gcd_int(c, r));
    } else if (y[i] != 0) {
      throw InfiniteModule("element has infinite order");
    }
  }
  return ord;
}

std::string element_key(const CanonicalForm& cf, const Vec& x) {
  Vec y = cf.to_canon.apply(x);
  const size_t nf = cf.factors.size();
  std::ostringstream os;
  for (size_t i = 0; i < y.size(); ++i) {
    Int r = y[i];
    if (i < nf) {
      r %= cf.factors[i];
      if (r < 0) r += cf.factors[i];
    }
    os << (i ? "," : "") << r.str();
  }
  return os.str();
}

}  // namespace relpure
