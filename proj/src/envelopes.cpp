#include "relpure/envelopes.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "relpure/purity.hpp"

namespace relpure {

/* ================================================================
 * the affine solver
 * ================================================================ */

std::optional<Mat> solve_hom_system(const FPModule& P, const FPModule& Q,
                                    const std::vector<std::pair<Mat, Mat>>& constraints) {
  if (P.ring != Q.ring) throw BadInput("solve_hom_system: modules over different rings");
  const Ring& ring = P.ring;

  /* well-definedness is itself a constraint: F . P.rel == 0 modulo Q.rel */
  std::vector<std::pair<Mat, Mat>> cons;
  cons.emplace_back(P.rel, Mat::zero(Q.n, P.rel.cols));
  for (const auto& c : constraints) cons.push_back(c);

  long unknowns = P.n * Q.n;
  long rows_total = 0, slack_total = 0;
  for (const auto& [A, B] : cons) {
    if (A.rows != P.n || B.rows != Q.n || A.cols != B.cols)
      throw BadInput("solve_hom_system: constraint shape mismatch");
    rows_total += A.cols * Q.n;
    slack_total += A.cols * Q.rel.cols;
  }

  /* unknown vec(F) is column-major: entry (i, j) of F sits at j * Q.n + i;
   * each constraint column c contributes Q.n rows  F . A_col(c) + Q.rel . y_c
   * = B_col(c)  with its own slack block y_c */
  Mat big(rows_total, unknowns + slack_total);
  Vec rhs(static_cast<size_t>(rows_total));
  long row0 = 0, slack0 = unknowns;
  for (const auto& [A, B] : cons) {
    for (long c = 0; c < A.cols; ++c) {
      for (long i = 0; i < Q.n; ++i) {
        long r = row0 + c * Q.n + i;
        for (long j = 0; j < P.n; ++j) big.at(r, j * Q.n + i) = A.at(j, c);
        for (long s = 0; s < Q.rel.cols; ++s)
          big.at(r, slack0 + c * Q.rel.cols + s) = Q.rel.at(i, s);
        rhs[static_cast<size_t>(r)] = B.at(i, c);
      }
    }
    row0 += A.cols * Q.n;
    slack0 += A.cols * Q.rel.cols;
  }

  auto sol = solve_linear(big, rhs, ring);
  if (!sol) return std::nullopt;
  Mat F(Q.n, P.n);
  for (long j = 0; j < P.n; ++j)
    for (long i = 0; i < Q.n; ++i) F.at(i, j) = ring.reduce(sol->x[static_cast<size_t>(j * Q.n + i)]);
  return F;
}

/* ================================================================
 * element and subgroup tables
 * ================================================================ */

namespace {

std::map<std::string, long> index_keys(const CanonicalForm& cf, const std::vector<Vec>& elems) {
  std::map<std::string, long> idx;
  for (long i = 0; i < static_cast<long>(elems.size()); ++i) idx[element_key(cf, elems[i])] = i;
  return idx;
}

std::vector<uint64_t> bits_of(const std::vector<long>& sorted, long words) {
  std::vector<uint64_t> b(static_cast<size_t>(words), 0);
  for (long i : sorted) b[static_cast<size_t>(i / 64)] |= uint64_t(1) << (i % 64);
  return b;
}

}  // namespace

SubgroupTable subgroup_table(const FPModule& X, const Int& max_elems, long max_subgroups) {
  SubgroupTable t;
  t.elements = element_list(X, max_elems);
  long n = static_cast<long>(t.elements.size());
  CanonicalForm cf = canonicalize(X);
  std::map<std::string, long> idx = index_keys(cf, t.elements);
  if (element_key(cf, t.elements[0]) != element_key(cf, Vec(static_cast<size_t>(X.n))))
    throw TheoryViolation("subgroup_table: element enumeration does not start at zero");

  t.add.assign(static_cast<size_t>(n), std::vector<long>(static_cast<size_t>(n), 0));
  for (long i = 0; i < n; ++i)
    for (long j = 0; j < n; ++j) {
      Vec s(static_cast<size_t>(X.n));
      for (long c = 0; c < X.n; ++c)
        s[static_cast<size_t>(c)] =
            X.ring.reduce(t.elements[i][static_cast<size_t>(c)] + t.elements[j][static_cast<size_t>(c)]);
      auto it = idx.find(element_key(cf, s));
      if (it == idx.end()) throw TheoryViolation("subgroup_table: addition left the element table");
      t.add[static_cast<size_t>(i)][static_cast<size_t>(j)] = it->second;
    }

  /* breadth-first closure of the lattice: grow every known subgroup by one
   * cyclic generator at a time; cosets of <x> over the current subgroup are
   * disjoint, so the closure is a plain union of shifts */
  long words = (n + 63) / 64;
  std::set<std::vector<uint64_t>> seen;
  std::vector<std::vector<long>> found;
  found.push_back({0});
  seen.insert(bits_of(found[0], words));
  for (size_t qi = 0; qi < found.size(); ++qi) {
    std::vector<long> cur = found[qi];
    std::vector<char> incur(static_cast<size_t>(n), 0);
    for (long i : cur) incur[static_cast<size_t>(i)] = 1;
    for (long x = 1; x < n; ++x) {
      if (incur[static_cast<size_t>(x)]) continue;
      std::vector<long> ext = cur;
      long mult = x;
      while (!incur[static_cast<size_t>(mult)]) {
        for (long s : cur) ext.push_back(t.add[static_cast<size_t>(s)][static_cast<size_t>(mult)]);
        mult = t.add[static_cast<size_t>(mult)][static_cast<size_t>(x)];
      }
      std::sort(ext.begin(), ext.end());
      if (seen.insert(bits_of(ext, words)).second) {
        found.push_back(ext);
        if (static_cast<long>(found.size()) > max_subgroups)
          throw ScaleExceeded("subgroup_table: lattice exceeds the subgroup cap");
      }
    }
  }
  std::sort(found.begin(), found.end(), [](const std::vector<long>& a, const std::vector<long>& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  });
  t.subgroups = std::move(found);
  return t;
}

long element_index(const FPModule& X, const SubgroupTable& t, const Vec& v) {
  CanonicalForm cf = canonicalize(X);
  std::string key = element_key(cf, v);
  for (long i = 0; i < static_cast<long>(t.elements.size()); ++i)
    if (element_key(cf, t.elements[i]) == key) return i;
  throw BadInput("element_index: element not found in the table");
}

/* ================================================================
 * shared internal helpers
 * ================================================================ */

namespace {

std::string class_cache_key(const ModuleClass& S) {
  std::string k = S.ring.str() + "#" + class_kind_name(S.kind);
  for (const auto& U : S.members) k += "|" + canonicalize(U).signature();
  return k;
}

/* iso-class cache for the pure-injectivity boolean */
std::map<std::string, bool>& pinj_cache() {
  static std::map<std::string, bool> cache;
  return cache;
}

bool pinj_decide(const FPModule& M, const ModuleClass& S, const EnvelopeCaps& caps) {
  CanonicalForm cf = canonicalize(M);
  std::string key = cf.signature() + "@" + class_cache_key(S);
  auto& cache = pinj_cache();
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;

  bool split;
  if (cf.factors.size() >= 2) {
    /* a finite direct sum is S-pure injective iff every summand is: retracts
     * and finite direct sums both preserve the extension property, so the
     * verdict reduces exactly to the distinct cyclic invariant factors.
     * Deciding factorwise keeps every canonical split test below at one
     * generator; the direct test on a many-generator module would drag a
     * quadratically larger preenvelope through solve_hom_system. */
    split = true;
    std::vector<Int> seen;
    for (const Int& d : cf.factors) {
      if (std::find(seen.begin(), seen.end(), d) != seen.end()) continue;
      seen.push_back(d);
      if (!pinj_decide(FPModule::cyclic(M.ring, d), S, caps)) {
        split = false;
        break;
      }
    }
  } else {
    /* cyclic or zero: the canonical split test is a small solve */
    Preenvelope pre = preenvelope(cf.canon, S, false, caps);
    CanonicalForm cE = canonicalize(pre.target);
    ModuleMap phihat = cE.to_canon.compose(pre.map);
    split =
        solve_hom_system(cE.canon, cf.canon, {{phihat.mat, Mat::identity(cf.canon.n)}}).has_value();
  }
  cache[key] = split;
  return split;
}

ModuleMap corestrict(const ModuleMap& f, const SubmoduleData& sd) {
  Mat sys = sd.incl.mat.hstack(f.dst.rel);
  auto sol = solve_linear_multi(sys, f.mat, f.dst.ring);
  if (!sol) throw TheoryViolation("corestrict: image is not inside the submodule");
  return make_map(f.src, sd.sub, sol->rows_slice(0, sd.sub.n).reduced(f.src.ring));
}

std::vector<long> small_divisors(long m) {
  std::vector<long> d;
  for (long i = 1; i <= m; ++i)
    if (m % i == 0) d.push_back(i);
  return d;
}

std::vector<long> prime_factors(long v) {
  std::vector<long> ps;
  for (long p = 2; p * p <= v; ++p)
    if (v % p == 0) {
      ps.push_back(p);
      while (v % p == 0) v /= p;
    }
  if (v > 1) ps.push_back(v);
  return ps;
}

/* does the image of emb stay an S-pure submodule after killing K? */
bool pure_in_quotient(const ModuleMap& emb, const Mat& kgens, const ModuleClass& S) {
  auto [Q, pi] = quotient_by(emb.dst, kgens);
  ModuleMap comp = pi.compose(emb);
  if (!is_injective(comp))
    throw TheoryViolation("pure_in_quotient: composite lost injectivity despite trivial intersection");
  return is_s_pure(ses_from_inclusion(comp), S).pure;
}

/* prime-socle refutation scan; returns generators of a violating K, if any */
std::optional<Mat> socle_refutation(const ModuleMap& emb, const ModuleClass& S,
                                    const EnvelopeCaps& caps) {
  const FPModule& X = emb.dst;
  if (is_zero_module(X)) return std::nullopt;
  Int e = module_exponent(X);
  for (long p : prime_factors(e.convert_to<long>())) {
    Mat pid = Mat::identity(X.n).scaled(Int(p)).reduced(X.ring);
    SubmoduleData soc = kernel_of(make_map(X, X, pid));
    for (const Vec& s : element_list(soc.sub, caps.element_enum)) {
      Vec k = soc.incl.apply(s);
      if (is_zero_element(X, k)) continue;
      if (express_in(X, emb.mat, k)) continue; /* <k> meets the image */
      Mat kg = Mat::col_vec(k);
      if (pure_in_quotient(emb, kg, S)) return kg;
    }
  }
  return std::nullopt;
}

/* full-lattice refutation scan (small ambients only) */
std::optional<Mat> lattice_refutation(const ModuleMap& emb, const ModuleClass& S,
                                      const EnvelopeCaps& caps) {
  const FPModule& X = emb.dst;
  SubgroupTable t = subgroup_table(X, caps.lattice_elements, caps.subgroup_count);
  CanonicalForm cX = canonicalize(X);
  std::map<std::string, long> idx = index_keys(cX, t.elements);
  std::vector<char> in_image(t.elements.size(), 0);
  for (const Vec& v : element_list(emb.src, caps.lattice_elements)) {
    auto it = idx.find(element_key(cX, emb.apply(v)));
    if (it == idx.end()) throw TheoryViolation("lattice_refutation: image left the element table");
    in_image[static_cast<size_t>(it->second)] = 1;
  }
  for (const auto& K : t.subgroups) {
    if (K.size() == 1) continue;
    bool meets = false;
    for (long i : K)
      if (i != 0 && in_image[static_cast<size_t>(i)]) {
        meets = true;
        break;
      }
    if (meets) continue;
    Mat kg(X.n, static_cast<long>(K.size()));
    for (long c = 0; c < static_cast<long>(K.size()); ++c)
      kg.set_col(c, t.elements[static_cast<size_t>(K[static_cast<size_t>(c)])]);
    if (pure_in_quotient(emb, kg, S)) return kg;
  }
  return std::nullopt;
}

/* every endomorphism of X fixing phi elementwise is an automorphism:
 * equivalently no prime-order element of X can be sent to zero by an
 * endomorphism fixing phi (a non-injective endomorphism kills some element
 * of prime order) */
AutomorphismRecord socle_auto_check(const FPModule& X, const ModuleMap& phi,
                                    const EnvelopeCaps& caps) {
  AutomorphismRecord rec;
  if (is_zero_module(X)) return rec;
  CanonicalForm cX = canonicalize(X);
  ModuleMap ph = cX.to_canon.compose(phi);
  long nx = cX.canon.n;
  std::vector<long> fac(static_cast<size_t>(nx));
  for (long i = 0; i < nx; ++i) fac[static_cast<size_t>(i)] = cX.factors[static_cast<size_t>(i)].convert_to<long>();

  std::set<long> primes;
  for (long f : fac)
    for (long p : prime_factors(f)) primes.insert(p);

  Int socle_size(0);
  for (long p : primes) {
    Int count(1);
    for (long f : fac)
      if (f % p == 0) count *= p;
    socle_size += count - 1;
  }
  if (socle_size > caps.element_enum) throw ScaleExceeded("socle scan exceeds the element cap");

  for (long p : primes) {
    /* the p-socle of the diagonal model: coordinate i ranges over the
     * multiples of fac[i]/p when p divides fac[i], else stays zero */
    std::vector<long> strides(static_cast<size_t>(nx), 0);
    std::vector<long> counts(static_cast<size_t>(nx), 1);
    for (long i = 0; i < nx; ++i)
      if (fac[static_cast<size_t>(i)] % p == 0) {
        strides[static_cast<size_t>(i)] = fac[static_cast<size_t>(i)] / p;
        counts[static_cast<size_t>(i)] = p;
      }
    std::vector<long> odo(static_cast<size_t>(nx), 0);
    while (true) {
      bool zero = true;
      for (long i = 0; i < nx; ++i)
        if (odo[static_cast<size_t>(i)] != 0) zero = false;
      if (!zero) {
        Vec x(static_cast<size_t>(nx));
        for (long i = 0; i < nx; ++i)
          x[static_cast<size_t>(i)] = Int(odo[static_cast<size_t>(i)] * strides[static_cast<size_t>(i)]);
        std::vector<std::pair<Mat, Mat>> cons = {{ph.mat, ph.mat},
                                                 {Mat::col_vec(x), Mat::zero(nx, 1)}};
        if (solve_hom_system(cX.canon, cX.canon, cons)) {
          rec.holds = false;
          return rec;
        }
        ++rec.socle_elements_checked;
      }
      long i = 0;
      while (i < nx && ++odo[static_cast<size_t>(i)] == counts[static_cast<size_t>(i)]) {
        odo[static_cast<size_t>(i)] = 0;
        ++i;
      }
      if (i == nx) break;
    }
  }
  return rec;
}

/* comparison isomorphism over M between two essential extensions; any
 * solution of f . phi1 = phi2 is injective by essentiality, and equal
 * orders force it to be bijective */
Mat iso_over_M(const FPModule& X1, const ModuleMap& phi1, const FPModule& X2,
               const ModuleMap& phi2) {
  auto F = solve_hom_system(X1, X2, {{phi1.mat, phi2.mat}});
  if (!F) throw TheoryViolation("iso_over_M: no comparison map between essential extensions");
  ModuleMap f = make_map(X1, X2, *F);
  if (!is_injective(f) || !is_surjective(f))
    throw TheoryViolation("iso_over_M: comparison map is not an isomorphism");
  return *F;
}

}  // namespace

/* ================================================================
 * preenvelope
 * ================================================================ */

Preenvelope preenvelope(const FPModule& M, const ModuleClass& S, bool verify,
                        const EnvelopeCaps& caps) {
  if (M.ring.is_z()) throw InfiniteRing("preenvelope: finite coefficient ring required");
  if (S.ring != M.ring) throw BadInput("preenvelope: class over a different ring");
  if (!S.contains_free_rank_one())
    throw BadInput("preenvelope: the class must contain the free module of rank one");

  Preenvelope pre;
  pre.source = M;
  std::vector<FPModule> parts;
  std::vector<ModuleMap> comps;
  long total = 0;
  for (long ui = 0; ui < static_cast<long>(S.members.size()); ++ui) {
    FPModule T = pontryagin_dual(auslander_transpose(S.members[static_cast<size_t>(ui)])).dual;
    if (is_zero_module(T)) continue;
    HomModule H = hom_module(M, T);
    for (long g = 0; g < H.H.n; ++g) {
      Vec e(static_cast<size_t>(H.H.n));
      e[static_cast<size_t>(g)] = 1;
      ModuleMap f = H.decode(e);
      if (is_zero_map(f)) continue;
      parts.push_back(T);
      comps.push_back(f);
      pre.index.emplace_back(ui, f);
      total += T.n;
      if (total > caps.target_gens)
        throw ScaleExceeded("preenvelope: target exceeds the generator cap");
    }
  }

  if (parts.empty()) {
    pre.target = FPModule::zero_module(M.ring);
    pre.map = make_map(M, pre.target, Mat::zero(0, M.n));
  } else {
    DirectSum ds = direct_sum(parts);
    Mat phi = comps[0].mat; /* direct_sum concatenates coordinates in order */
    for (size_t p = 1; p < comps.size(); ++p) phi = phi.vstack(comps[p].mat);
    pre.target = ds.sum;
    pre.map = make_map(M, pre.target, phi);
  }
  if (!is_injective(pre.map))
    throw TheoryViolation("preenvelope: the canonical map is not injective");

  if (verify) {
    CrossCheckReport cc = purity_cross_check(ses_from_inclusion(pre.map), S);
    if (!cc.pure)
      throw TheoryViolation("preenvelope: the canonical map is not an S-pure monomorphism");
    if (!is_s_pure_injective(pre.target, S, caps).injective)
      throw TheoryViolation("preenvelope: target failed the pure-injectivity test");
  }
  return pre;
}

/* ================================================================
 * pure injectivity
 * ================================================================ */

SplitVerdict is_s_pure_injective(const FPModule& M, const ModuleClass& S,
                                 const EnvelopeCaps& caps) {
  if (M.ring.is_z())
    throw InfiniteRing("is_s_pure_injective: finite coefficient ring required");
  SplitVerdict v;
  if (!pinj_decide(M, S, caps)) return v;
  v.injective = true;
  try {
    /* recompute the retraction in the caller's presentation */
    Preenvelope pre = preenvelope(M, S, false, caps);
    CanonicalForm cM = canonicalize(M), cE = canonicalize(pre.target);
    if (pre.target.n * cM.canon.n > caps.target_gens)
      throw ScaleExceeded("is_s_pure_injective: retraction solve exceeds the generator cap");
    ModuleMap phihat = cE.to_canon.compose(pre.map).compose(cM.from_canon);
    auto G = solve_hom_system(cE.canon, cM.canon, {{phihat.mat, Mat::identity(cM.canon.n)}});
    if (!G)
      throw TheoryViolation("is_s_pure_injective: cached verdict lost its retraction");
    Mat gm = cM.from_canon.mat.mul(*G).mul(cE.to_canon.mat).reduced(M.ring);
    ModuleMap g = make_map(pre.target, M, gm);
    if (!maps_equal(g.compose(pre.map), identity_map(M)))
      throw TheoryViolation("is_s_pure_injective: retraction does not restrict to the identity");
    v.retraction = g;
  } catch (const ScaleExceeded&) {
    /* verdict is exact either way (factorwise reduction); the explicit
     * retraction is withheld when the canonical preenvelope or the
     * retraction solve outgrows the caps */
  }
  return v;
}

/* ================================================================
 * essential extensions
 * ================================================================ */

EssentialReport is_pure_essential(const ModuleMap& emb, const ModuleClass& S,
                                  const EnvelopeCaps& caps) {
  if (emb.src.ring.is_z())
    throw InfiniteRing("is_pure_essential: finite coefficient ring required");
  if (!is_injective(emb)) throw BadInput("is_pure_essential: the map must be injective");

  EssentialReport rep;
  rep.base_purity = is_s_pure(ses_from_inclusion(emb), S);
  if (!rep.base_purity.pure) return rep; /* not even a pure submodule */

  std::optional<Mat> socle = socle_refutation(emb, S, caps);
  if (module_order(emb.dst) <= caps.lattice_elements) {
    std::optional<Mat> lattice = lattice_refutation(emb, S, caps);
    if (socle.has_value() != lattice.has_value())
      throw TheoryViolation("is_pure_essential: socle and lattice scans disagree");
  }
  if (socle) {
    rep.witness_K = *socle;
    return rep;
  }
  rep.essential = true;
  return rep;
}

/* ================================================================
 * envelopes
 * ================================================================ */

namespace {

/* ---- path A: scan the submodule lattice of the preenvelope target ---- */

EnvelopeResult envelope_in_lattice(const FPModule& M, const ModuleClass& S,
                                   const Preenvelope& pre, const EnvelopeCaps& caps) {
  const FPModule& E0 = pre.target;
  SubgroupTable t = subgroup_table(E0, caps.lattice_elements, caps.subgroup_count);
  CanonicalForm cf0 = canonicalize(E0);
  std::map<std::string, long> idx = index_keys(cf0, t.elements);

  std::vector<long> img;
  {
    std::vector<char> seen(t.elements.size(), 0);
    for (const Vec& v : element_list(M, caps.lattice_elements)) {
      auto it = idx.find(element_key(cf0, pre.map.apply(v)));
      if (it == idx.end())
        throw TheoryViolation("envelope: preenvelope image left the element table");
      if (!seen[static_cast<size_t>(it->second)]) {
        seen[static_cast<size_t>(it->second)] = 1;
        img.push_back(it->second);
      }
    }
    std::sort(img.begin(), img.end());
  }

  struct Cand {
    std::vector<long> set;
    FPModule sub;   /* canonical presentation of the candidate */
    ModuleMap emb;  /* M -> sub in canonical coordinates */
  };
  std::vector<Cand> ess;
  for (const auto& G : t.subgroups) {
    if (!std::includes(G.begin(), G.end(), img.begin(), img.end())) continue;
    Mat gens(E0.n, static_cast<long>(G.size()));
    for (long c = 0; c < static_cast<long>(G.size()); ++c)
      gens.set_col(c, t.elements[static_cast<size_t>(G[static_cast<size_t>(c)])]);
    SubmoduleData sd = submodule(E0, gens);
    /* conjugate into the diagonal model: the literal generator list can be
     * as long as the subgroup itself, which would bloat every later check */
    CanonicalForm csub = canonicalize(sd.sub);
    ModuleMap emb = csub.to_canon.compose(corestrict(pre.map, sd));
    if (is_pure_essential(emb, S, caps).essential) ess.push_back({G, csub.canon, emb});
  }
  if (ess.empty())
    throw TheoryViolation("envelope: no essential extension inside the preenvelope");

  auto contains = [](const std::vector<long>& big, const std::vector<long>& small) {
    return big.size() > small.size() &&
           std::includes(big.begin(), big.end(), small.begin(), small.end());
  };
  std::vector<long> maxidx;
  for (long i = 0; i < static_cast<long>(ess.size()); ++i) {
    bool is_max = true;
    for (long j = 0; j < static_cast<long>(ess.size()); ++j)
      if (j != i && contains(ess[static_cast<size_t>(j)].set, ess[static_cast<size_t>(i)].set)) {
        is_max = false;
        break;
      }
    if (is_max) maxidx.push_back(i);
  }
  const Cand& chosen = ess[static_cast<size_t>(maxidx[0])];

  if (!pinj_decide(chosen.sub, S, caps))
    throw TheoryViolation("envelope: maximal essential extension is not S-pure injective");
  /* literal minimality: no proper intermediate submodule is pure injective */
  for (const auto& H : t.subgroups) {
    if (H == chosen.set) continue;
    if (!std::includes(chosen.set.begin(), chosen.set.end(), H.begin(), H.end())) continue;
    if (!std::includes(H.begin(), H.end(), img.begin(), img.end())) continue;
    Mat gens(E0.n, static_cast<long>(H.size()));
    for (long c = 0; c < static_cast<long>(H.size()); ++c)
      gens.set_col(c, t.elements[static_cast<size_t>(H[static_cast<size_t>(c)])]);
    if (pinj_decide(submodule(E0, gens).sub, S, caps))
      throw TheoryViolation("envelope: a proper intermediate submodule is already S-pure injective");
  }

  EnvelopeResult r;
  r.envelope = chosen.sub;
  r.embedding = chosen.emb;
  r.path = "submodule-lattice";
  r.uniqueness_check.candidates = static_cast<long>(maxidx.size());
  for (size_t k = 1; k < maxidx.size(); ++k) {
    const Cand& other = ess[static_cast<size_t>(maxidx[k])];
    r.uniqueness_check.witnesses.push_back(
        iso_over_M(other.sub, other.emb, chosen.sub, chosen.emb));
  }
  r.uniqueness_check.all_isomorphic = true;
  r.automorphism_check = socle_auto_check(r.envelope, r.embedding, caps);
  if (!r.automorphism_check.holds)
    throw TheoryViolation("envelope: automorphism property failed on the lattice path");
  return r;
}

/* ---- path B: minimal-order search over sums of pure-injective cyclics ---- */

struct ShapeCtx {
  Ring ring;
  std::vector<long> f; /* cyclic orders, ascending */
  long total{1};
  FPModule mod;
  std::vector<long> coords(long idx) const {
    std::vector<long> c(f.size());
    for (size_t i = 0; i < f.size(); ++i) {
      c[i] = idx % f[i];
      idx /= f[i];
    }
    return c;
  }
  long index(const std::vector<long>& c) const {
    long idx = 0, stride = 1;
    for (size_t i = 0; i < f.size(); ++i) {
      idx += (c[i] % f[i]) * stride;
      stride *= f[i];
    }
    return idx;
  }
  long add(long a, long b) const {
    std::vector<long> ca = coords(a), cb = coords(b);
    for (size_t i = 0; i < f.size(); ++i) ca[i] = (ca[i] + cb[i]) % f[i];
    return index(ca);
  }
  long order_of(long idx) const {
    std::vector<long> c = coords(idx);
    long o = 1;
    for (size_t i = 0; i < f.size(); ++i) {
      long oi = f[i] / std::gcd(c[i], f[i]);
      o = o / std::gcd(o, oi) * oi;
    }
    return o;
  }
};

ShapeCtx make_shape(const Ring& ring, const std::vector<long>& factors) {
  ShapeCtx ctx;
  ctx.ring = ring;
  ctx.f = factors;
  long n = static_cast<long>(factors.size());
  Mat rel(n, n);
  for (long i = 0; i < n; ++i) {
    rel.at(i, i) = factors[static_cast<size_t>(i)];
    ctx.total *= factors[static_cast<size_t>(i)];
  }
  ctx.mod = FPModule(ring, n, rel);
  return ctx;
}

/* depth-first placement of the canonical generators of M (largest order
 * first) onto elements of exactly matching order, keeping the span direct;
 * each complete direct placement is an embedding, filtered by pure
 * essentiality */
struct ShapeSearch {
  const ShapeCtx& ctx;
  const CanonicalForm& cM;
  const ModuleClass& S;
  const EnvelopeCaps& caps;
  std::vector<long> slots;                    /* required orders, descending */
  std::vector<std::vector<long>> candidates;  /* per required order */
  std::vector<long> chosen;
  std::vector<EnvelopeCandidate>& out;
  std::vector<std::string>& dedupe;
  long max_candidates;

  ShapeSearch(const ShapeCtx& c, const CanonicalForm& m, const ModuleClass& s,
              const EnvelopeCaps& cp, std::vector<EnvelopeCandidate>& o,
              std::vector<std::string>& d, long maxc)
      : ctx(c), cM(m), S(s), caps(cp), out(o), dedupe(d), max_candidates(maxc) {
    long nm = cM.canon.n;
    slots.resize(static_cast<size_t>(nm));
    for (long j = 0; j < nm; ++j)
      slots[static_cast<size_t>(j)] = cM.factors[static_cast<size_t>(nm - 1 - j)].convert_to<long>();
    std::map<long, std::vector<long>> by_order;
    for (long idx = 1; idx < ctx.total; ++idx) by_order[ctx.order_of(idx)].push_back(idx);
    candidates.resize(slots.size());
    for (size_t s2 = 0; s2 < slots.size(); ++s2) candidates[s2] = by_order[slots[s2]];
    chosen.assign(slots.size(), -1);
  }

  void emit(const std::vector<long>& image) {
    long nm = cM.canon.n;
    Mat embc(ctx.mod.n, nm);
    std::string key;
    for (long i : image) key += std::to_string(i) + ",";
    if (std::find(dedupe.begin(), dedupe.end(), key) != dedupe.end()) return;

    for (long j = 0; j < nm; ++j) {
      std::vector<long> c = ctx.coords(chosen[static_cast<size_t>(nm - 1 - j)]);
      Vec col(static_cast<size_t>(ctx.mod.n));
      for (long i = 0; i < ctx.mod.n; ++i) col[static_cast<size_t>(i)] = Int(c[static_cast<size_t>(i)]);
      embc.set_col(j, col);
    }
    ModuleMap emb = make_map(cM.canon, ctx.mod, embc).compose(cM.to_canon);
    if (!is_pure_essential(emb, S, caps).essential) return;
    dedupe.push_back(key);
    out.push_back({ctx.mod, emb});
  }

  std::vector<long> extend_span(const std::vector<long>& span, long x) const {
    std::vector<long> ext = span;
    long mult = x;
    while (!std::binary_search(span.begin(), span.end(), mult)) {
      for (long s2 : span) ext.push_back(ctx.add(s2, mult));
      mult = ctx.add(mult, x);
    }
    std::sort(ext.begin(), ext.end());
    return ext;
  }

  void dfs(size_t slot, const std::vector<long>& span) {
    if (static_cast<long>(out.size()) >= max_candidates) return;
    if (slot == slots.size()) {
      emit(span);
      return;
    }
    long lo = 0;
    if (slot > 0 && slots[slot] == slots[slot - 1]) lo = chosen[slot - 1] + 1;
    for (long cand : candidates[slot]) {
      if (cand < lo) continue;
      if (std::binary_search(span.begin(), span.end(), cand)) continue;
      std::vector<long> ext = extend_span(span, cand);
      if (static_cast<long>(ext.size()) != static_cast<long>(span.size()) * slots[slot])
        continue; /* not a direct extension */
      chosen[slot] = cand;
      dfs(slot + 1, ext);
      chosen[slot] = -1;
      if (static_cast<long>(out.size()) >= max_candidates) return;
    }
  }
};

void all_shapes(const std::vector<long>& divisors, long max_order, long cap_count,
                std::vector<long>& cur, long prod, size_t from,
                std::vector<std::vector<long>>& out) {
  for (size_t i = from; i < divisors.size(); ++i) {
    long d = divisors[i];
    if (prod > max_order / d) continue; /* overflow-safe product bound */
    cur.push_back(d);
    out.push_back(cur);
    if (static_cast<long>(out.size()) > cap_count)
      throw ScaleExceeded("envelope: shape enumeration exceeds the cap");
    all_shapes(divisors, max_order, cap_count, cur, prod * d, i, out);
    cur.pop_back();
  }
}

EnvelopeResult envelope_by_shapes(const FPModule& M, const ModuleClass& S, const Int& e0,
                                  const EnvelopeCaps& caps) {
  const Ring& ring = M.ring;
  CanonicalForm cM = canonicalize(M);
  Int bound_i = e0 < caps.element_enum ? e0 : caps.element_enum;
  bool truncated = e0 > caps.element_enum;
  if (cM.order() > bound_i)
    throw ScaleExceeded("envelope: module order exceeds the search bound");
  long bound = bound_i.convert_to<long>();
  long morder = cM.order().convert_to<long>();
  long mexp = cM.factors.empty() ? 1 : cM.factors.back().convert_to<long>();

  std::vector<long> D;
  for (long d : small_divisors(ring.m.convert_to<long>()))
    if (d > 1 && pinj_decide(FPModule::cyclic(ring, Int(d)), S, caps)) D.push_back(d);
  if (D.empty() || D.back() != ring.m.convert_to<long>())
    throw TheoryViolation("envelope: the ring itself failed the pure-injectivity test");

  std::vector<std::vector<long>> shapes;
  {
    std::vector<long> cur;
    all_shapes(D, bound, caps.shape_count, cur, 1, 0, shapes);
  }
  auto order_of = [](const std::vector<long>& sh) {
    long p = 1;
    for (long d : sh) p *= d;
    return p;
  };
  std::sort(shapes.begin(), shapes.end(),
            [&](const std::vector<long>& a, const std::vector<long>& b) {
              long oa = order_of(a), ob = order_of(b);
              if (oa != ob) return oa < ob;
              return a < b;
            });

  std::vector<EnvelopeCandidate> found;
  std::vector<std::string> dedupe;
  long found_order = -1;
  for (const auto& sh : shapes) {
    long ord = order_of(sh);
    if (found_order > 0 && ord > found_order) break;
    if (ord % morder != 0) continue;
    long shexp = 1;
    for (long d : sh) shexp = shexp / std::gcd(shexp, d) * d;
    if (shexp % mexp != 0) continue;
    ShapeCtx ctx = make_shape(ring, sh);
    ShapeSearch search(ctx, cM, S, caps, found, dedupe, 3);
    /* a fresh shape means a fresh ambient: duplicate images only repeat
     * inside one shape, so reset the image keys */
    dedupe.clear();
    search.dfs(0, {0});
    if (!found.empty()) found_order = ord;
  }
  if (found.empty()) {
    if (truncated)
      throw ScaleExceeded("envelope: search bound hit the element cap before success");
    throw TheoryViolation("envelope: no essential pure-injective extension within the bound");
  }

  EnvelopeResult r;
  r.envelope = found[0].module;
  r.embedding = found[0].embedding;
  r.path = "shape-search";
  if (!pinj_decide(r.envelope, S, caps))
    throw TheoryViolation("envelope: chosen extension failed the injectivity recheck");
  r.uniqueness_check.candidates = static_cast<long>(found.size());
  for (size_t i = 1; i < found.size(); ++i)
    r.uniqueness_check.witnesses.push_back(
        iso_over_M(found[i].module, found[i].embedding, r.envelope, r.embedding));
  r.uniqueness_check.all_isomorphic = true;
  r.automorphism_check = socle_auto_check(r.envelope, r.embedding, caps);
  if (!r.automorphism_check.holds)
    throw TheoryViolation("envelope: automorphism property failed on the shape path");
  return r;
}

}  // namespace

EnvelopeResult envelope(const FPModule& M, const ModuleClass& S, const EnvelopeCaps& caps) {
  if (M.ring.is_z()) throw InfiniteRing("envelope: finite coefficient ring required");
  if (S.ring != M.ring) throw BadInput("envelope: class over a different ring");

  if (pinj_decide(M, S, caps)) {
    EnvelopeResult r;
    r.envelope = M;
    r.embedding = identity_map(M);
    r.path = "identity";
    r.automorphism_check = socle_auto_check(M, r.embedding, caps);
    if (!r.automorphism_check.holds)
      throw TheoryViolation("envelope: identity embedding failed the automorphism property");
    return r;
  }

  Preenvelope pre = preenvelope(M, S, false, caps);
  Int e0 = module_order(pre.target);
  if (e0 <= caps.lattice_elements) {
    try {
      return envelope_in_lattice(M, S, pre, caps);
    } catch (const ScaleExceeded&) {
      /* lattice outgrew its caps; fall through to the shape search */
    }
  }
  return envelope_by_shapes(M, S, e0, caps);
}

/* ================================================================
 * envelope verification: the three characterizations plus automorphisms
 * ================================================================ */

EnvelopeVerification verify_envelope(const EnvelopeResult& r, const ModuleClass& S,
                                     const EnvelopeCaps& caps) {
  EnvelopeVerification v;
  const FPModule& X = r.envelope;
  const ModuleMap& phi = r.embedding;
  const FPModule& M = phi.src;

  /* (ii) essential extension which is pure injective */
  bool pinjX = pinj_decide(X, S, caps);
  v.essential_and_injective = is_pure_essential(phi, S, caps).essential && pinjX;

  /* (i) maximal essential: any strictly larger essential extension of M
   * embeds over M into the preenvelope target, so on small targets the
   * absence of a strictly larger essential intermediate subgroup is a
   * literal certificate of maximality */
  Preenvelope pre = preenvelope(M, S, false, caps);
  bool literal_done = false;
  if (module_order(pre.target) <= caps.lattice_elements) {
    try {
      SubgroupTable t = subgroup_table(pre.target, caps.lattice_elements, caps.subgroup_count);
      CanonicalForm cf0 = canonicalize(pre.target);
      std::map<std::string, long> idx = index_keys(cf0, t.elements);
      std::vector<long> img;
      {
        std::vector<char> seen(t.elements.size(), 0);
        for (const Vec& w : element_list(M, caps.lattice_elements)) {
          long i = idx.at(element_key(cf0, pre.map.apply(w)));
          if (!seen[static_cast<size_t>(i)]) {
            seen[static_cast<size_t>(i)] = 1;
            img.push_back(i);
          }
        }
        std::sort(img.begin(), img.end());
      }
      Int xorder = module_order(X);
      bool maximal = true;
      for (const auto& H : t.subgroups) {
        if (Int(static_cast<long>(H.size())) <= xorder) continue;
        if (!std::includes(H.begin(), H.end(), img.begin(), img.end())) continue;
        Mat gens(pre.target.n, static_cast<long>(H.size()));
        for (long c = 0; c < static_cast<long>(H.size()); ++c)
          gens.set_col(c, t.elements[static_cast<size_t>(H[static_cast<size_t>(c)])]);
        SubmoduleData sd = submodule(pre.target, gens);
        CanonicalForm csub = canonicalize(sd.sub);
        if (is_pure_essential(csub.to_canon.compose(corestrict(pre.map, sd)), S, caps).essential) {
          maximal = false;
          break;
        }
      }
      v.maximal_essential = maximal;
      v.literal_maximality = true;
      literal_done = true;
    } catch (const ScaleExceeded&) {
    }
  }
  if (!literal_done) v.maximal_essential = v.essential_and_injective;

  /* (iii) minimal pure injective: intermediate submodules phi(M) <= Y < X
   * correspond to proper subgroups of X / phi(M); none may be pure
   * injective */
  auto [Q, pi] = quotient_by(X, phi.mat);
  bool minimal_done = false;
  if (module_order(Q) <= caps.quotient_elements) {
    try {
      bool minimal = pinjX;
      if (!is_zero_module(Q)) {
        SubgroupTable qt = subgroup_table(Q, caps.quotient_elements, caps.subgroup_count);
        for (const auto& SQ : qt.subgroups) {
          if (SQ.size() == qt.elements.size()) continue; /* Y = X itself */
          Mat gens = phi.mat;
          for (long qi : SQ) {
            if (qi == 0) continue;
            auto lift = solve_linear(pi.mat.hstack(Q.rel), qt.elements[static_cast<size_t>(qi)],
                                     X.ring);
            if (!lift) throw TheoryViolation("verify_envelope: quotient element has no preimage");
            Vec x(lift->x.begin(), lift->x.begin() + X.n);
            for (auto& c : x) c = X.ring.reduce(c);
            gens = gens.hstack(Mat::col_vec(x));
          }
          if (pinj_decide(submodule(X, gens).sub, S, caps)) {
            minimal = false;
            break;
          }
        }
      }
      v.minimal_injective = minimal;
      minimal_done = true;
    } catch (const ScaleExceeded&) {
    }
  }
  if (!minimal_done) v.minimal_injective = v.essential_and_injective;

  v.endomorphisms_are_automorphisms = socle_auto_check(X, phi, caps).holds;
  return v;
}

/* ================================================================
 * S-pure flatness (defined with the envelope machinery it relies on)
 * ================================================================ */

FlatReport is_s_pure_flat(const FPModule& M, const ModuleClass& S,
                          const std::vector<ShortExactSequence>& corpus) {
  if (S.ring != M.ring) throw BadInput("is_s_pure_flat: class over a different ring");
  FlatReport rep;
  if (!M.ring.is_z()) {
    rep.flat = pinj_decide(pontryagin_dual(M).dual, S, EnvelopeCaps{});
    rep.decided = true;
  } else if (canonicalize(M).factors.empty()) {
    rep.flat = true; /* free modules are flat for every class */
    rep.decided = true;
  }

  for (long i = 0; i < static_cast<long>(corpus.size()); ++i) {
    const ShortExactSequence& seq = corpus[static_cast<size_t>(i)];
    if (seq.B.ring != M.ring)
      throw BadInput("is_s_pure_flat: corpus sequence over a different ring");
    if (!is_s_pure(seq, S).pure) continue;
    ++rep.sampled;
    ModuleMap t = tensor_maps(identity_map(M), seq.incl);
    SubmoduleData K = kernel_of(t);
    if (is_zero_module(K.sub)) continue;
    if (rep.decided && rep.flat)
      throw TheoryViolation("is_s_pure_flat: a flat module lost injectivity under tensoring");
    Vec witness;
    for (long c = 0; c < K.incl.mat.cols; ++c) {
      Vec cand = K.incl.mat.col(c);
      if (!is_zero_element(t.src, cand)) {
        witness = cand;
        break;
      }
    }
    if (witness.empty())
      throw TheoryViolation("is_s_pure_flat: nonzero kernel without a nonzero generator");
    rep.flat = false;
    rep.decided = true;
    rep.refuting_index = i;
    rep.kernel_witness = witness;
    break;
  }
  return rep;
}

}  // namespace relpure
