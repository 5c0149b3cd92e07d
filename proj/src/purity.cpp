#include "relpure/purity.hpp"

#include <set>
#include <sstream>

namespace relpure {

namespace {

/* X^t with the block-diagonal presentation */
FPModule power_module(const FPModule& X, long t) {
  return FPModule(X.ring, t * X.n, Mat::kronecker(Mat::identity(t), X.rel));
}

Vec flatten_map(const Mat& G) {
  /* column-major with the target index fastest: w[j*rows + b] = G[b][j] */
  Vec w(static_cast<size_t>(G.rows) * G.cols);
  for (long j = 0; j < G.cols; ++j)
    for (long b = 0; b < G.rows; ++b) w[j * G.rows + b] = G.at(b, j);
  return w;
}

Mat unflatten_map(const Vec& w, long rows, long cols) {
  Mat G(rows, cols);
  for (long j = 0; j < cols; ++j)
    for (long b = 0; b < rows; ++b) G.at(b, j) = w[j * rows + b];
  return G;
}

}  // namespace

std::string criterion_name(Criterion c) {
  switch (c) {
    case Criterion::DefinitionLift: return "DefinitionLift";
    case Criterion::TransposeTensor: return "TransposeTensor";
    case Criterion::MatrixIntersection: return "MatrixIntersection";
    case Criterion::EquationTransfer: return "EquationTransfer";
  }
  return "?";
}

void verify_ses(const ShortExactSequence& seq) {
  if (seq.A.ring != seq.B.ring || seq.B.ring != seq.C.ring)
    throw BadInput("sequence modules live over different rings");
  if (!is_injective(seq.incl)) throw BadInput("sequence inclusion is not injective");
  if (!is_surjective(seq.proj)) throw BadInput("sequence projection is not surjective");
  if (!is_zero_map(seq.proj.compose(seq.incl)))
    throw BadInput("sequence composite is nonzero");
  /* kernel of the projection must fall inside the image of the inclusion */
  SubmoduleData K = kernel_of(seq.proj);
  if (!solve_linear_multi(seq.incl.mat.hstack(seq.B.rel), K.incl.mat, seq.B.ring))
    throw BadInput("projection kernel exceeds the inclusion image");
}

ShortExactSequence make_ses(const FPModule& B, const std::vector<Vec>& a_gens) {
  Mat gens(B.n, static_cast<long>(a_gens.size()));
  for (size_t c = 0; c < a_gens.size(); ++c) {
    if (static_cast<long>(a_gens[c].size()) != B.n) throw BadInput("generator has wrong length");
    gens.set_col(static_cast<long>(c), a_gens[c]);
  }
  ShortExactSequence seq;
  seq.B = B;
  SubmoduleData sd = submodule(B, gens.reduced(B.ring));
  seq.A = sd.sub;
  seq.incl = sd.incl;
  auto q = quotient_by(B, gens.reduced(B.ring));
  seq.C = q.first;
  seq.proj = q.second;
  verify_ses(seq);
  return seq;
}

ShortExactSequence ses_from_inclusion(const ModuleMap& incl) {
  ShortExactSequence seq;
  seq.A = incl.src;
  seq.B = incl.dst;
  seq.incl = incl;
  auto q = cokernel_of(incl);
  seq.C = q.first;
  seq.proj = q.second;
  verify_ses(seq);
  return seq;
}

/* ------------------------------------------------------------------ */
/* The four criteria, each per member U.                               */
/* ------------------------------------------------------------------ */
namespace {

struct PerU {
  bool pure{true};
  PurityCertificate cert; /* filled only on failure */
  std::vector<std::pair<Vec, Vec>> lifts;
};

/* (i) surjectivity of Hom(U, B) -> Hom(U, C) */
PerU check_definition_lift(const ShortExactSequence& seq, const FPModule& U, long idx) {
  PerU r;
  HomModule hub = hom_module(U, seq.B);
  HomModule huc = hom_module(U, seq.C);
  ModuleMap ind = induced_hom_map(hub, huc, nullptr, &seq.proj);
  Mat sys = ind.mat.hstack(huc.H.rel);
  LinearSolver solver(sys, seq.B.ring); /* one factorization, one rhs per generator */
  for (long t = 0; t < huc.H.n; ++t) {
    Vec e(static_cast<size_t>(huc.H.n));
    e[t] = 1;
    auto sol = solver.solve(e);
    if (sol) {
      Vec gamma(static_cast<size_t>(hub.H.n));
      for (long i = 0; i < hub.H.n; ++i) gamma[i] = seq.B.ring.reduce((*sol)[i]);
      ModuleMap f = huc.decode(e), g = hub.decode(gamma);
      r.lifts.emplace_back(flatten_map(f.mat), flatten_map(g.mat));
      continue;
    }
    ModuleMap f = huc.decode(e);
    r.pure = false;
    r.cert.pure = false;
    r.cert.criterion = Criterion::DefinitionLift;
    r.cert.witness_index = idx;
    r.cert.unliftable = f.mat;
    std::ostringstream os;
    os << "member #" << idx << ": a map into the quotient admits no lift through the surjection";
    r.cert.detail = os.str();
    return r;
  }
  return r;
}

/* (ii) injectivity of tr(U) (x) A -> tr(U) (x) B */
PerU check_transpose_tensor(const ShortExactSequence& seq, const FPModule& U, long idx) {
  PerU r;
  FPModule trU = auslander_transpose(U);
  ModuleMap t = tensor_maps(identity_map(trU), seq.incl);
  SubmoduleData K = kernel_of(t);
  if (is_zero_module(K.sub)) return r;
  for (long c = 0; c < K.incl.mat.cols; ++c) {
    Vec w = K.incl.mat.col(c);
    if (is_zero_element(t.src, w)) continue;
    r.pure = false;
    r.cert.pure = false;
    r.cert.criterion = Criterion::TransposeTensor;
    r.cert.witness_index = idx;
    r.cert.kernel_witness = w;
    std::ostringstream os;
    os << "member #" << idx
       << ": transposed member tensored with the inclusion kills a nonzero element";
    r.cert.detail = os.str();
    return r;
  }
  throw TheoryViolation("nonzero tensor kernel without a nonzero generator");
}

/* shared enumeration for (iii)/(iv): kernel of [I(x)incl | mu(x)I | rel(B^q)]
 * — each column encodes a tuple a in A^q together with a B-solution of
 * mu x = a */
struct TransferData {
  Mat mu;      /* q x p, q = U.k(), p = U.n */
  FPModule ambB, absA;
  Mat G1;      /* q*B.n x q*A.n: coordinate change A^q -> B^q */
  Mat G2;      /* q*B.n x p*B.n: mu acting on B-tuples */
  Mat ker;     /* kernel columns (u | v | w) */
};

TransferData transfer_data(const ShortExactSequence& seq, const FPModule& U) {
  TransferData td;
  td.mu = U.rel.transpose();
  const long q = td.mu.rows;
  td.ambB = power_module(seq.B, q);
  td.absA = power_module(seq.A, q);
  td.G1 = Mat::kronecker(Mat::identity(q), seq.incl.mat);
  td.G2 = Mat::kronecker(td.mu, Mat::identity(seq.B.n));
  td.ker = kernel_basis(td.G1.hstack(td.G2).hstack(td.ambB.rel), seq.B.ring);
  return td;
}

/* (iii) the intersection identity mu(A^p) = A^q cap mu(B^p), checked in
 * ambient B-coordinates */
PerU check_matrix_intersection(const ShortExactSequence& seq, const FPModule& U, long idx) {
  PerU r;
  TransferData td = transfer_data(seq, U);
  const long q = td.mu.rows;
  const long ua = q * seq.A.n, ub = td.mu.cols * seq.B.n;
  Mat muA = Mat::kronecker(td.mu, seq.incl.mat); /* generators of mu(A^p) in B-coords */
  for (long c = 0; c < td.ker.cols; ++c) {
    Vec u(static_cast<size_t>(ua));
    for (long i = 0; i < ua; ++i) u[i] = td.ker.at(i, c);
    Vec x = td.G1.mul_vec(u);
    for (auto& e : x) e = seq.B.ring.reduce(e);
    auto coeff = express_in(td.ambB, muA, x);
    if (coeff) {
      r.lifts.emplace_back(x, *coeff);
      continue;
    }
    /* certificate: the tuple x lies in A^q and in mu(B^p) but not mu(A^p) */
    Vec bsol(static_cast<size_t>(ub));
    for (long i = 0; i < ub; ++i) bsol[i] = seq.B.ring.reduce(-td.ker.at(ua + i, c));
    r.pure = false;
    r.cert.pure = false;
    r.cert.criterion = Criterion::MatrixIntersection;
    r.cert.witness_index = idx;
    LinearSystem ls;
    ls.mu = td.mu;
    ls.a_abstract = u;
    for (auto& e : ls.a_abstract) e = seq.B.ring.reduce(e);
    ls.a_ambient = x;
    ls.b_solution = bsol;
    r.cert.system = ls;
    std::ostringstream os;
    os << "member #" << idx << ": intersection tuple escapes the image of the submodule power";
    r.cert.detail = os.str();
    return r;
  }
  return r;
}

/* (iv) solvability transfer, checked in abstract A-coordinates */
PerU check_equation_transfer(const ShortExactSequence& seq, const FPModule& U, long idx) {
  PerU r;
  TransferData td = transfer_data(seq, U);
  const long q = td.mu.rows, p = td.mu.cols;
  const long ua = q * seq.A.n, ub = p * seq.B.n;
  Mat muAbs = Mat::kronecker(td.mu, Mat::identity(seq.A.n)); /* mu on abstract A-tuples */
  Mat sysA = muAbs.hstack(td.absA.rel);
  for (long c = 0; c < td.ker.cols; ++c) {
    Vec alpha(static_cast<size_t>(ua));
    for (long i = 0; i < ua; ++i) alpha[i] = seq.A.ring.reduce(td.ker.at(i, c));
    auto sol = solve_linear(sysA, alpha, seq.A.ring);
    if (sol) {
      Vec z(static_cast<size_t>(p * seq.A.n));
      for (long i = 0; i < p * seq.A.n; ++i) z[i] = seq.A.ring.reduce(sol->x[i]);
      r.lifts.emplace_back(alpha, z);
      continue;
    }
    Vec x = td.G1.mul_vec(alpha);
    for (auto& e : x) e = seq.B.ring.reduce(e);
    Vec bsol(static_cast<size_t>(ub));
    for (long i = 0; i < ub; ++i) bsol[i] = seq.B.ring.reduce(-td.ker.at(ua + i, c));
    r.pure = false;
    r.cert.pure = false;
    r.cert.criterion = Criterion::EquationTransfer;
    r.cert.witness_index = idx;
    LinearSystem ls;
    ls.mu = td.mu;
    ls.a_abstract = alpha;
    ls.a_ambient = x;
    ls.b_solution = bsol;
    r.cert.system = ls;
    std::ostringstream os;
    os << "member #" << idx << ": equations soluble in the total module but not the submodule";
    r.cert.detail = os.str();
    return r;
  }
  return r;
}

PerU check_one(const ShortExactSequence& seq, const FPModule& U, long idx, Criterion c) {
  switch (c) {
    case Criterion::DefinitionLift: return check_definition_lift(seq, U, idx);
    case Criterion::TransposeTensor: return check_transpose_tensor(seq, U, idx);
    case Criterion::MatrixIntersection: return check_matrix_intersection(seq, U, idx);
    case Criterion::EquationTransfer: return check_equation_transfer(seq, U, idx);
  }
  throw BadInput("unknown criterion");
}

}  // namespace

PurityVerdict is_s_pure(const ShortExactSequence& seq, const ModuleClass& S, Criterion c) {
  if (S.ring != seq.B.ring) throw BadInput("class ring differs from sequence ring");
  PurityVerdict v;
  v.criterion_used = c;
  v.certificate.criterion = c;
  for (size_t i = 0; i < S.members.size(); ++i) {
    PerU r = check_one(seq, S.members[i], static_cast<long>(i), c);
    if (!r.pure) {
      v.pure = false;
      v.certificate = r.cert;
      return v;
    }
    v.certificate.lifts.push_back(std::move(r.lifts));
  }
  v.certificate.detail = "pure: all members lift";
  return v;
}

PurityVerdict is_s_pure(const ShortExactSequence& seq, const ModuleClass& S) {
  return is_s_pure(seq, S,
                   seq.B.ring.is_z() ? Criterion::EquationTransfer : Criterion::DefinitionLift);
}

CrossCheckReport purity_cross_check(const ShortExactSequence& seq, const ModuleClass& S) {
  CrossCheckReport rep;
  for (Criterion c : {Criterion::DefinitionLift, Criterion::TransposeTensor,
                      Criterion::MatrixIntersection, Criterion::EquationTransfer})
    rep.verdicts.push_back(is_s_pure(seq, S, c));
  rep.pure = rep.verdicts[0].pure;
  for (const auto& v : rep.verdicts)
    if (v.pure != rep.pure) {
      std::ostringstream os;
      os << "criteria disagree:";
      for (const auto& w : rep.verdicts)
        os << " " << criterion_name(w.criterion_used) << "=" << (w.pure ? "pure" : "not-pure");
      throw CriteriaDisagree(os.str());
    }
  return rep;
}

/* ------------------------------------------------------------------ */
/* Independent certificate re-verification (Hermite path).             */
/* ------------------------------------------------------------------ */
namespace {

bool hnf_zero(const Mat& rel, const Vec& v, const Ring& ring) {
  return hnf_solve(rel, v, ring).has_value();
}

bool hnf_member(const Mat& W, const Mat& rel, const Vec& v, const Ring& ring) {
  return hnf_solve(W.hstack(rel), v, ring).has_value();
}

Vec sub_vec(const Vec& a, const Vec& b) {
  Vec d(a.size());
  for (size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
  return d;
}

/* exhaustive solvability of  M y = rhs (mod span rel)  over a tiny finite
 * module; returns nullopt when the search space is too large */
std::optional<bool> tiny_solvable(const Mat& M, const Mat& rel, const Vec& rhs,
                                  const FPModule& coeff_space, const Int& cap) {
  Int order;
  try {
    order = module_order(coeff_space);
  } catch (const InfiniteModule&) {
    return std::nullopt;
  }
  if (order > cap) return std::nullopt;
  bool found = false;
  enumerate_elements(coeff_space, Int(0), [&](const Vec& y) {
    if (found) return;
    Vec diff = sub_vec(M.mul_vec(y), rhs);
    if (hnf_zero(rel, diff, coeff_space.ring)) found = true;
  });
  return found;
}

}  // namespace

bool recheck_certificate(const ShortExactSequence& seq, const ModuleClass& S,
                         const PurityVerdict& v) {
  const Ring& ring = seq.B.ring;
  const PurityCertificate& cert = v.certificate;

  if (!cert.pure) {
    if (cert.witness_index < 0 || cert.witness_index >= static_cast<long>(S.members.size()))
      return false;
    const FPModule& U = S.members[cert.witness_index];
    Mat mu = U.rel.transpose();
    const long q = mu.rows, p = mu.cols;

    if (cert.criterion == Criterion::MatrixIntersection ||
        cert.criterion == Criterion::EquationTransfer) {
      if (!cert.system) return false;
      const LinearSystem& ls = *cert.system;
      if (ls.mu.rows != q || ls.mu.cols != p || !(ls.mu.reduced(ring) == mu.reduced(ring)))
        return false;
      Mat relBq = Mat::kronecker(Mat::identity(q), seq.B.rel);
      Mat relAq = Mat::kronecker(Mat::identity(q), seq.A.rel);
      Mat G1 = Mat::kronecker(Mat::identity(q), seq.incl.mat);
      Mat G2 = Mat::kronecker(mu, Mat::identity(seq.B.n));
      Mat muAbs = Mat::kronecker(mu, Mat::identity(seq.A.n));
      /* 1. the ambient tuple really is the pushed-in abstract tuple */
      if (!hnf_zero(relBq, sub_vec(G1.mul_vec(ls.a_abstract), ls.a_ambient), ring)) return false;
      /* 2. soluble in B via the claimed solution */
      if (!hnf_zero(relBq, sub_vec(G2.mul_vec(ls.b_solution), ls.a_ambient), ring)) return false;
      /* 3. insoluble in A, decided by the independent Hermite solver */
      if (hnf_member(muAbs, relAq, ls.a_abstract, ring)) return false;
      /* 4. and, when tiny, by exhaustive search over A^p */
      FPModule absAp = power_module(seq.A, p);
      auto tiny = tiny_solvable(muAbs, relAq, ls.a_abstract, absAp, Int(4096));
      if (tiny && *tiny) return false;
      return true;
    }

    if (cert.criterion == Criterion::DefinitionLift) {
      if (!cert.unliftable) return false;
      const Mat& F = *cert.unliftable;
      if (F.rows != seq.C.n || F.cols != U.n) return false;
      /* f is a genuine map U -> C */
      if (U.k() > 0) {
        Mat FR = F.mul(U.rel);
        for (long c = 0; c < FR.cols; ++c)
          if (!hnf_zero(seq.C.rel, FR.col(c), ring)) return false;
      }
      /* and admits no lift g with proj g = f: one combined system over the
       * unknown matrix entries and relation slacks */
      Mat lift_rows = Mat::kronecker(Mat::identity(U.n), seq.proj.mat)
                          .hstack(Mat::kronecker(Mat::identity(U.n), seq.C.rel));
      Mat wd_rows = Mat::kronecker(U.rel.transpose(), Mat::identity(seq.B.n))
                        .hstack(Mat::zero(U.k() * seq.B.n, U.n * seq.C.k()));
      /* pad with the well-definedness slack block */
      Mat top = lift_rows.hstack(Mat::zero(lift_rows.rows, U.k() * seq.B.k()));
      Mat bot = wd_rows.hstack(Mat::kronecker(Mat::identity(U.k()), seq.B.rel));
      Mat sys = top.vstack(bot);
      Vec rhs = flatten_map(F);
      rhs.resize(static_cast<size_t>(sys.rows), Int(0));
      if (hnf_solve(sys, rhs, ring)) return false;
      return true;
    }

    if (cert.criterion == Criterion::TransposeTensor) {
      if (!cert.kernel_witness) return false;
      FPModule trU = auslander_transpose(U);
      FPModule TA = tensor(trU, seq.A), TB = tensor(trU, seq.B);
      const Vec& w = *cert.kernel_witness;
      if (static_cast<long>(w.size()) != TA.n) return false;
      /* nonzero in tr(U) (x) A ... */
      if (hnf_zero(TA.rel, w, ring)) return false;
      /* ... and killed in tr(U) (x) B */
      Vec image = Mat::kronecker(Mat::identity(trU.n), seq.incl.mat).mul_vec(w);
      return hnf_zero(TB.rel, image, ring);
    }
    return false;
  }

  /* success certificates: verify the recorded lifting data member by member */
  if (cert.lifts.size() != S.members.size()) return false;
  for (size_t i = 0; i < S.members.size(); ++i) {
    const FPModule& U = S.members[i];
    Mat mu = U.rel.transpose();
    const long q = mu.rows;
    Mat relBq = Mat::kronecker(Mat::identity(q), seq.B.rel);
    Mat relAq = Mat::kronecker(Mat::identity(q), seq.A.rel);
    for (const auto& [prob, sol] : cert.lifts[i]) {
      switch (cert.criterion) {
        case Criterion::DefinitionLift: {
          Mat F = unflatten_map(prob, seq.C.n, U.n);
          Mat G = unflatten_map(sol, seq.B.n, U.n);
          /* g well-defined and proj g = f */
          if (U.k() > 0) {
            Mat GR = G.mul(U.rel);
            for (long c = 0; c < GR.cols; ++c)
              if (!hnf_zero(seq.B.rel, GR.col(c), ring)) return false;
          }
          Mat D = seq.proj.mat.mul(G).sub(F);
          for (long c = 0; c < D.cols; ++c)
            if (!hnf_zero(seq.C.rel, D.col(c), ring)) return false;
          break;
        }
        case Criterion::TransposeTensor:
          return false; /* criterion (ii) records no lifting data */
        case Criterion::MatrixIntersection: {
          Mat muA = Mat::kronecker(mu, seq.incl.mat);
          if (!hnf_zero(relBq, sub_vec(muA.mul_vec(sol), prob), ring)) return false;
          break;
        }
        case Criterion::EquationTransfer: {
          Mat muAbs = Mat::kronecker(mu, Mat::identity(seq.A.n));
          if (!hnf_zero(relAq, sub_vec(muAbs.mul_vec(sol), prob), ring)) return false;
          break;
        }
      }
    }
  }
  return true;
}

/* ------------------------------------------------------------------ */

Co26Report co26_check(const ModuleClass& S, const std::vector<ShortExactSequence>& corpus) {
  Co26Report rep;
  ModuleClass T = transpose_class(S);
  std::set<std::string> tr_sigs;
  for (const auto& t : T.members) tr_sigs.insert(canonicalize(t).signature());
  for (size_t i = 0; i < S.members.size(); ++i)
    if (!tr_sigs.count(canonicalize(S.members[i]).signature())) {
      rep.inclusion_holds = false;
      rep.witness_index = static_cast<long>(i);
      return rep;
    }
  for (const auto& seq : corpus) {
    ++rep.sequences_checked;
    if (!is_s_pure(seq, S).pure) continue;
    ++rep.pure_sequences;
    for (const auto& U : S.members)
      if (!is_injective(tensor_maps(identity_map(U), seq.incl)))
        throw TheoryViolation(
            "a class member fails to stay injective under tensor on a pure sequence");
  }
  return rep;
}

ClassEquivalence purity_equivalent(const ModuleClass& S1, const ModuleClass& S2,
                                   const std::vector<ShortExactSequence>& corpus) {
  if (S1.ring != S2.ring) throw BadInput("classes over different rings");
  ClassEquivalence r;
  for (size_t i = 0; i < corpus.size(); ++i) {
    bool v1 = is_s_pure(corpus[i], S1).pure;
    bool v2 = is_s_pure(corpus[i], S2).pure;
    if (v1 != v2) {
      r.equivalent = false;
      r.distinguishing_index = static_cast<long>(i);
      r.s1_verdict = v1;
      r.s2_verdict = v2;
      return r;
    }
  }
  return r;
}

}  // namespace relpure
