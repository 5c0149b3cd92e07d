#include "relpure/corpus.hpp"

#include <functional>

namespace relpure {

long rng_below(CorpusRng& rng, long n) {
  if (n <= 1) return 0;
  return static_cast<long>(rng() % static_cast<unsigned long long>(n));
}

std::vector<Ring> corpus_rings() {
  std::vector<Ring> rings = {Ring::integers()};
  for (const Ring& r : corpus_finite_rings()) rings.push_back(r);
  return rings;
}

std::vector<Ring> corpus_finite_rings() {
  std::vector<Ring> rings;
  for (long m : {2, 4, 6, 8, 9, 12}) rings.push_back(Ring::mod(Int(m)));
  return rings;
}

std::vector<ModuleClass> corpus_classes(const Ring& ring) {
  ClassBounds one;
  one.max_gens = 1;
  one.max_rels = 1;
  one.entry_bound = 8;
  ClassBounds two = one;
  two.max_gens = 2;
  two.max_rels = 2;
  return {generate_class(ring, ClassKind::CyclicFree, one),
          generate_class(ring, ClassKind::FinitelyPresentedBounded, two),
          generate_class(ring, ClassKind::CyclicCyclicallyPresented, one),
          generate_class(ring, ClassKind::CyclicallyPresented, two)};
}

std::vector<std::vector<Int>> invariant_factor_chains(const Ring& ring, const Int& bound) {
  if (ring.is_z()) throw InfiniteRing("invariant_factor_chains: finite coefficient ring required");
  std::vector<Int> divs;
  for (Int d = 2; d <= ring.m; ++d)
    if (ring.m % d == 0) divs.push_back(d);
  std::vector<std::vector<Int>> out;
  std::vector<Int> chain;
  std::function<void(const Int&)> rec = [&](const Int& prod) {
    for (const Int& d : divs) {
      if (!chain.empty() && d % chain.back() != 0) continue;
      if (prod > bound / d) continue;
      chain.push_back(d);
      out.push_back(chain);
      rec(prod * d);
      chain.pop_back();
    }
  };
  rec(Int(1));
  return out;
}

FPModule module_from_factors(const Ring& ring, const std::vector<Int>& factors) {
  long n = static_cast<long>(factors.size());
  Mat rel(n, n);
  for (long i = 0; i < n; ++i) rel.at(i, i) = factors[static_cast<size_t>(i)];
  return FPModule(ring, n, rel);
}

std::vector<FPModule> all_modules_up_to(const Ring& ring, const Int& bound) {
  std::vector<FPModule> mods;
  for (const auto& chain : invariant_factor_chains(ring, bound))
    mods.push_back(module_from_factors(ring, chain));
  return mods;
}

FPModule random_module(CorpusRng& rng, const Ring& ring, const Int& order_bound) {
  if (ring.is_z()) {
    long n = 1 + rng_below(rng, 3);
    long k = rng_below(rng, n + 1);
    Mat rel(n, k);
    for (long i = 0; i < n; ++i)
      for (long j = 0; j < k; ++j) rel.at(i, j) = Int(rng_below(rng, 15) - 7);
    return FPModule(ring, n, rel);
  }
  std::vector<Int> divs;
  for (Int d = 2; d <= ring.m; ++d)
    if (ring.m % d == 0) divs.push_back(d);
  long n = 1 + rng_below(rng, 3);
  std::vector<Int> picked;
  Int order = 1;
  for (long i = 0; i < n; ++i) {
    const Int& d = divs[static_cast<size_t>(rng_below(rng, static_cast<long>(divs.size())))];
    if (order > order_bound / d) break;
    picked.push_back(d);
    order *= d;
  }
  if (picked.empty()) picked.push_back(divs.front());
  FPModule diag = module_from_factors(ring, picked);
  if (rng_below(rng, 3) == 0) return diag; /* keep some presentations diagonal */
  UniPair u = random_unimodular(rng, ring, diag.n);
  UniPair v = random_unimodular(rng, ring, diag.rel.cols);
  return FPModule(ring, diag.n, u.U.mul(diag.rel).mul(v.U).reduced(ring));
}

ShortExactSequence random_ses(CorpusRng& rng, const Ring& ring, const Int& order_bound) {
  FPModule B = random_module(rng, ring, order_bound);
  long count = 1 + rng_below(rng, 2);
  std::vector<Vec> gens;
  for (long g = 0; g < count; ++g) {
    Vec v(static_cast<size_t>(B.n));
    for (long i = 0; i < B.n; ++i)
      v[static_cast<size_t>(i)] = ring.is_z() ? Int(rng_below(rng, 15) - 7)
                                              : ring.reduce(Int(rng_below(
                                                    rng, ring.m.convert_to<long>())));
    gens.push_back(v);
  }
  return make_ses(B, gens);
}

std::vector<ShortExactSequence> random_corpus(const Ring& ring, long count,
                                              unsigned long long seed, const Int& order_bound) {
  CorpusRng rng(seed);
  std::vector<ShortExactSequence> out;
  out.reserve(static_cast<size_t>(count));
  for (long i = 0; i < count; ++i) out.push_back(random_ses(rng, ring, order_bound));
  return out;
}

UniPair random_unimodular(CorpusRng& rng, const Ring& ring, long n) {
  UniPair p{Mat::identity(n), Mat::identity(n)};
  if (n == 0) return p;
  long ops = 2 * n + 2;
  for (long t = 0; t < ops; ++t) {
    switch (rng_below(rng, 3)) {
      case 0: { /* row i += c * row j on U; inverse op appended on Uinv */
        long i = rng_below(rng, n), j = rng_below(rng, n);
        if (i == j) break;
        Int c = ring.is_z() ? Int(rng_below(rng, 5) - 2)
                            : ring.reduce(Int(rng_below(rng, ring.m.convert_to<long>())));
        for (long cidx = 0; cidx < n; ++cidx) {
          p.U.at(i, cidx) = ring.reduce(p.U.at(i, cidx) + c * p.U.at(j, cidx));
          /* (E_ij(c))^{-1} = E_ij(-c); compose Uinv on the right */
          p.Uinv.at(cidx, j) = ring.reduce(p.Uinv.at(cidx, j) - c * p.Uinv.at(cidx, i));
        }
        break;
      }
      case 1: { /* swap rows of U, columns of Uinv */
        long i = rng_below(rng, n), j = rng_below(rng, n);
        if (i == j) break;
        for (long cidx = 0; cidx < n; ++cidx) {
          std::swap(p.U.at(i, cidx), p.U.at(j, cidx));
          std::swap(p.Uinv.at(cidx, i), p.Uinv.at(cidx, j));
        }
        break;
      }
      default: { /* scale a row by a unit */
        long i = rng_below(rng, n);
        Int s(1), sinv(1);
        if (ring.is_z()) {
          if (rng_below(rng, 2) == 0) s = sinv = -1;
        } else {
          Int cand = ring.reduce(Int(rng_below(rng, ring.m.convert_to<long>())));
          if (!ring.is_unit(cand)) break;
          s = cand;
          /* find the inverse by scanning; moduli here are tiny */
          for (Int x = 1; x < ring.m; ++x)
            if (ring.reduce(cand * x) == 1) {
              sinv = x;
              break;
            }
        }
        for (long cidx = 0; cidx < n; ++cidx) {
          p.U.at(i, cidx) = ring.reduce(p.U.at(i, cidx) * s);
          p.Uinv.at(cidx, i) = ring.reduce(p.Uinv.at(cidx, i) * sinv);
        }
        break;
      }
    }
  }
  return p;
}

FPModule transport_module(const FPModule& M, const UniPair& u) {
  if (u.U.rows != M.n) throw BadInput("transport_module: size mismatch");
  return FPModule(M.ring, M.n, u.U.mul(M.rel).reduced(M.ring));
}

ShortExactSequence transport_ses(const ShortExactSequence& seq, const UniPair& uA,
                                 const UniPair& uB, const UniPair& uC) {
  ShortExactSequence out;
  out.A = transport_module(seq.A, uA);
  out.B = transport_module(seq.B, uB);
  out.C = transport_module(seq.C, uC);
  out.incl = make_map(out.A, out.B, uB.U.mul(seq.incl.mat).mul(uA.Uinv).reduced(out.B.ring));
  out.proj = make_map(out.B, out.C, uC.U.mul(seq.proj.mat).mul(uB.Uinv).reduced(out.C.ring));
  verify_ses(out);
  return out;
}

}  // namespace relpure
