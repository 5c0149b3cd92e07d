#pragma once
/*
 * Seeded corpus generation for the property sweeps: the standard ring and
 * class lists, exhaustive invariant-factor enumeration up to an order bound,
 * random modules and short exact sequences, and unimodular transports for
 * the isomorphism-invariance trials.
 *
 * All randomness flows through std::mt19937_64 with explicit modulo
 * reduction, so identical seeds give identical corpora on every platform.
 */
#include <random>
#include <vector>

#include "relpure/purity.hpp"

namespace relpure {

using CorpusRng = std::mt19937_64;

/* draw a value in [0, n) deterministically across platforms */
long rng_below(CorpusRng& rng, long n);

/* the standard sweep rings: Z and the six small moduli */
std::vector<Ring> corpus_rings();
std::vector<Ring> corpus_finite_rings();

/* one class per generator kind at the standard desk-scale bounds: cyclic
 * free, finitely presented (<= 2 gens, <= 2 rels), cyclic cyclically
 * presented, cyclically presented; presentation entries below 8 over Z */
std::vector<ModuleClass> corpus_classes(const Ring& ring);

/* chains d_1 | d_2 | ... of divisors > 1 of m with product <= bound: one
 * chain per isomorphism class of nonzero finite modules of order <= bound */
std::vector<std::vector<Int>> invariant_factor_chains(const Ring& ring, const Int& bound);
FPModule module_from_factors(const Ring& ring, const std::vector<Int>& factors);
/* every module of order <= bound over Z/m, diagonal presentations */
std::vector<FPModule> all_modules_up_to(const Ring& ring, const Int& bound);

/* random module of order <= order_bound over Z/m (random cyclic factors,
 * presentation scrambled by unimodular changes); over Z a random bounded
 * presentation with entries in [-7, 7], possibly of infinite order */
FPModule random_module(CorpusRng& rng, const Ring& ring, const Int& order_bound);

/* random short exact sequence: random ambient B and a submodule generated
 * by one or two random elements */
ShortExactSequence random_ses(CorpusRng& rng, const Ring& ring, const Int& order_bound);
std::vector<ShortExactSequence> random_corpus(const Ring& ring, long count,
                                              unsigned long long seed, const Int& order_bound);

/* random change of generators: U together with its inverse */
struct UniPair {
  Mat U, Uinv;
};
UniPair random_unimodular(CorpusRng& rng, const Ring& ring, long n);

/* the same module presented on transformed generators, x |-> U x */
FPModule transport_module(const FPModule& M, const UniPair& u);
/* transport all three terms through independent changes of generators;
 * the result is re-verified as exact */
ShortExactSequence transport_ses(const ShortExactSequence& seq, const UniPair& uA,
                                 const UniPair& uB, const UniPair& uC);

}  // namespace relpure
