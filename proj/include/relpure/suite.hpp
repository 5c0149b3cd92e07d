#pragma once
/*
 * The acceptance suite: eight independent property sweeps over seeded
 * corpora, one per headline guarantee of the library (criteria agreement,
 * the flatness-duality bridge, preenvelope postconditions, envelopes,
 * Ext balance, the class dictionary, isomorphism transport, certificate
 * re-verification + report determinism).  The CLI `suite` subcommand and
 * the standalone acceptance binary share these runners.
 */
#include <ostream>
#include <string>
#include <vector>

#include "relpure/report.hpp"

namespace relpure {

struct SuiteOptions {
  unsigned long long seed{42};
  long corpus_size{500};      /* case target for the purity-agreement sweep */
  long transport_trials{200}; /* trial target for the transport sweep */
};

struct CriterionResult {
  int number{0};
  std::string name;
  bool pass{false};
  long checked{0};
  long failures{0};
  std::string detail;
};

CriterionResult criterion_purity_agreement(const SuiteOptions& opt); /* 1 */
CriterionResult criterion_flat_duality(const SuiteOptions& opt);     /* 2 */
CriterionResult criterion_preenvelopes(const SuiteOptions& opt);     /* 3 */
CriterionResult criterion_envelopes(const SuiteOptions& opt);        /* 4 */
CriterionResult criterion_balance(const SuiteOptions& opt);          /* 5 */
CriterionResult criterion_class_dictionary(const SuiteOptions& opt); /* 6 */
CriterionResult criterion_transport(const SuiteOptions& opt);        /* 7 */
CriterionResult criterion_certificates(const SuiteOptions& opt);     /* 8 */

/* run all eight in order; an exception escaping a criterion is converted
 * into a failing result so the remaining criteria still run.  When log is
 * given, one line per criterion is streamed as it finishes. */
std::vector<CriterionResult> run_acceptance_suite(const SuiteOptions& opt,
                                                  std::ostream* log = nullptr);

std::string criterion_line(const CriterionResult& r);
Json suite_report_body(const std::vector<CriterionResult>& results);

}  // namespace relpure
