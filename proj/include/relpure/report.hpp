#pragma once
/*
 * Machine-readable reports and the serialization layer: rings, modules,
 * matrices, classes, and short exact sequences round-trip through a stable
 * JSON shape (integers as unbounded decimal strings, matrices as lists of
 * columns).  Reports are deterministic for a fixed seed: the timing field is
 * always null and key order is fixed, so identical jobs give byte-identical
 * documents.
 */
#include <json.hpp>
#include <string>

#include "relpure/purity.hpp"

namespace relpure {

using Json = nlohmann::ordered_json;

inline constexpr const char* kReportVersion = "relpure 1.0";

/* ---- scalars, vectors, matrices ---- */
Json json_of_int(const Int& x);
Int int_from_json(const Json& j);
Json json_of_vec(const Vec& v);
Vec vec_from_json(const Json& j);
/* {"rows": r, "cols": c, "columns": [[...], ...]} */
Json json_of_mat(const Mat& m);
Mat mat_from_json(const Json& j);

/* ---- rings, modules, classes, sequences ---- */
Json json_of_ring(const Ring& r);
Ring ring_from_json(const Json& j);
/* {"ring": ..., "gens": n, "relations": columns} */
Json json_of_module(const FPModule& M);
FPModule module_from_json(const Json& j);
Json json_of_class(const ModuleClass& S);
ModuleClass class_from_json(const Json& j);
/* stores A, B and the inclusion; parsing rebuilds the quotient, which is
 * canonically isomorphic to (not byte-identical with) the original C */
Json json_of_ses(const ShortExactSequence& seq);
ShortExactSequence ses_from_json(const Json& j);

/* ---- verdict payloads ---- */
Json json_of_purity(const PurityVerdict& v);
Json json_of_cross_check(const CrossCheckReport& rep);

/* ---- report envelope ---- */
struct ReportMeta {
  std::string command;
  unsigned long long seed{0};
  Json caps = Json::object();
};
Json make_report(const ReportMeta& meta, Json body);

/* flat human-readable rendering of any report document */
std::string render_text(const Json& j);

}  // namespace relpure
