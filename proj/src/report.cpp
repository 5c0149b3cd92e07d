#include "relpure/report.hpp"

#include <sstream>

namespace relpure {

Json json_of_int(const Int& x) { return x.str(); }

Int int_from_json(const Json& j) {
  if (!j.is_string()) throw BadInput("integer fields are decimal strings");
  return Int(j.get<std::string>());
}

Json json_of_vec(const Vec& v) {
  Json a = Json::array();
  for (const Int& x : v) a.push_back(json_of_int(x));
  return a;
}

Vec vec_from_json(const Json& j) {
  if (!j.is_array()) throw BadInput("vector fields are arrays");
  Vec v;
  for (const Json& x : j) v.push_back(int_from_json(x));
  return v;
}

Json json_of_mat(const Mat& m) {
  Json cols = Json::array();
  for (long c = 0; c < m.cols; ++c) cols.push_back(json_of_vec(m.col(c)));
  return Json{{"rows", m.rows}, {"cols", m.cols}, {"columns", std::move(cols)}};
}

Mat mat_from_json(const Json& j) {
  long rows = j.at("rows").get<long>();
  long cols = j.at("cols").get<long>();
  if (rows < 0 || cols < 0) throw BadInput("matrix dimensions must be nonnegative");
  const Json& columns = j.at("columns");
  if (static_cast<long>(columns.size()) != cols) throw BadInput("matrix column count mismatch");
  Mat m(rows, cols);
  for (long c = 0; c < cols; ++c) {
    Vec col = vec_from_json(columns[static_cast<size_t>(c)]);
    if (static_cast<long>(col.size()) != rows) throw BadInput("matrix column length mismatch");
    m.set_col(c, col);
  }
  return m;
}

Json json_of_ring(const Ring& r) {
  if (r.is_z()) return Json{{"kind", "Z"}};
  return Json{{"kind", "Zmod"}, {"m", json_of_int(r.m)}};
}

Ring ring_from_json(const Json& j) {
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "Z") return Ring::integers();
  if (kind == "Zmod") return Ring::mod(int_from_json(j.at("m")));
  throw BadInput("unknown ring kind: " + kind);
}

Json json_of_module(const FPModule& M) {
  Json rels = Json::array();
  for (long c = 0; c < M.rel.cols; ++c) rels.push_back(json_of_vec(M.rel.col(c)));
  return Json{{"ring", json_of_ring(M.ring)}, {"gens", M.n}, {"relations", std::move(rels)}};
}

FPModule module_from_json(const Json& j) {
  Ring ring = ring_from_json(j.at("ring"));
  long n = j.at("gens").get<long>();
  if (n < 0) throw BadInput("module generator count must be nonnegative");
  const Json& rels = j.at("relations");
  Mat rel(n, static_cast<long>(rels.size()));
  for (long c = 0; c < rel.cols; ++c) {
    Vec col = vec_from_json(rels[static_cast<size_t>(c)]);
    if (static_cast<long>(col.size()) != n) throw BadInput("relation column length mismatch");
    rel.set_col(c, col);
  }
  return FPModule(ring, n, rel);
}

namespace {

ClassKind kind_from_name(const std::string& name) {
  for (ClassKind k : {ClassKind::CyclicFree, ClassKind::FinitelyPresentedBounded,
                      ClassKind::CyclicCyclicallyPresented, ClassKind::CyclicallyPresented,
                      ClassKind::TransposeOf, ClassKind::Explicit})
    if (class_kind_name(k) == name) return k;
  throw BadInput("unknown class kind: " + name);
}

}  // namespace

Json json_of_class(const ModuleClass& S) {
  Json members = Json::array();
  for (const FPModule& M : S.members) members.push_back(json_of_module(M));
  return Json{{"ring", json_of_ring(S.ring)},
              {"kind", class_kind_name(S.kind)},
              {"bounds",
               Json{{"max_gens", S.bounds.max_gens},
                    {"max_rels", S.bounds.max_rels},
                    {"entry_bound", json_of_int(S.bounds.entry_bound)},
                    {"member_cap", S.bounds.member_cap}}},
              {"members", std::move(members)}};
}

ModuleClass class_from_json(const Json& j) {
  Ring ring = ring_from_json(j.at("ring"));
  ClassKind kind = kind_from_name(j.at("kind").get<std::string>());
  ClassBounds b;
  const Json& bj = j.at("bounds");
  b.max_gens = bj.at("max_gens").get<long>();
  b.max_rels = bj.at("max_rels").get<long>();
  b.entry_bound = int_from_json(bj.at("entry_bound"));
  b.member_cap = bj.at("member_cap").get<long>();
  if (kind == ClassKind::Explicit || kind == ClassKind::TransposeOf) {
    std::vector<FPModule> members;
    for (const Json& m : j.at("members")) members.push_back(module_from_json(m));
    ModuleClass S = explicit_class(ring, members);
    S.kind = kind;
    S.bounds = b;
    return S;
  }
  return generate_class(ring, kind, b);
}

Json json_of_ses(const ShortExactSequence& seq) {
  return Json{{"A", json_of_module(seq.A)},
              {"B", json_of_module(seq.B)},
              {"inclusion", json_of_mat(seq.incl.mat)}};
}

ShortExactSequence ses_from_json(const Json& j) {
  FPModule A = module_from_json(j.at("A"));
  FPModule B = module_from_json(j.at("B"));
  Mat incl = mat_from_json(j.at("inclusion"));
  return ses_from_inclusion(make_map(A, B, incl));
}

Json json_of_purity(const PurityVerdict& v) {
  Json cert = Json::object();
  cert["witness_index"] = v.certificate.witness_index;
  cert["detail"] = v.certificate.detail;
  if (v.certificate.system) {
    const LinearSystem& s = *v.certificate.system;
    cert["system"] = Json{{"mu", json_of_mat(s.mu)},
                          {"a_abstract", json_of_vec(s.a_abstract)},
                          {"a_ambient", json_of_vec(s.a_ambient)},
                          {"b_solution", json_of_vec(s.b_solution)}};
  }
  if (v.certificate.unliftable) cert["unliftable"] = json_of_mat(*v.certificate.unliftable);
  if (v.certificate.kernel_witness)
    cert["kernel_witness"] = json_of_vec(*v.certificate.kernel_witness);
  size_t lifts = 0;
  for (const auto& member : v.certificate.lifts) lifts += member.size();
  cert["lift_count"] = lifts;
  return Json{{"pure", v.pure},
              {"criterion", criterion_name(v.criterion_used)},
              {"certificate", std::move(cert)}};
}

Json json_of_cross_check(const CrossCheckReport& rep) {
  Json verdicts = Json::array();
  for (const PurityVerdict& v : rep.verdicts) verdicts.push_back(json_of_purity(v));
  return Json{{"pure", rep.pure}, {"verdicts", std::move(verdicts)}};
}

Json make_report(const ReportMeta& meta, Json body) {
  return Json{{"version", kReportVersion}, {"command", meta.command}, {"seed", meta.seed},
              {"caps", meta.caps},         {"timing", nullptr},       {"result", std::move(body)}};
}

namespace {

void render_rec(const Json& j, const std::string& key, long indent, std::ostringstream& os) {
  std::string pad(static_cast<size_t>(indent) * 2, ' ');
  std::string label = key.empty() ? "" : key + ": ";
  if (j.is_object()) {
    os << pad << (key.empty() ? "-" : key + ":") << "\n";
    for (const auto& [k, v] : j.items()) render_rec(v, k, indent + 1, os);
  } else if (j.is_array()) {
    bool scalar_only = true;
    for (const Json& v : j)
      if (v.is_object() || v.is_array()) scalar_only = false;
    if (scalar_only) {
      os << pad << label << j.dump() << "\n";
    } else {
      os << pad << (key.empty() ? "-" : key + ":") << "\n";
      for (const Json& v : j) render_rec(v, "", indent + 1, os);
    }
  } else {
    os << pad << label << j.dump() << "\n";
  }
}

}  // namespace

std::string render_text(const Json& j) {
  std::ostringstream os;
  for (const auto& [k, v] : j.items()) render_rec(v, k, 0, os);
  return os.str();
}

}  // namespace relpure
