/*
 * relpure — command-line front end.
 *
 * Subcommands: canonicalize, transpose, check-purity, class-equiv, dual,
 * flat, pinj, preenvelope, envelope, ext, dims, cross-check, suite, run.
 *
 * Exit codes: 0 completed, 1 theory violation (or failed sweep),
 * 2 bad input, 3 scale exceeded.
 */
#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "relpure/corpus.hpp"
#include "relpure/duality.hpp"
#include "relpure/envelopes.hpp"
#include "relpure/relhom.hpp"
#include "relpure/report.hpp"
#include "relpure/suite.hpp"

using namespace relpure;

namespace {

/* ---------------- parsing helpers ---------------- */

Ring parse_ring(const std::string& s) {
  if (s == "Z") return Ring::integers();
  if (s.rfind("Zmod", 0) == 0 && s.size() > 4) {
    Int m(s.substr(4));
    if (m < 2) throw BadInput("ring modulus must be at least 2");
    return Ring::mod(m);
  }
  throw BadInput("unknown ring '" + s + "' (expected Z or Zmod<m>)");
}

/* module expressions: terms joined by '+', each R, R^k, Z<d>, or Z<d>^k */
FPModule parse_module(const Ring& ring, const std::string& expr) {
  std::vector<FPModule> parts;
  std::string term;
  std::istringstream in(expr);
  while (std::getline(in, term, '+')) {
    term.erase(0, term.find_first_not_of(" \t"));
    term.erase(term.find_last_not_of(" \t") + 1);
    if (term.empty()) throw BadInput("empty term in module expression");
    long copies = 1;
    auto caret = term.find('^');
    if (caret != std::string::npos) {
      copies = std::stol(term.substr(caret + 1));
      if (copies < 1) throw BadInput("module power must be positive");
      term = term.substr(0, caret);
    }
    FPModule piece = FPModule::zero_module(ring);
    if (term == "R") {
      piece = FPModule::free_module(ring, 1);
    } else if (term.size() > 1 && term[0] == 'Z') {
      Int d(term.substr(1));
      if (d < 1) throw BadInput("cyclic order must be positive");
      piece = FPModule::cyclic(ring, d);
    } else {
      throw BadInput("unknown module term '" + term + "' (expected R, R^k, Z<d>, Z<d>^k)");
    }
    for (long c = 0; c < copies; ++c) parts.push_back(piece);
  }
  if (parts.empty()) throw BadInput("empty module expression");
  if (parts.size() == 1) return parts[0];
  return direct_sum(parts).sum;
}

/* --ses B=<expr>,A=[c1,...;c1,...]: commas inside [...] separate coordinates,
 * semicolons separate generators */
ShortExactSequence parse_ses(const Ring& ring, const std::string& spec) {
  std::string b_part, a_part;
  int depth = 0;
  size_t split = std::string::npos;
  for (size_t i = 0; i < spec.size(); ++i) {
    if (spec[i] == '[') ++depth;
    if (spec[i] == ']') --depth;
    if (spec[i] == ',' && depth == 0) {
      split = i;
      break;
    }
  }
  if (split == std::string::npos) throw BadInput("--ses expects B=<expr>,A=[generators]");
  b_part = spec.substr(0, split);
  a_part = spec.substr(split + 1);
  if (b_part.rfind("B=", 0) != 0 || a_part.rfind("A=", 0) != 0)
    throw BadInput("--ses expects B=<expr>,A=[generators]");
  FPModule B = parse_module(ring, b_part.substr(2));
  std::string gens = a_part.substr(2);
  if (gens.size() < 2 || gens.front() != '[' || gens.back() != ']')
    throw BadInput("--ses generator list must be bracketed");
  gens = gens.substr(1, gens.size() - 2);
  std::vector<Vec> a_gens;
  std::string gen;
  std::istringstream gin(gens);
  while (std::getline(gin, gen, ';')) {
    Vec v;
    std::string coord;
    std::istringstream cin_(gen);
    while (std::getline(cin_, coord, ',')) {
      coord.erase(0, coord.find_first_not_of(" \t"));
      coord.erase(coord.find_last_not_of(" \t") + 1);
      if (coord.empty()) throw BadInput("empty coordinate in --ses generator");
      v.emplace_back(coord);
    }
    if (static_cast<long>(v.size()) != B.n)
      throw BadInput("generator length does not match the number of generators of B");
    a_gens.push_back(std::move(v));
  }
  if (a_gens.empty()) throw BadInput("--ses needs at least one generator for A");
  return make_ses(B, a_gens);
}

ModuleClass parse_class(const Ring& ring, const std::string& name) {
  ClassBounds one;
  one.max_gens = 1;
  one.max_rels = 1;
  one.entry_bound = 8;
  ClassBounds two = one;
  two.max_gens = 2;
  two.max_rels = 2;
  if (name == "cyclic-free") return generate_class(ring, ClassKind::CyclicFree, one);
  if (name == "fp-bounded") return generate_class(ring, ClassKind::FinitelyPresentedBounded, two);
  if (name == "cyclic-cyclically-presented")
    return generate_class(ring, ClassKind::CyclicCyclicallyPresented, one);
  if (name == "cyclically-presented")
    return generate_class(ring, ClassKind::CyclicallyPresented, two);
  if (name == "transpose-cyclically-presented")
    return transpose_class(generate_class(ring, ClassKind::CyclicallyPresented, two));
  throw BadInput("unknown class '" + name +
                 "' (expected cyclic-free, fp-bounded, cyclic-cyclically-presented, "
                 "cyclically-presented, transpose-cyclically-presented)");
}

Criterion parse_criterion(const std::string& s) {
  if (s == "i") return Criterion::DefinitionLift;
  if (s == "ii") return Criterion::TransposeTensor;
  if (s == "iii") return Criterion::MatrixIntersection;
  if (s == "iv") return Criterion::EquationTransfer;
  throw BadInput("unknown criterion '" + s + "' (expected i, ii, iii, iv, or all)");
}

/* ---------------- output helpers ---------------- */

struct Output {
  std::string format{"text"};
  std::string out_file;
  unsigned long long seed{42};
  EnvelopeCaps caps;
  long corpus_size{500};

  Json caps_json() const {
    Json j = Json::object();
    j["cap_hom"] = caps.target_gens;
    j["cap_submodules"] = caps.subgroup_count;
    j["corpus_size"] = corpus_size;
    return j;
  }

  int emit(const std::string& command, Json body) const {
    ReportMeta meta;
    meta.command = command;
    meta.seed = seed;
    meta.caps = caps_json();
    Json rep = make_report(meta, std::move(body));
    std::string text = format == "structured" ? rep.dump(2) + "\n" : render_text(rep);
    if (!out_file.empty()) {
      std::ofstream f(out_file, std::ios::binary);
      if (!f) throw BadInput("cannot open output file '" + out_file + "'");
      f << text;
    } else {
      std::cout << text;
    }
    return 0;
  }
};

Json json_of_canonical(const FPModule& M) {
  CanonicalForm cf = canonicalize(M);
  Json factors = Json::array();
  for (const Int& d : cf.factors) factors.push_back(json_of_int(d));
  Json j = Json::object();
  j["factors"] = std::move(factors);
  j["free_rank"] = cf.free_rank;
  j["signature"] = cf.signature();
  return j;
}

/* ---------------- subcommand bodies ---------------- */

int run_check_purity(const Output& out, const Ring& ring, const std::string& ses_spec,
                     const std::string& class_name, const std::string& criterion) {
  ShortExactSequence seq = parse_ses(ring, ses_spec);
  ModuleClass S = parse_class(ring, class_name);
  Json body = Json::object();
  body["sequence"] = json_of_ses(seq);
  body["class"] = class_name;
  if (criterion == "all") {
    CrossCheckReport cc = purity_cross_check(seq, S);
    body["cross_check"] = json_of_cross_check(cc);
    body["pure"] = cc.pure;
  } else {
    PurityVerdict v = is_s_pure(seq, S, parse_criterion(criterion));
    body["verdict"] = json_of_purity(v);
    body["pure"] = v.pure;
  }
  return out.emit("check-purity", std::move(body));
}

int run_suite_cmd(const Output& out, long transport_trials) {
  SuiteOptions opt;
  opt.seed = out.seed;
  opt.corpus_size = out.corpus_size;
  opt.transport_trials = transport_trials;
  std::vector<CriterionResult> results =
      run_acceptance_suite(opt, out.format == "text" && out.out_file.empty() ? &std::cerr : nullptr);
  bool all = true;
  for (const CriterionResult& r : results) all = all && r.pass;
  int rc = out.emit("suite", suite_report_body(results));
  return rc != 0 ? rc : (all ? 0 : 1);
}

int run_cross_check_cmd(const Output& out) {
  SuiteOptions opt;
  opt.seed = out.seed;
  opt.corpus_size = out.corpus_size;
  CriterionResult r = criterion_purity_agreement(opt);
  Json body = Json::object();
  body["checked"] = r.checked;
  body["failures"] = r.failures;
  body["pass"] = r.pass;
  body["detail"] = r.detail;
  int rc = out.emit("cross-check", std::move(body));
  return rc != 0 ? rc : (r.pass ? 0 : 1);
}

int run_job(const Output& defaults, const std::string& path) {
  std::ifstream f(path);
  if (!f) throw BadInput("cannot open job file '" + path + "'");
  Json job = Json::parse(f); /* throws with a byte-position message */

  Output out = defaults;
  if (job.contains("format")) out.format = job["format"].get<std::string>();
  if (job.contains("out")) out.out_file = job["out"].get<std::string>();
  if (job.contains("caps")) {
    const Json& c = job["caps"];
    if (c.contains("cap_hom")) out.caps.target_gens = c["cap_hom"].get<long>();
    if (c.contains("cap_submodules")) out.caps.subgroup_count = c["cap_submodules"].get<long>();
    if (c.contains("corpus_size")) out.corpus_size = c["corpus_size"].get<long>();
    if (c.contains("seed")) out.seed = c["seed"].get<unsigned long long>();
  }

  Ring ring = job.contains("ring") ? ring_from_json(job["ring"]) : Ring::integers();
  std::map<std::string, FPModule> modules;
  if (job.contains("modules"))
    for (auto it = job["modules"].begin(); it != job["modules"].end(); ++it) {
      Json m = it.value();
      if (!m.contains("ring")) m["ring"] = json_of_ring(ring);
      modules.emplace(it.key(), module_from_json(m));
    }
  auto named = [&](const std::string& name) -> const FPModule& {
    auto it = modules.find(name);
    if (it == modules.end()) throw BadInput("job references unknown module '" + name + "'");
    return it->second;
  };

  std::string command = job.at("command").get<std::string>();
  Json args = job.contains("args") ? job["args"] : Json::object();
  auto cls = [&]() {
    if (job.contains("class") && job["class"].is_object()) return class_from_json(job["class"]);
    return parse_class(ring, job.at("class").get<std::string>());
  };

  if (command == "canonicalize") {
    const FPModule& M = named(args.at("module").get<std::string>());
    Json body = Json::object();
    body["module"] = json_of_module(M);
    body["canonical"] = json_of_canonical(M);
    return out.emit("canonicalize", std::move(body));
  }
  if (command == "check-purity") {
    std::vector<Vec> gens;
    for (const Json& col : args.at("a_generators")) gens.push_back(vec_from_json(col));
    ShortExactSequence seq = make_ses(named(args.at("B").get<std::string>()), gens);
    ModuleClass S = cls();
    std::string crit = args.contains("criterion") ? args["criterion"].get<std::string>() : "all";
    Json body = Json::object();
    body["sequence"] = json_of_ses(seq);
    if (crit == "all") {
      CrossCheckReport cc = purity_cross_check(seq, S);
      body["cross_check"] = json_of_cross_check(cc);
      body["pure"] = cc.pure;
    } else {
      PurityVerdict v = is_s_pure(seq, S, parse_criterion(crit));
      body["verdict"] = json_of_purity(v);
      body["pure"] = v.pure;
    }
    return out.emit("check-purity", std::move(body));
  }
  throw BadInput("job command '" + command + "' is not supported in job files");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"relpure: relative purity, preenvelopes, envelopes, and balance over Z and Z/m"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string ring_str = "Z";
  Output out;
  long cap_hom = EnvelopeCaps{}.target_gens;
  long cap_sub = EnvelopeCaps{}.subgroup_count;
  app.add_option("--ring", ring_str, "coefficient ring: Z or Zmod<m>");
  app.add_option("--seed", out.seed, "seed for randomized sweeps");
  app.add_option("--cap-hom", cap_hom, "generator cap for hom/target enumeration");
  app.add_option("--cap-submodules", cap_sub, "cap on enumerated submodules");
  app.add_option("--corpus-size", out.corpus_size, "number of corpus instances");
  app.add_option("--format", out.format, "text or structured")
      ->check(CLI::IsMember({"text", "structured"}));
  app.add_option("--out", out.out_file, "write the report to a file");

  std::string module_expr, module2_expr, ses_spec, class_name = "cyclic-free",
                                                   class2_name, criterion = "all", job_file;
  long degree = 1, order_bound = 16, depth = 4, transport_trials = 200;
  bool verify_flag = false;

  CLI::App* c_canon = app.add_subcommand("canonicalize", "invariant factor decomposition");
  c_canon->add_option("--module", module_expr, "module expression")->required();

  CLI::App* c_tr = app.add_subcommand("transpose", "Auslander transpose");
  c_tr->add_option("--module", module_expr, "module expression")->required();

  CLI::App* c_purity = app.add_subcommand("check-purity", "decide S-purity of a sequence");
  c_purity->add_option("--ses", ses_spec, "B=<expr>,A=[generators]")->required();
  c_purity->add_option("--class", class_name, "module class name");
  c_purity->add_option("--criterion", criterion, "i, ii, iii, iv, or all");

  CLI::App* c_eq = app.add_subcommand("class-equiv", "compare purity notions of two classes");
  c_eq->add_option("--class", class_name, "first class");
  c_eq->add_option("--class2", class2_name, "second class")->required();

  CLI::App* c_dual = app.add_subcommand("dual", "Pontryagin dual");
  c_dual->add_option("--module", module_expr, "module expression")->required();

  CLI::App* c_flat = app.add_subcommand("flat", "S-pure flatness");
  c_flat->add_option("--module", module_expr, "module expression")->required();
  c_flat->add_option("--class", class_name, "module class name");

  CLI::App* c_pinj = app.add_subcommand("pinj", "S-pure injectivity");
  c_pinj->add_option("--module", module_expr, "module expression")->required();
  c_pinj->add_option("--class", class_name, "module class name");

  CLI::App* c_pre = app.add_subcommand("preenvelope", "S-pure injective preenvelope");
  c_pre->add_option("--module", module_expr, "module expression")->required();
  c_pre->add_option("--class", class_name, "module class name");
  c_pre->add_flag("--verify", verify_flag, "run the purity and injectivity postconditions");

  CLI::App* c_env = app.add_subcommand("envelope", "S-pure injective envelope");
  c_env->add_option("--module", module_expr, "module expression")->required();
  c_env->add_option("--class", class_name, "module class name");

  CLI::App* c_ext = app.add_subcommand("ext", "relative Ext via both resolutions");
  c_ext->add_option("--module", module_expr, "first module M")->required();
  c_ext->add_option("--module2", module2_expr, "second module N")->required();
  c_ext->add_option("--class", class_name, "module class name");
  c_ext->add_option("--degree", degree, "cohomological degree n");

  CLI::App* c_dims = app.add_subcommand("dims", "global relative dimensions over a corpus");
  c_dims->add_option("--class", class_name, "module class name");
  c_dims->add_option("--order-bound", order_bound, "module order bound");
  c_dims->add_option("--depth", depth, "resolution depth");

  CLI::App* c_cc = app.add_subcommand("cross-check", "four-criteria agreement sweep");
  (void)c_cc;

  CLI::App* c_suite = app.add_subcommand("suite", "full acceptance suite");
  c_suite->add_option("--transport-trials", transport_trials, "transport trial count");

  CLI::App* c_run = app.add_subcommand("run", "execute a JSON job file");
  c_run->add_option("job", job_file, "job file path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  out.caps.target_gens = cap_hom;
  out.caps.subgroup_count = cap_sub;

  try {
    Ring ring = parse_ring(ring_str);
    if (c_canon->parsed()) {
      FPModule M = parse_module(ring, module_expr);
      Json body = Json::object();
      body["module"] = json_of_module(M);
      body["canonical"] = json_of_canonical(M);
      return out.emit("canonicalize", std::move(body));
    }
    if (c_tr->parsed()) {
      FPModule M = parse_module(ring, module_expr);
      FPModule T = auslander_transpose(M);
      Json body = Json::object();
      body["module"] = json_of_module(M);
      body["transpose"] = json_of_module(T);
      body["canonical"] = json_of_canonical(T);
      return out.emit("transpose", std::move(body));
    }
    if (c_purity->parsed())
      return run_check_purity(out, ring, ses_spec, class_name, criterion);
    if (c_eq->parsed()) {
      ModuleClass S1 = parse_class(ring, class_name);
      ModuleClass S2 = parse_class(ring, class2_name);
      std::vector<ShortExactSequence> corpus =
          random_corpus(ring, out.corpus_size, out.seed, Int(128));
      ClassEquivalence eq = purity_equivalent(S1, S2, corpus);
      Json body = Json::object();
      body["class1"] = class_name;
      body["class2"] = class2_name;
      body["corpus"] = static_cast<long>(corpus.size());
      body["equivalent"] = eq.equivalent;
      if (!eq.equivalent) {
        body["distinguishing_index"] = eq.distinguishing_index;
        body["class1_pure"] = eq.s1_verdict;
        body["class2_pure"] = eq.s2_verdict;
      }
      return out.emit("class-equiv", std::move(body));
    }
    if (c_dual->parsed()) {
      FPModule M = parse_module(ring, module_expr);
      DualModule d = pontryagin_dual(M);
      Json body = Json::object();
      body["module"] = json_of_module(M);
      body["dual"] = json_of_module(d.dual);
      body["canonical"] = json_of_canonical(d.dual);
      return out.emit("dual", std::move(body));
    }
    if (c_flat->parsed()) {
      FPModule M = parse_module(ring, module_expr);
      ModuleClass S = parse_class(ring, class_name);
      std::vector<ShortExactSequence> corpus =
          ring.is_z() ? random_corpus(ring, 24, out.seed, Int(64)) : std::vector<ShortExactSequence>{};
      FlatReport f = is_s_pure_flat(M, S, corpus);
      Json body = Json::object();
      body["module"] = json_of_module(M);
      body["class"] = class_name;
      body["flat"] = f.flat;
      body["decided"] = f.decided;
      if (f.refuting_index >= 0) body["refuting_index"] = f.refuting_index;
      return out.emit("flat", std::move(body));
    }
    if (c_pinj->parsed()) {
      FPModule M = parse_module(ring, module_expr);
      ModuleClass S = parse_class(ring, class_name);
      SplitVerdict v = is_s_pure_injective(M, S, out.caps);
      Json body = Json::object();
      body["module"] = json_of_module(M);
      body["class"] = class_name;
      body["injective"] = v.injective;
      body["has_retraction"] = v.retraction.has_value();
      if (v.retraction) body["retraction"] = json_of_mat(v.retraction->mat);
      return out.emit("pinj", std::move(body));
    }
    if (c_pre->parsed()) {
      FPModule M = parse_module(ring, module_expr);
      ModuleClass S = parse_class(ring, class_name);
      Preenvelope pre = preenvelope(M, S, verify_flag, out.caps);
      Json body = Json::object();
      body["module"] = json_of_module(M);
      body["class"] = class_name;
      body["target"] = json_of_module(pre.target);
      body["target_canonical"] = json_of_canonical(pre.target);
      body["map"] = json_of_mat(pre.map.mat);
      body["verified"] = verify_flag;
      return out.emit("preenvelope", std::move(body));
    }
    if (c_env->parsed()) {
      FPModule M = parse_module(ring, module_expr);
      ModuleClass S = parse_class(ring, class_name);
      EnvelopeResult env = envelope(M, S, out.caps);
      EnvelopeVerification ver = verify_envelope(env, S, out.caps);
      Json body = Json::object();
      body["module"] = json_of_module(M);
      body["class"] = class_name;
      body["envelope"] = json_of_module(env.envelope);
      body["canonical"] = json_of_canonical(env.envelope);
      body["embedding"] = json_of_mat(env.embedding.mat);
      body["path"] = env.path;
      Json v = Json::object();
      v["maximal_essential"] = ver.maximal_essential;
      v["essential_and_injective"] = ver.essential_and_injective;
      v["minimal_injective"] = ver.minimal_injective;
      v["endomorphisms_are_automorphisms"] = ver.endomorphisms_are_automorphisms;
      v["all_pass"] = ver.all_pass();
      body["verification"] = std::move(v);
      Json u = Json::object();
      u["all_isomorphic"] = env.uniqueness_check.all_isomorphic;
      u["candidates"] = env.uniqueness_check.candidates;
      body["uniqueness"] = std::move(u);
      return out.emit("envelope", std::move(body));
    }
    if (c_ext->parsed()) {
      FPModule M = parse_module(ring, module_expr);
      FPModule N = parse_module(ring, module2_expr);
      ModuleClass S = parse_class(ring, class_name);
      ExtResult e = rel_ext(M, N, S, degree, out.caps);
      Json body = Json::object();
      body["M"] = json_of_module(M);
      body["N"] = json_of_module(N);
      body["class"] = class_name;
      body["degree"] = e.degree;
      body["via_projective"] = json_of_canonical(e.via_projective);
      body["via_injective"] = json_of_canonical(e.via_injective);
      body["isomorphic"] = e.isomorphic;
      body["signature"] = e.signature;
      return out.emit("ext", std::move(body));
    }
    if (c_dims->parsed()) {
      ModuleClass S = parse_class(ring, class_name);
      DimReport d = pure_dims(ring, S, Int(order_bound), depth, out.caps);
      Json body = Json::object();
      body["class"] = class_name;
      body["order_bound"] = json_of_int(d.order_bound);
      body["depth"] = d.depth;
      Json entries = Json::array();
      for (const DimEntry& e : d.entries) {
        Json je = Json::object();
        Json fs = Json::array();
        for (const Int& x : e.factors) fs.push_back(json_of_int(x));
        je["factors"] = std::move(fs);
        je["projective"] = e.projective;
        je["injective"] = e.injective;
        entries.push_back(std::move(je));
      }
      body["entries"] = std::move(entries);
      body["global_projective"] = d.global_projective;
      body["projective_exact"] = d.projective_exact;
      body["global_injective"] = d.global_injective;
      body["injective_exact"] = d.injective_exact;
      return out.emit("dims", std::move(body));
    }
    if (c_cc->parsed()) return run_cross_check_cmd(out);
    if (c_suite->parsed()) return run_suite_cmd(out, transport_trials);
    if (c_run->parsed()) return run_job(out, job_file);
    std::cerr << "no subcommand selected" << std::endl;
    return 2;
  } catch (const ScaleExceeded& e) {
    std::cerr << "scale exceeded: " << e.what() << std::endl;
    return 3;
  } catch (const TheoryViolation& e) {
    std::cerr << "theory violation: " << e.what() << std::endl;
    return 1;
  } catch (const BadInput& e) {
    std::cerr << "bad input: " << e.what() << std::endl;
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "bad input: " << e.what() << std::endl;
    return 2;
  } catch (const Json::exception& e) {
    std::cerr << "bad input: " << e.what() << std::endl;
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 2;
  }
}
