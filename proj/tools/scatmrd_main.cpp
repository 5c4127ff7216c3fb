// scatmrd: construct maximum scattered subspaces, build the rank-metric
// codes they induce, verify scatteredness / minimum distance / span
// equality, and export codeword matrices.
//
// Exit codes: 0 success (and positive verdicts), 2 parameter or usage
// error, 3 negative verdict or failed internal verification, 4 I/O or
// document-format error, 5 exhaustive budget exceeded.  Every failure also
// prints a machine-readable {"error": ...} object; every success prints a
// report or summary object.  One job per process; outputs are written
// atomically (temp + rename).

#include <CLI11.hpp>

#include <chrono>
#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "scatmrd/constructions.hpp"
#include "scatmrd/fields.hpp"
#include "scatmrd/linmaps.hpp"
#include "scatmrd/linsets.hpp"
#include "scatmrd/rankcodes.hpp"
#include "scatmrd/serialize.hpp"

namespace {

using namespace scatmrd;

constexpr int kOkExit = 0;
constexpr int kParamExit = 2;
constexpr int kVerdictExit = 3;
constexpr int kIoExit = 4;
constexpr int kBudgetExit = 5;

void emit(const json& j) { std::cout << json_to_string(j) << std::flush; }

[[noreturn]] void fail(int code, const std::string& kind, const std::string& message) {
  json err;
  err["error"]["exit_code"] = code;
  err["error"]["kind"] = kind;
  err["error"]["message"] = message;
  emit(err);
  std::exit(code);
}

bool mentions_budget(const std::string& what) {
  return what.find("budget") != std::string::npos ||
         what.find("too large to enumerate") != std::string::npos;
}

class Timer {
 public:
  Timer() : start_(std::chrono::steady_clock::now()) {}
  std::int64_t ms() const {
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

// ---- construct ---------------------------------------------------------

struct ConstructArgs {
  std::string kind;
  std::uint32_t p = 2;
  int h = 1;
  int t = 0;
  int r = 3;
  int n = 0;
  int t_pairs = 1;
  int s = 1;
  int k = 0;
  std::optional<int> i;
  std::string out;
  std::string trace_out;
  std::string replay;
};

json construct_job(const ConstructArgs& a) {
  json job;
  job["command"] = "construct";
  job["h"] = a.h;
  if (a.i) job["i"] = *a.i;
  if (a.kind == "w-example") job["k"] = a.k;
  job["kind"] = a.kind;
  if (a.kind == "pseudoregulus" || a.kind == "w-example") job["n"] = a.n;
  if (!a.out.empty()) job["out"] = a.out;
  job["p"] = a.p;
  if (a.kind == "monomial-ex1" || a.kind == "monomial-ex2") job["r"] = a.r;
  if (!a.replay.empty()) job["replay"] = a.replay;
  if (a.kind == "pseudoregulus") job["s"] = a.s;
  if (a.kind == "plane" || a.kind == "monomial-ex1" || a.kind == "monomial-ex2")
    job["t"] = a.t;
  if (a.kind == "pseudoregulus") job["t_pairs"] = a.t_pairs;
  if (!a.trace_out.empty()) job["trace"] = a.trace_out;
  return job;
}

int run_construct(const ConstructArgs& a) {
  if (a.out.empty() && a.replay.empty())
    fail(kParamExit, "parameter", "construct needs --out (or --replay to re-verify)");
  QParams q{a.p, a.h};
  json doc;
  if (a.kind == "plane") {
    if (a.t == 0) fail(kParamExit, "parameter", "construct plane needs --t");
    doc = plane_build_to_json(build_scattered_plane(q, a.t, a.i));
  } else if (a.kind == "monomial-ex1" || a.kind == "monomial-ex2") {
    if (a.t == 0) fail(kParamExit, "parameter", "construct " + a.kind + " needs --t");
    MonomialVariant variant = a.kind == "monomial-ex1" ? MonomialVariant::r_linear
                                                       : MonomialVariant::coprime;
    doc = monomial_build_to_json(a.kind, build_monomial_family(q, a.t, a.r, a.i, variant));
  } else if (a.kind == "pseudoregulus") {
    if (a.n == 0) fail(kParamExit, "parameter", "construct pseudoregulus needs --n");
    doc = pseudoregulus_build_to_json(q, a.n, a.t_pairs, a.s,
                                      build_pseudoregulus(q, a.n, a.t_pairs, a.s));
  } else if (a.kind == "w-example") {
    if (a.n == 0 || a.k == 0)
      fail(kParamExit, "parameter", "construct w-example needs --n and --k");
    doc = w_example_build_to_json(q, a.n, a.k, build_w_example(q, a.n, a.k));
  } else {
    fail(kParamExit, "parameter", "unknown construction kind \"" + a.kind + "\"");
  }

  std::string bytes = json_to_string(doc);
  json summary;
  summary["command"] = "construct";
  summary["job"] = construct_job(a);
  summary["kind"] = a.kind;
  summary["rank"] = doc["subspace"]["k"];
  summary["scattered"] = true;  // every builder re-verifies before returning
  summary["trace_steps"] = doc["trace"]["steps"].size();

  if (!a.replay.empty()) {
    std::string old_bytes = read_file(a.replay);
    json old_doc;
    try {
      old_doc = json::parse(old_bytes);
    } catch (const json::parse_error& e) {
      throw IoError("malformed JSON in \"" + a.replay + "\": " + e.what());
    }
    SearchTrace fresh = trace_from_json(doc["trace"]);
    SearchTrace logged;
    bool compare_bytes = false;
    if (old_doc.is_object() && old_doc.value("format", "") == kConstructionFormat) {
      logged = trace_from_json(old_doc.at("trace"));
      compare_bytes = true;
    } else if (old_doc.is_object() && old_doc.value("format", "") == kTraceFormat) {
      logged = trace_from_json(old_doc);
    } else {
      throw IoError("replay input is neither a construction nor a trace record");
    }
    json replay;
    replay["steps_compared"] = logged.steps.size();
    std::size_t upto = std::min(logged.steps.size(), fresh.steps.size());
    std::size_t mismatch = upto;
    for (std::size_t idx = 0; idx < upto; ++idx)
      if (!(fresh.steps[idx] == logged.steps[idx])) {
        mismatch = idx;
        break;
      }
    bool trace_ok = logged.steps.size() == fresh.steps.size() && mismatch == upto;
    replay["trace_identical"] = trace_ok;
    if (!trace_ok && mismatch < upto) replay["first_divergence"] = mismatch;
    if (compare_bytes) replay["bytes_identical"] = (old_bytes == bytes);
    summary["replay"] = replay;
    bool bytes_ok = !compare_bytes || old_bytes == bytes;
    if (!trace_ok || !bytes_ok) {
      emit(summary);
      return kVerdictExit;
    }
  }

  if (!a.out.empty()) write_file_atomic(a.out, bytes);
  if (!a.trace_out.empty()) write_file_atomic(a.trace_out, json_to_string(doc["trace"]));
  emit(summary);
  return kOkExit;
}

// ---- verify ------------------------------------------------------------

struct VerifyArgs {
  std::string kind;
  std::vector<std::string> inputs;
  std::string mode = "exhaustive";
  std::uint64_t budget = std::uint64_t{1} << 22;
  std::uint64_t samples = 10000;
  std::uint64_t seed = 0;
  std::string report_out;
};

json verify_job(const VerifyArgs& a) {
  json job;
  job["budget"] = a.budget;
  job["command"] = "verify";
  job["inputs"] = a.inputs;
  job["kind"] = a.kind;
  job["mode"] = a.mode;
  if (!a.report_out.empty()) job["report"] = a.report_out;
  if (a.mode == "sample") {
    job["samples"] = a.samples;
    job["seed"] = a.seed;
  }
  return job;
}

int finish_report(json report, const VerifyArgs& a, bool positive) {
  report["job"] = verify_job(a);
  if (!a.report_out.empty()) write_file_atomic(a.report_out, json_to_string(report));
  emit(report);
  return positive ? kOkExit : kVerdictExit;
}

int run_verify(const VerifyArgs& a) {
  if (a.kind == "equal") {
    if (a.inputs.size() != 2)
      fail(kParamExit, "parameter", "verify equal needs exactly two code files");
  } else if (a.inputs.size() != 1) {
    fail(kParamExit, "parameter", "verify " + a.kind + " needs exactly one input file");
  }

  if (a.kind == "scattered") {
    Timer timer;
    Subspace u = subspace_from_document(read_json_file(a.inputs[0]));
    LinearSetAnalysis analysis = analyze_linear_set(u);
    json report = analysis_to_json(analysis, u);
    report["ambient"] = json{{"components", u.ambient().comps},
                             {"h", u.ambient().tw->h()},
                             {"n", u.ambient().n},
                             {"p", u.ambient().tw->p()},
                             {"r", u.ambient().r()}};
    report["command"] = "verify";
    report["kind"] = "scattered";
    report["points"] = analysis.points;
    report["rank"] = u.k();
    report["wall_time_ms"] = timer.ms();
    return finish_report(std::move(report), a, analysis.scattered);
  }

  if (a.kind == "mrd") {
    Timer timer;
    RankCode c = code_from_json(read_json_file(a.inputs[0]));
    json claimed;
    claimed["verification_status"] = to_string(c.status);
    if (c.d_min) claimed["d_min"] = *c.d_min;
    json report;
    report["claimed"] = claimed;
    report["command"] = "verify";
    report["kind"] = "mrd";
    report["params"] = json{{"dim", c.dim},
                            {"h", c.tw->h()},
                            {"m", c.m},
                            {"n", c.n},
                            {"p", c.tw->p()}};
    bool positive = true;
    if (a.mode == "exhaustive") {
      DistanceReport r = min_rank_distance(c, ScanMode::exhaustive_mode(a.budget));
      cache_distance(c, r);  // throws when the scan contradicts a recorded claim
      bool mrd = is_mrd(c);
      json measured;
      measured["d"] = r.d;
      measured["exact"] = true;
      measured["scanned"] = r.scanned;
      measured["witness_index"] = r.witness_index;
      report["d"] = r.d;
      report["measured"] = measured;
      report["mrd"] = mrd;
      if (!mrd) report["witness"] = fqmat_to_json(r.witness);
      positive = mrd;
    } else {
      DistanceReport r = min_rank_distance(c, ScanMode::sample_mode(a.samples, a.seed));
      cache_distance(c, r);  // cross-check only; never upgrades the status
      json measured;
      measured["d_upper_bound"] = r.d;
      measured["exact"] = false;
      measured["scanned"] = r.scanned;
      report["measured"] = measured;
      if (c.status == VerifStatus::theorem || c.status == VerifStatus::exhaustive) {
        bool mrd = is_mrd(c);
        report["mrd"] = mrd;
        positive = mrd;
      }
    }
    report["wall_time_ms"] = timer.ms();
    return finish_report(std::move(report), a, positive);
  }

  if (a.kind == "equal") {
    Timer timer;
    RankCode c1 = code_from_json(read_json_file(a.inputs[0]));
    RankCode c2 = code_from_json(read_json_file(a.inputs[1]));
    json report;
    report["command"] = "verify";
    report["kind"] = "equal";
    report["left"] = json{{"dim", c1.dim}, {"m", c1.m}, {"n", c1.n}};
    report["right"] = json{{"dim", c2.dim}, {"m", c2.m}, {"n", c2.n}};
    bool comparable = c1.m == c2.m && c1.n == c2.n && c1.tw->p() == c2.tw->p() &&
                      c1.tw->h() == c2.tw->h();
    bool equal = comparable && codes_equal(c1, c2);
    report["equal"] = equal;
    if (!comparable) report["reason"] = "shape or base field mismatch";
    report["wall_time_ms"] = timer.ms();
    return finish_report(std::move(report), a, equal);
  }

  fail(kParamExit, "parameter", "unknown verify kind \"" + a.kind + "\"");
}

// ---- build-code ----------------------------------------------------------

struct BuildCodeArgs {
  std::string from;
  std::string out;
  bool sheekey = false;
  bool explicit_fv = false;
  std::optional<int> restriction;
  std::vector<int> gabidulin;  // n k s
  std::uint32_t p = 2;
  int h = 1;
};

// The unique linearized polynomial whose graph the two-component subspace
// is; errors when the first-component projection is not bijective.
LinearizedPoly graph_poly(const Subspace& u) {
  const Ambient& amb = u.ambient();
  if (amb.ell() != 2 || amb.comps[0] != amb.comps[1])
    throw std::invalid_argument(
        "sheekey builder needs a two-component graph subspace {(x, f(x))}");
  int dom = amb.comps[0];
  if (u.k() != dom)
    throw std::invalid_argument(
        "graph subspace must have F_q-dimension equal to its component degree");
  auto tw = amb.tw;
  Ambient ax = Ambient::make(tw, {dom}, 1);
  std::vector<Vec> xparts;
  xparts.reserve(u.fq_basis().size());
  for (const Vec& v : u.fq_basis()) xparts.push_back(Vec{v[0]});
  if (Subspace::from_fq_generators(ax, xparts).k() != dom)
    throw std::invalid_argument(
        "subspace is not the graph of a map on its first component");
  return lp_from_map(tw, dom, [&](const Element& x) {
    std::vector<fp_t> cs = fq_coords_in_basis(ax, xparts, Vec{x});
    Element y = tw->zero();
    for (std::size_t j = 0; j < cs.size(); ++j)
      y = tw->add(y, tw->mul(tw->sf_element(cs[j]), u.fq_basis()[j][1]));
    return y;
  });
}

int run_build_code(const BuildCodeArgs& a) {
  int chosen = (a.sheekey ? 1 : 0) + (a.explicit_fv ? 1 : 0) +
               (a.restriction ? 1 : 0) + (!a.gabidulin.empty() ? 1 : 0);
  if (chosen > 1)
    fail(kParamExit, "parameter",
         "choose at most one of --sheekey, --restriction, --explicit-fv, --gabidulin");
  if (a.out.empty()) fail(kParamExit, "parameter", "build-code needs --out");

  RankCode code;
  std::string builder;
  if (!a.gabidulin.empty()) {
    if (!a.from.empty())
      fail(kParamExit, "parameter", "--gabidulin builds from parameters, not --from");
    code = gabidulin_code(QParams{a.p, a.h}, a.gabidulin[0], a.gabidulin[1],
                          a.gabidulin[2]);
    builder = "gabidulin";
  } else {
    if (a.from.empty()) fail(kParamExit, "parameter", "build-code needs --from");
    json doc = read_json_file(a.from);
    if (a.restriction) {
      code = restriction_code(code_from_json(doc), *a.restriction);
      builder = "restriction";
    } else if (a.explicit_fv) {
      std::string kind = doc.is_object() ? doc.value("kind", "") : "";
      if (kind == "plane")
        code = explicit_fv_code(plane_params_from_json(doc));
      else if (kind == "monomial-ex1" || kind == "monomial-ex2")
        code = explicit_fv_code(monomial_params_from_json(doc));
      else
        fail(kParamExit, "parameter",
             "--explicit-fv needs a plane or monomial construction record");
      builder = "explicit-fv";
    } else if (a.sheekey) {
      Subspace u = doc.is_object() && doc.value("kind", "") == "w-example"
                       ? subspace_from_json(doc.at("aux").at("u_g"))
                       : subspace_from_document(doc);
      code = sheekey_code(graph_poly(u), u.ambient().n);
      builder = "sheekey";
    } else {
      code = code_from_subspace(subspace_from_document(doc));
      builder = "from_subspace";
    }
  }

  write_file_atomic(a.out, json_to_string(code_to_json(code)));
  json summary;
  summary["builder"] = builder;
  summary["command"] = "build-code";
  if (code.d_min) summary["d_min"] = *code.d_min;
  json job;
  job["command"] = "build-code";
  if (!a.from.empty()) job["from"] = a.from;
  if (!a.gabidulin.empty()) {
    job["gabidulin"] = a.gabidulin;
    job["h"] = a.h;
    job["p"] = a.p;
  }
  job["builder"] = builder;
  job["out"] = a.out;
  if (a.restriction) job["restriction"] = *a.restriction;
  summary["job"] = job;
  summary["out"] = a.out;
  summary["params"] = json{{"dim", code.dim},
                           {"h", code.tw->h()},
                           {"m", code.m},
                           {"n", code.n},
                           {"p", code.tw->p()}};
  summary["provenance"] = to_string(code.provenance);
  summary["verification_status"] = to_string(code.status);
  emit(summary);
  return kOkExit;
}

// ---- export --------------------------------------------------------------

int run_export(const std::string& input, const std::string& format,
               const std::string& out) {
  if (format != "matrices")
    fail(kParamExit, "parameter", "unsupported export format \"" + format + "\"");
  if (out.empty()) fail(kParamExit, "parameter", "export needs --out");
  RankCode code = code_from_json(read_json_file(input));
  std::string text = export_matrices(code);
  write_file_atomic(out, text);
  json summary;
  summary["bytes"] = text.size();
  summary["command"] = "export";
  summary["format"] = format;
  summary["generators"] = code.dim;
  summary["job"] = json{{"command", "export"},
                        {"format", format},
                        {"input", input},
                        {"out", out}};
  summary["out"] = out;
  emit(summary);
  return kOkExit;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "scatmrd: maximum scattered subspaces of PG(r-1, q^n) and the "
      "rank-metric (MRD) codes they induce"};
  app.require_subcommand(1);
  // --h is a domain parameter (base-field degree), so help is --help only.
  app.set_help_flag("--help", "print help");
  app.footer(
      "Exit codes: 0 success, 2 parameter error, 3 negative verdict or failed "
      "verification, 4 I/O or format error, 5 exhaustive budget exceeded.\n"
      "SCATMRD_WORKERS sets the thread count for exhaustive distance scans.");

  ConstructArgs ca;
  CLI::App* construct = app.add_subcommand(
      "construct", "Build a scattered subspace and write {params, subspace, trace}");
  construct->set_help_flag("--help", "print help");
  construct->add_option("kind", ca.kind, "plane|monomial-ex1|monomial-ex2|pseudoregulus|w-example")
      ->required()
      ->check(CLI::IsMember(
          {"plane", "monomial-ex1", "monomial-ex2", "pseudoregulus", "w-example"}));
  construct->add_option("--p", ca.p, "characteristic (default 2)");
  construct->add_option("--h", ca.h, "base field is F_{p^h} (default 1)");
  construct->add_option("--t", ca.t, "half the scalar degree: scalars are F_{q^{2t}}");
  int i_value = 0;
  CLI::Option* i_opt =
      construct->add_option("--i", i_value, "Frobenius exponent (default: least admissible)");
  construct->add_option("--r", ca.r, "odd projective dimension for the monomial kinds (default 3)");
  construct->add_option("--n", ca.n, "scalar degree for pseudoregulus / w-example");
  construct->add_option("--t-pairs", ca.t_pairs, "component pairs for pseudoregulus (default 1)");
  construct->add_option("--s", ca.s, "Frobenius twist for pseudoregulus (default 1)");
  construct->add_option("--k", ca.k, "second exponent for w-example");
  construct->add_option("--out", ca.out, "construction record output path");
  construct->add_option("--trace", ca.trace_out, "also write the bare trace record here");
  construct->add_option("--replay", ca.replay,
                        "previous construction (or trace) to re-verify step by step");

  VerifyArgs va;
  CLI::App* verify =
      app.add_subcommand("verify", "Verify scatteredness, minimum distance, or span equality");
  verify->add_option("kind", va.kind, "scattered|mrd|equal")
      ->required()
      ->check(CLI::IsMember({"scattered", "mrd", "equal"}));
  verify->add_option("inputs", va.inputs, "input document(s)")->expected(1, 2);
  verify->add_option("--mode", va.mode, "exhaustive|sample (default exhaustive)")
      ->check(CLI::IsMember({"exhaustive", "sample"}));
  verify->add_option("--budget", va.budget, "exhaustive codeword cap (default 2^22)");
  verify->add_option("--samples", va.samples, "sampled codeword draws (default 10000)");
  verify->add_option("--seed", va.seed, "sampling seed (default 0)");
  verify->add_option("--report", va.report_out, "also write the report here");

  BuildCodeArgs ba;
  CLI::App* build = app.add_subcommand("build-code", "Build a rank-metric code");
  build->set_help_flag("--help", "print help");
  build->add_option("--from", ba.from, "subspace / construction / code input document");
  build->add_flag("--sheekey", ba.sheekey, "two-coefficient code of a graph subspace");
  int restriction_n = 0;
  CLI::Option* restriction_opt = build->add_option(
      "--restriction", restriction_n, "restrict a code's maps to F_{q^n} of this degree");
  build->add_flag("--explicit-fv", ba.explicit_fv,
                  "explicit two-variable code of a plane/monomial construction");
  build->add_option("--gabidulin", ba.gabidulin, "n k s")->expected(3);
  build->add_option("--p", ba.p, "characteristic for --gabidulin (default 2)");
  build->add_option("--h", ba.h, "base-field degree for --gabidulin (default 1)");
  build->add_option("--out", ba.out, "code record output path");

  std::string ex_input, ex_format, ex_out;
  CLI::App* exporter = app.add_subcommand("export", "Export codeword matrices as text");
  exporter->add_option("input", ex_input, "code record")->required();
  exporter->add_option("--format", ex_format, "matrices")->required();
  exporter->add_option("--out", ex_out, "text output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    json err;
    err["error"]["exit_code"] = kParamExit;
    err["error"]["kind"] = "parameter";
    err["error"]["message"] = e.what();
    emit(err);
    return kParamExit;
  }
  if (i_opt->count()) ca.i = i_value;
  if (restriction_opt->count()) ba.restriction = restriction_n;

  try {
    if (construct->parsed()) return run_construct(ca);
    if (verify->parsed()) return run_verify(va);
    if (build->parsed()) return run_build_code(ba);
    if (exporter->parsed()) return run_export(ex_input, ex_format, ex_out);
  } catch (const IoError& e) {
    fail(kIoExit, "io", e.what());
  } catch (const json::exception& e) {
    fail(kIoExit, "io", e.what());
  } catch (const std::invalid_argument& e) {
    std::string what = e.what();
    if (mentions_budget(what))
      fail(kBudgetExit, "budget", what + "; retry in --mode sample or raise --budget");
    fail(kParamExit, "parameter", what);
  } catch (const std::logic_error& e) {
    fail(kVerdictExit, "verification", e.what());
  } catch (const std::runtime_error& e) {
    std::string what = e.what();
    if (mentions_budget(what))
      fail(kBudgetExit, "budget", what + "; retry in --mode sample or raise --budget");
    fail(kVerdictExit, "verification", what);
  }
  return kParamExit;
}
