#include "scatmrd/serialize.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <utility>
#include <vector>

namespace scatmrd {

namespace {

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key))
    throw IoError(std::string("missing field \"") + key + "\"");
  return j[key];
}

long long jint(const json& j, const char* key) {
  const json& v = field(j, key);
  if (!v.is_number_integer() && !v.is_number_unsigned())
    throw IoError(std::string("field \"") + key + "\" is not an integer");
  return v.get<long long>();
}

std::string jstr(const json& j, const char* key) {
  const json& v = field(j, key);
  if (!v.is_string())
    throw IoError(std::string("field \"") + key + "\" is not a string");
  return v.get<std::string>();
}

void expect_format(const json& j, const char* tag) {
  if (!j.is_object() || !j.contains("format") || !j["format"].is_string() ||
      j["format"].get<std::string>() != tag)
    throw IoError(std::string("document is not a ") + tag + " record");
}

std::vector<int> int_vector(const json& j, const char* key) {
  const json& v = field(j, key);
  if (!v.is_array()) throw IoError(std::string("field \"") + key + "\" is not an array");
  std::vector<int> out;
  out.reserve(v.size());
  for (const json& e : v) {
    if (!e.is_number_integer() && !e.is_number_unsigned())
      throw IoError(std::string("field \"") + key + "\" has a non-integer entry");
    out.push_back(e.get<int>());
  }
  return out;
}

std::vector<fp_t> digit_vector(const json& v, std::uint32_t p, const char* what) {
  if (!v.is_array()) throw IoError(std::string(what) + " is not an array");
  std::vector<fp_t> out;
  out.reserve(v.size());
  for (const json& e : v) {
    if (!e.is_number_integer() && !e.is_number_unsigned())
      throw IoError(std::string(what) + " has a non-integer entry");
    long long c = e.get<long long>();
    if (c < 0 || c >= static_cast<long long>(p))
      throw IoError(std::string(what) + " has an entry outside [0, p)");
    out.push_back(static_cast<fp_t>(c));
  }
  return out;
}

// Entry digits: SmallField index -> h base-p digits, ascending power of
// gamma, matching the index encoding sum d_l gamma^l.
void push_entry_digits(std::vector<int>& out, fp_t idx, std::uint32_t p, int h) {
  std::uint32_t v = idx;
  for (int l = 0; l < h; ++l) {
    out.push_back(static_cast<int>(v % p));
    v /= p;
  }
}

fp_t entry_from_digits(const std::vector<fp_t>& d, std::size_t pos, std::uint32_t p,
                       int h) {
  std::uint32_t idx = 0, mult = 1;
  for (int l = 0; l < h; ++l) {
    idx += static_cast<std::uint32_t>(d[pos + static_cast<std::size_t>(l)]) * mult;
    mult *= p;
  }
  return static_cast<fp_t>(idx);
}

json ambient_to_json(const Ambient& a) {
  json j;
  j["components"] = a.comps;
  j["h"] = a.tw->h();
  j["n"] = a.n;
  j["p"] = a.tw->p();
  j["r"] = a.r();
  return j;
}

// Minimal polynomial of gamma = the canonical F_q generator over F_p,
// prod_{l<h} (x - gamma^{p^l}); the coefficients land in F_p.
std::vector<int> gamma_minpoly(const Tower& tw) {
  int h = tw.h();
  Element gamma = tw.subfield_generator_p(h);
  std::vector<Element> poly{tw.one()};
  for (int l = 0; l < h; ++l) {
    Element root = tw.frobenius_p(gamma, l);
    std::vector<Element> next(poly.size() + 1, tw.zero());
    for (std::size_t k = 0; k < poly.size(); ++k) {
      next[k + 1] = tw.add(next[k + 1], poly[k]);
      next[k] = tw.sub(next[k], tw.mul(poly[k], root));
    }
    poly = std::move(next);
  }
  std::vector<int> out;
  out.reserve(poly.size());
  for (const Element& c : poly) {
    if (!tw.in_subfield_p(c, 1))
      throw std::logic_error("gamma minimal polynomial has a coefficient outside F_p");
    out.push_back(static_cast<int>(c.coeff(0)));
  }
  return out;
}

}  // namespace

// ---- fields ----------------------------------------------------------

json tower_to_json(const Tower& tw) {
  json j;
  j["M"] = tw.M();
  j["declared_degrees"] = tw.declared_degrees();
  j["format"] = kTowerFormat;
  j["h"] = tw.h();
  json mod = json::array();
  for (fp_t c : tw.modulus()) mod.push_back(static_cast<int>(c));
  j["modulus"] = mod;
  j["p"] = tw.p();
  return j;
}

std::shared_ptr<const Tower> tower_from_json(const json& j) {
  expect_format(j, kTowerFormat);
  auto p = static_cast<std::uint32_t>(jint(j, "p"));
  int big_m = static_cast<int>(jint(j, "M"));
  int h = static_cast<int>(jint(j, "h"));
  std::vector<int> declared = int_vector(j, "declared_degrees");
  auto tw = Tower::make(p, big_m, declared, h);
  std::vector<int> mod = int_vector(j, "modulus");
  std::vector<int> have;
  have.reserve(tw->modulus().size());
  for (fp_t c : tw->modulus()) have.push_back(static_cast<int>(c));
  if (mod != have)
    throw IoError("field modulus in the document is not the canonical one");
  return tw;
}

json element_to_json(const Element& x) { return json(x.coeff_vector()); }

Element element_from_json(const json& j, const Tower& tw) {
  if (!j.is_array()) throw IoError("element is not a coefficient array");
  std::vector<int> coeffs;
  coeffs.reserve(j.size());
  for (const json& e : j) {
    if (!e.is_number_integer() && !e.is_number_unsigned())
      throw IoError("element has a non-integer coefficient");
    long long c = e.get<long long>();
    if (c < 0 || c >= static_cast<long long>(tw.p()))
      throw IoError("element coefficient outside [0, p)");
    coeffs.push_back(static_cast<int>(c));
  }
  if (coeffs.size() > static_cast<std::size_t>(tw.M()))
    throw IoError("element coefficient vector longer than the field degree");
  return tw.from_coeffs(coeffs);
}

// ---- linear maps -----------------------------------------------------

json lp_to_json(const LinearizedPoly& f) {
  json j;
  j["base_q_degree"] = f.d;
  json coeffs = json::array();
  for (const Element& c : f.coef) coeffs.push_back(element_to_json(c));
  j["coeffs"] = coeffs;
  return j;
}

LinearizedPoly lp_from_json(const json& j, std::shared_ptr<const Tower> tw) {
  int d = static_cast<int>(jint(j, "base_q_degree"));
  const json& cj = field(j, "coeffs");
  if (!cj.is_array()) throw IoError("linearized polynomial coeffs is not an array");
  std::vector<Element> coef;
  coef.reserve(cj.size());
  for (const json& e : cj) coef.push_back(element_from_json(e, *tw));
  return LinearizedPoly::make(std::move(tw), d, std::move(coef));
}

json fqmat_to_json(const FqMat& a) {
  json j;
  j["basis"] = "power";
  std::vector<int> entries;
  entries.reserve(a.a.size() * static_cast<std::size_t>(a.tw->h()));
  for (fp_t idx : a.a) push_entry_digits(entries, idx, a.tw->p(), a.tw->h());
  j["entries"] = entries;
  j["m"] = a.m;
  j["n"] = a.n;
  j["q"] = a.tw->q();
  return j;
}

FqMat fqmat_from_json(const json& j, std::shared_ptr<const Tower> tw) {
  int m = static_cast<int>(jint(j, "m"));
  int n = static_cast<int>(jint(j, "n"));
  if (m < 0 || n < 0) throw IoError("matrix has negative dimensions");
  if (static_cast<std::uint32_t>(jint(j, "q")) != tw->q())
    throw IoError("matrix base field does not match the enclosing record");
  std::vector<fp_t> digits = digit_vector(field(j, "entries"), tw->p(), "matrix entries");
  int h = tw->h();
  if (digits.size() != static_cast<std::size_t>(m) * n * h)
    throw IoError("matrix entry list has the wrong length");
  FqMat a = FqMat::zero(tw, m, n);
  for (std::size_t e = 0; e < a.a.size(); ++e)
    a.a[e] = entry_from_digits(digits, e * static_cast<std::size_t>(h), tw->p(), h);
  return a;
}

// ---- subspaces -------------------------------------------------------

json subspace_to_json(const Subspace& u) {
  const Ambient& amb = u.ambient();
  json j;
  j["ambient"] = ambient_to_json(amb);
  json rows = json::array();
  for (const Vec& v : u.fq_basis()) {
    std::vector<fp_t> c = vec_coords(amb, v);
    rows.push_back(std::vector<int>(c.begin(), c.end()));
  }
  j["basis"] = rows;
  j["format"] = kSubspaceFormat;
  j["k"] = u.k();
  j["tower"] = tower_to_json(*amb.tw);
  return j;
}

Subspace subspace_from_json(const json& j) {
  expect_format(j, kSubspaceFormat);
  auto tw = tower_from_json(field(j, "tower"));
  const json& aj = field(j, "ambient");
  if (static_cast<std::uint32_t>(jint(aj, "p")) != tw->p() ||
      static_cast<int>(jint(aj, "h")) != tw->h())
    throw IoError("ambient base field does not match the embedded tower");
  Ambient amb = Ambient::make(tw, int_vector(aj, "components"),
                              static_cast<int>(jint(aj, "n")));
  if (static_cast<int>(jint(aj, "r")) != amb.r())
    throw IoError("ambient r does not match its components");
  const json& bj = field(j, "basis");
  if (!bj.is_array()) throw IoError("subspace basis is not an array");
  std::vector<Vec> gens;
  gens.reserve(bj.size());
  for (const json& row : bj) {
    std::vector<fp_t> coords = digit_vector(row, tw->p(), "basis row");
    if (coords.size() != static_cast<std::size_t>(amb.fp_dim()))
      throw IoError("basis row has the wrong coordinate length");
    gens.push_back(vec_from_coords(amb, coords));
  }
  Subspace u = Subspace::from_fq_generators(amb, gens);
  if (u.k() != static_cast<int>(jint(j, "k")))
    throw IoError("subspace basis does not span the declared dimension");
  return u;
}

// ---- traces and construction records ---------------------------------

json trace_to_json(const SearchTrace& t) {
  json steps = json::array();
  for (const TraceStep& s : t.steps) {
    json e;
    e["label"] = s.label;
    e["value"] = s.value;
    steps.push_back(e);
  }
  json j;
  j["format"] = kTraceFormat;
  j["steps"] = steps;
  return j;
}

SearchTrace trace_from_json(const json& j) {
  expect_format(j, kTraceFormat);
  const json& sj = field(j, "steps");
  if (!sj.is_array()) throw IoError("trace steps is not an array");
  SearchTrace t;
  for (const json& e : sj) {
    const json& v = field(e, "value");
    if (!v.is_number_unsigned() &&
        !(v.is_number_integer() && v.get<long long>() >= 0))
      throw IoError("trace step value is not a nonnegative integer");
    t.log(jstr(e, "label"), v.get<std::uint64_t>());
  }
  return t;
}

json plane_build_to_json(const PlaneBuild& b) {
  json params;
  params["A0"] = element_to_json(b.params.A0);
  params["A1"] = element_to_json(b.params.A1);
  params["a"] = element_to_json(b.params.a);
  params["b"] = element_to_json(b.params.b);
  params["c"] = element_to_json(b.params.c);
  params["h"] = b.params.h;
  params["i"] = b.params.i;
  params["omega"] = element_to_json(b.params.omega);
  params["p"] = b.params.p;
  params["t"] = b.params.t;
  json j;
  j["format"] = kConstructionFormat;
  j["kind"] = "plane";
  j["params"] = params;
  j["subspace"] = subspace_to_json(b.U);
  j["trace"] = trace_to_json(b.trace);
  return j;
}

json monomial_build_to_json(const std::string& kind, const MonomialBuild& b) {
  json params;
  params["A0"] = element_to_json(b.params.A0);
  params["A1"] = element_to_json(b.params.A1);
  params["a"] = element_to_json(b.params.a);
  params["h"] = b.params.h;
  params["i"] = b.params.i;
  params["omega"] = element_to_json(b.params.omega);
  params["p"] = b.params.p;
  params["r"] = b.params.r;
  params["t"] = b.params.t;
  params["variant"] =
      b.params.variant == MonomialVariant::r_linear ? "r_linear" : "coprime";
  json j;
  j["format"] = kConstructionFormat;
  j["kind"] = kind;
  j["params"] = params;
  j["subspace"] = subspace_to_json(b.U);
  j["trace"] = trace_to_json(b.trace);
  return j;
}

json pseudoregulus_build_to_json(const QParams& q, int n, int t_pairs, int s,
                                 const Subspace& u) {
  json params;
  params["h"] = q.h;
  params["n"] = n;
  params["p"] = q.p;
  params["s"] = s;
  params["t_pairs"] = t_pairs;
  json j;
  j["format"] = kConstructionFormat;
  j["kind"] = "pseudoregulus";
  j["params"] = params;
  j["subspace"] = subspace_to_json(u);
  j["trace"] = trace_to_json(SearchTrace{});
  return j;
}

json w_example_build_to_json(const QParams& q, int n, int k,
                             const WExampleBuild& b) {
  json params;
  params["h"] = q.h;
  params["k"] = k;
  params["n"] = n;
  params["p"] = q.p;
  json aux;
  aux["a1"] = element_to_json(b.a1);
  aux["ak"] = element_to_json(b.ak);
  aux["g"] = lp_to_json(b.g);
  aux["omega"] = element_to_json(b.omega);
  aux["u_g"] = subspace_to_json(b.U_g);
  json j;
  j["aux"] = aux;
  j["format"] = kConstructionFormat;
  j["kind"] = "w-example";
  j["params"] = params;
  j["subspace"] = subspace_to_json(b.W);
  j["trace"] = trace_to_json(SearchTrace{});
  return j;
}

PlaneConstructionParams plane_params_from_json(const json& j) {
  expect_format(j, kConstructionFormat);
  if (jstr(j, "kind") != "plane")
    throw IoError("construction record is not of the plane kind");
  auto tw = tower_from_json(field(field(j, "subspace"), "tower"));
  const json& pj = field(j, "params");
  PlaneConstructionParams pp;
  pp.p = static_cast<std::uint32_t>(jint(pj, "p"));
  pp.h = static_cast<int>(jint(pj, "h"));
  pp.t = static_cast<int>(jint(pj, "t"));
  pp.i = static_cast<int>(jint(pj, "i"));
  if (pp.p != tw->p() || pp.h != tw->h())
    throw IoError("construction base field does not match the embedded tower");
  pp.a = element_from_json(field(pj, "a"), *tw);
  pp.b = element_from_json(field(pj, "b"), *tw);
  pp.c = element_from_json(field(pj, "c"), *tw);
  pp.omega = element_from_json(field(pj, "omega"), *tw);
  pp.A0 = element_from_json(field(pj, "A0"), *tw);
  pp.A1 = element_from_json(field(pj, "A1"), *tw);
  return pp;
}

MonomialParams monomial_params_from_json(const json& j) {
  expect_format(j, kConstructionFormat);
  std::string kind = jstr(j, "kind");
  if (kind != "monomial-ex1" && kind != "monomial-ex2")
    throw IoError("construction record is not of a monomial kind");
  auto tw = tower_from_json(field(field(j, "subspace"), "tower"));
  const json& pj = field(j, "params");
  MonomialParams mp;
  mp.p = static_cast<std::uint32_t>(jint(pj, "p"));
  mp.h = static_cast<int>(jint(pj, "h"));
  mp.t = static_cast<int>(jint(pj, "t"));
  mp.r = static_cast<int>(jint(pj, "r"));
  mp.i = static_cast<int>(jint(pj, "i"));
  if (mp.p != tw->p() || mp.h != tw->h())
    throw IoError("construction base field does not match the embedded tower");
  std::string variant = jstr(pj, "variant");
  if (variant == "r_linear")
    mp.variant = MonomialVariant::r_linear;
  else if (variant == "coprime")
    mp.variant = MonomialVariant::coprime;
  else
    throw IoError("unknown monomial variant \"" + variant + "\"");
  if ((kind == "monomial-ex1") != (mp.variant == MonomialVariant::r_linear))
    throw IoError("monomial kind and variant disagree");
  mp.a = element_from_json(field(pj, "a"), *tw);
  mp.omega = element_from_json(field(pj, "omega"), *tw);
  mp.A0 = element_from_json(field(pj, "A0"), *tw);
  mp.A1 = element_from_json(field(pj, "A1"), *tw);
  return mp;
}

Subspace subspace_from_document(const json& j) {
  if (j.is_object() && j.contains("format") && j["format"].is_string()) {
    std::string tag = j["format"].get<std::string>();
    if (tag == kSubspaceFormat) return subspace_from_json(j);
    if (tag == kConstructionFormat) return subspace_from_json(field(j, "subspace"));
  }
  throw IoError("document holds neither a subspace nor a construction record");
}

// ---- codes ------------------------------------------------------------

json code_to_json(const RankCode& c) {
  json j;
  if (c.d_min) j["d_min"] = *c.d_min;
  j["dim"] = c.dim;
  j["format"] = kCodeFormat;
  json gens = json::array();
  for (const FqMat& g : c.generators) {
    std::vector<int> entries;
    entries.reserve(g.a.size() * static_cast<std::size_t>(c.tw->h()));
    for (fp_t idx : g.a) push_entry_digits(entries, idx, c.tw->p(), c.tw->h());
    gens.push_back(entries);
  }
  j["generators"] = gens;
  j["h"] = c.tw->h();
  j["m"] = c.m;
  j["n"] = c.n;
  j["p"] = c.tw->p();
  j["provenance"] = to_string(c.provenance);
  j["tower"] = tower_to_json(*c.tw);
  j["verification_status"] = to_string(c.status);
  return j;
}

RankCode code_from_json(const json& j) {
  expect_format(j, kCodeFormat);
  auto tw = tower_from_json(field(j, "tower"));
  if (static_cast<std::uint32_t>(jint(j, "p")) != tw->p() ||
      static_cast<int>(jint(j, "h")) != tw->h())
    throw IoError("code base field does not match the embedded tower");
  int m = static_cast<int>(jint(j, "m"));
  int n = static_cast<int>(jint(j, "n"));
  if (m < 1 || n < 1) throw IoError("code shape must be positive");
  int h = tw->h();
  const json& gj = field(j, "generators");
  if (!gj.is_array()) throw IoError("code generators is not an array");
  std::vector<FqMat> gens;
  gens.reserve(gj.size());
  for (const json& entry : gj) {
    std::vector<fp_t> digits = digit_vector(entry, tw->p(), "generator entries");
    if (digits.size() != static_cast<std::size_t>(m) * n * h)
      throw IoError("generator entry list has the wrong length");
    FqMat g = FqMat::zero(tw, m, n);
    for (std::size_t e = 0; e < g.a.size(); ++e)
      g.a[e] = entry_from_digits(digits, e * static_cast<std::size_t>(h), tw->p(), h);
    gens.push_back(std::move(g));
  }
  RankCode c = make_rank_code(tw, m, n, gens,
                              provenance_from_string(jstr(j, "provenance")));
  if (c.dim != static_cast<int>(jint(j, "dim")))
    throw IoError("code generators do not span the declared dimension");
  c.status = verif_status_from_string(jstr(j, "verification_status"));
  if (j.contains("d_min")) {
    int d = static_cast<int>(jint(j, "d_min"));
    if (d < 1 || d > std::min(m, n))
      throw IoError("recorded minimum distance is out of range");
    c.d_min = d;
  } else if (c.status != VerifStatus::unverified) {
    throw IoError("verification status recorded without a minimum distance");
  }
  return c;
}

VerifStatus verif_status_from_string(const std::string& s) {
  if (s == "unverified") return VerifStatus::unverified;
  if (s == "sampled") return VerifStatus::sampled;
  if (s == "theorem") return VerifStatus::theorem;
  if (s == "exhaustive") return VerifStatus::exhaustive;
  throw IoError("unknown verification status \"" + s + "\"");
}

Provenance provenance_from_string(const std::string& s) {
  if (s == "from_subspace") return Provenance::from_subspace;
  if (s == "sheekey") return Provenance::sheekey;
  if (s == "gabidulin") return Provenance::gabidulin;
  if (s == "explicit_Fv") return Provenance::explicit_fv;
  if (s == "derived") return Provenance::derived;
  throw IoError("unknown provenance \"" + s + "\"");
}

// ---- reports ----------------------------------------------------------

json analysis_to_json(const LinearSetAnalysis& a, const Subspace& u) {
  json j;
  j["count"] = a.points;
  j["format"] = kReportFormat;
  j["histogram"] = a.points_by_weight;
  j["kind"] = "linear_set";
  j["max_weight"] = a.max_weight;
  j["scattered"] = a.scattered;
  if (!a.scattered) {
    std::vector<fp_t> c = vec_coords(u.ambient(), a.witness);
    j["witness"] = std::vector<int>(c.begin(), c.end());
  }
  return j;
}

// ---- plain-text matrix export ------------------------------------------

std::string export_matrices(const RankCode& c) {
  std::ostringstream out;
  out << kMatrixExportHeader << "\n";
  out << "m " << c.m << " n " << c.n << " p " << c.tw->p() << " h " << c.tw->h()
      << " dim " << c.dim << "\n";
  if (c.tw->h() > 1) {
    out << "gamma_minpoly";
    for (int coeff : gamma_minpoly(*c.tw)) out << " " << coeff;
    out << "\n";
  }
  for (int g = 0; g < c.dim; ++g) {
    out << "\n" << "generator " << g << "\n";
    const FqMat& mat = c.generators[static_cast<std::size_t>(g)];
    for (int i = 0; i < c.m; ++i) {
      for (int jcol = 0; jcol < c.n; ++jcol) {
        if (jcol) out << " ";
        out << static_cast<int>(mat.at(i, jcol));
      }
      out << "\n";
    }
  }
  return out.str();
}

RankCode import_matrices(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kMatrixExportHeader)
    throw IoError("matrix export header missing or unrecognized");
  if (!std::getline(in, line)) throw IoError("matrix export shape line missing");
  std::istringstream shape(line);
  std::string km, kn, kp, kh, kdim;
  long long m = 0, n = 0, p = 0, h = 0, dim = 0;
  shape >> km >> m >> kn >> n >> kp >> p >> kh >> h >> kdim >> dim;
  if (!shape || km != "m" || kn != "n" || kp != "p" || kh != "h" || kdim != "dim")
    throw IoError("matrix export shape line malformed");
  if (m < 1 || n < 1 || p < 2 || h < 1 || dim < 0)
    throw IoError("matrix export shape line out of range");
  auto tw = Tower::make(static_cast<std::uint32_t>(p), static_cast<int>(h),
                        {static_cast<int>(h)}, static_cast<int>(h));
  std::vector<std::string> tokens;
  for (std::string word; in >> word;) tokens.push_back(word);
  std::size_t pos = 0;
  auto next_int = [&](const char* what) {
    if (pos >= tokens.size())
      throw IoError(std::string("matrix export truncated before ") + what);
    std::size_t used = 0;
    long long v = 0;
    try {
      v = std::stoll(tokens[pos], &used);
    } catch (const std::exception&) {
      throw IoError(std::string("matrix export has a non-integer ") + what);
    }
    if (used != tokens[pos].size())
      throw IoError(std::string("matrix export has a non-integer ") + what);
    ++pos;
    return v;
  };
  if (h > 1) {
    if (pos >= tokens.size() || tokens[pos] != "gamma_minpoly")
      throw IoError("matrix export is missing the gamma_minpoly line");
    ++pos;
    std::vector<int> want;
    for (int l = 0; l <= h; ++l) want.push_back(static_cast<int>(next_int("gamma_minpoly coefficient")));
    if (want != gamma_minpoly(*tw))
      throw IoError("matrix export gamma semantics differ from the canonical field");
  }
  std::vector<FqMat> gens;
  gens.reserve(static_cast<std::size_t>(dim));
  for (long long g = 0; g < dim; ++g) {
    if (pos >= tokens.size() || tokens[pos] != "generator")
      throw IoError("matrix export is missing a generator block");
    ++pos;
    if (next_int("generator index") != g)
      throw IoError("matrix export generator blocks are out of order");
    FqMat mat = FqMat::zero(tw, static_cast<int>(m), static_cast<int>(n));
    for (int i = 0; i < m; ++i)
      for (int jcol = 0; jcol < n; ++jcol) {
        long long e = next_int("matrix entry");
        if (e < 0 || e >= static_cast<long long>(tw->q()))
          throw IoError("matrix entry outside [0, q)");
        mat.at(i, jcol) = static_cast<fp_t>(e);
      }
    gens.push_back(std::move(mat));
  }
  if (pos != tokens.size()) throw IoError("matrix export has trailing content");
  RankCode c = make_rank_code(tw, static_cast<int>(m), static_cast<int>(n), gens,
                              Provenance::derived);
  if (c.dim != static_cast<int>(dim))
    throw IoError("matrix export generators do not span the declared dimension");
  return c;
}

// ---- files -------------------------------------------------------------

std::string json_to_string(const json& j) { return j.dump(1, ' ') + "\n"; }

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read \"" + path + "\"");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("error while reading \"" + path + "\"");
  return buf.str();
}

void write_file_atomic(const std::string& path, const std::string& content) {
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write \"" + tmp + "\"");
    out << content;
    out.flush();
    if (!out) throw IoError("error while writing \"" + tmp + "\"");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IoError("cannot move output into place at \"" + path + "\"");
  }
}

json read_json_file(const std::string& path) {
  std::string text = read_file(path);
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw IoError("malformed JSON in \"" + path + "\": " + e.what());
  }
}

}  // namespace scatmrd
