#include "scatmrd/rankcodes.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <random>
#include <stdexcept>
#include <thread>

#include "scatmrd/fpmat.hpp"

namespace scatmrd {

namespace {

// Moves an element into a freshly built tower over the same field; the
// deterministic tower construction makes pack values transferable between
// equal fields.
Element transport(const std::shared_ptr<const Tower>& tw, const Element& x,
                  const char* who) {
  if (!x.owner() || !tw->same_field(*x.owner()))
    throw std::invalid_argument(std::string(who) + ": parameter element lives in a different field");
  return tw->from_pack(x.pack());
}

// ---------------------------------------------------------- canonical form --

// Flattened F_p coordinates of a codeword matrix: per entry (row-major), the
// h base-p digits of its SmallField index.
std::vector<fp_t> flatten(const FqMat& g) {
  const std::uint32_t p = g.tw->p();
  const int h = g.tw->h();
  std::vector<fp_t> row;
  row.reserve(static_cast<std::size_t>(g.m) * g.n * h);
  for (const fp_t e : g.a) {
    fp_t rem = e;
    for (int l = 0; l < h; ++l) {
      row.push_back(rem % p);
      rem /= p;
    }
  }
  return row;
}

FqMat unflatten(std::shared_ptr<const Tower> tw, int m, int n,
                const std::vector<fp_t>& row) {
  const std::uint32_t p = tw->p();
  const int h = tw->h();
  FqMat g = FqMat::zero(tw, m, n);
  for (std::size_t e = 0; e < g.a.size(); ++e) {
    fp_t idx = 0;
    for (int l = h - 1; l >= 0; --l) idx = idx * p + row[e * h + l];
    g.a[e] = idx;
  }
  return g;
}

void check_code_shape(const RankCode& c, const char* who) {
  if (!c.tw) throw std::invalid_argument(std::string(who) + ": code has no field");
  if (c.m < 1 || c.n < 1)
    throw std::invalid_argument(std::string(who) + ": empty codeword shape");
  if (c.dim != static_cast<int>(c.generators.size()))
    throw std::invalid_argument(std::string(who) + ": dimension does not match the generator count");
}

// -------------------------------------------------- F_q elimination helper --

// In-place reduced echelon form over F_q on SmallField-index rows; returns
// the pivot columns.  Zero rows are dropped.
std::vector<int> fq_rref_rows(const SmallField& sf,
                              std::vector<std::vector<fp_t>>& rows) {
  std::vector<int> pivots;
  const int width = rows.empty() ? 0 : static_cast<int>(rows[0].size());
  std::size_t r = 0;
  for (int col = 0; col < width && r < rows.size(); ++col) {
    std::size_t sel = r;
    while (sel < rows.size() && rows[sel][static_cast<std::size_t>(col)] == 0) ++sel;
    if (sel == rows.size()) continue;
    std::swap(rows[r], rows[sel]);
    const fp_t lead = rows[r][static_cast<std::size_t>(col)];
    const fp_t inv = sf.inv[lead];
    for (auto& e : rows[r]) e = sf.m(e, inv);
    for (std::size_t j = 0; j < rows.size(); ++j) {
      if (j == r) continue;
      const fp_t cv = rows[j][static_cast<std::size_t>(col)];
      if (cv == 0) continue;
      const fp_t neg = sf.neg[cv];
      for (int cc = 0; cc < width; ++cc)
        rows[j][static_cast<std::size_t>(cc)] =
            sf.a(rows[j][static_cast<std::size_t>(cc)],
                 sf.m(neg, rows[r][static_cast<std::size_t>(cc)]));
    }
    pivots.push_back(col);
    ++r;
  }
  rows.resize(r);
  return pivots;
}

// ------------------------------------------------------- subspace plumbing --

// Concatenated F_q-coordinates of v across the ambient components (power
// basis of each component subfield).
std::vector<fp_t> ambient_q_coords(const Ambient& amb, const Vec& v) {
  std::vector<fp_t> out;
  out.reserve(static_cast<std::size_t>(amb.fq_dim()));
  for (int j = 0; j < amb.ell(); ++j) {
    auto part = amb.tw->fq_coords(v[static_cast<std::size_t>(j)], amb.comps[static_cast<std::size_t>(j)]);
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

// F_q-basis of the full ambient: per component, the power basis of its
// subfield, in component order.
std::vector<Vec> ambient_unit_basis(const Ambient& amb) {
  std::vector<Vec> out;
  for (int j = 0; j < amb.ell(); ++j) {
    const Element g = amb.tw->subfield_generator(amb.comps[static_cast<std::size_t>(j)]);
    Element b = amb.tw->one();
    for (int l = 0; l < amb.comps[static_cast<std::size_t>(j)]; ++l) {
      Vec v = zero_vec(amb);
      v[static_cast<std::size_t>(j)] = b;
      out.push_back(v);
      b = amb.tw->mul(b, g);
    }
  }
  return out;
}

// The canonical kernel functional of U: reduce the F_q-coordinates of the
// argument against U's F_q echelon rows and read off the non-pivot
// coordinates, assembled into F_{q^m} through its power basis.
GMap default_kernel_map(const Subspace& u, int m) {
  const Ambient amb = u.ambient();
  auto tw = amb.tw;
  auto rows = std::make_shared<std::vector<std::vector<fp_t>>>();
  for (const Vec& b : u.fq_basis()) rows->push_back(ambient_q_coords(amb, b));
  auto pivots = std::make_shared<std::vector<int>>(fq_rref_rows(tw->small_field(), *rows));
  if (static_cast<int>(rows->size()) != u.k())
    throw std::logic_error("code_from_subspace: subspace basis was not independent over F_q");
  auto nonpivots = std::make_shared<std::vector<int>>();
  {
    std::size_t pi = 0;
    for (int col = 0; col < amb.fq_dim(); ++col) {
      if (pi < pivots->size() && (*pivots)[pi] == col) {
        ++pi;
        continue;
      }
      nonpivots->push_back(col);
    }
  }
  if (static_cast<int>(nonpivots->size()) != m)
    throw std::logic_error("code_from_subspace: complement dimension mismatch");
  return [amb, tw, rows, pivots, nonpivots, m](const Vec& v) {
    const SmallField& sf = tw->small_field();
    std::vector<fp_t> c = ambient_q_coords(amb, v);
    for (std::size_t i = 0; i < rows->size(); ++i) {
      const fp_t cv = c[static_cast<std::size_t>((*pivots)[i])];
      if (cv == 0) continue;
      const fp_t neg = sf.neg[cv];
      for (std::size_t cc = 0; cc < c.size(); ++cc)
        c[cc] = sf.a(c[cc], sf.m(neg, (*rows)[i][cc]));
    }
    std::vector<fp_t> out(static_cast<std::size_t>(m));
    for (int j = 0; j < m; ++j)
      out[static_cast<std::size_t>(j)] = c[static_cast<std::size_t>((*nonpivots)[static_cast<std::size_t>(j)])];
    return tw->from_fq_coords(out, m);
  };
}

// Checks that g vanishes on U and has full rank m on the ambient, i.e. that
// its kernel is exactly U.
void validate_kernel(const Subspace& u, const GMap& g, int m, const char* who) {
  const Ambient& amb = u.ambient();
  auto tw = amb.tw;
  for (const Vec& b : u.fq_basis())
    if (!g(b).is_zero())
      throw std::invalid_argument(std::string(who) + ": the kernel map does not vanish on the subspace");
  const std::vector<Vec> basis = ambient_unit_basis(amb);
  FqMat gm = FqMat::zero(tw, m, static_cast<int>(basis.size()));
  for (std::size_t j = 0; j < basis.size(); ++j) {
    const auto col = tw->fq_coords(g(basis[j]), m);
    for (int i = 0; i < m; ++i) gm.at(i, static_cast<int>(j)) = col[static_cast<std::size_t>(i)];
  }
  if (fq_rank(gm) != m)
    throw std::invalid_argument(std::string(who) + ": the kernel map has rank below rn/2, its kernel is larger than the subspace");
}

// Matrix of g o tau_v in the fixed bases: column j holds the F_q-coordinates
// of g(lambda_j v), lambda_j the power basis of F_{q^n}.
FqMat codeword_matrix(const Ambient& amb, const GMap& g, int m,
                      const std::vector<Element>& lambda, const Vec& v) {
  auto tw = amb.tw;
  FqMat mat = FqMat::zero(tw, m, static_cast<int>(lambda.size()));
  for (std::size_t j = 0; j < lambda.size(); ++j) {
    const auto col = tw->fq_coords(g(scal_mul(amb, lambda[j], v)), m);
    for (int i = 0; i < m; ++i) mat.at(i, static_cast<int>(j)) = col[static_cast<std::size_t>(i)];
  }
  return mat;
}

std::vector<Element> power_basis(const std::shared_ptr<const Tower>& tw, int d) {
  std::vector<Element> out;
  out.reserve(static_cast<std::size_t>(d));
  const Element g = tw->subfield_generator(d);
  Element b = tw->one();
  for (int l = 0; l < d; ++l) {
    out.push_back(b);
    b = tw->mul(b, g);
  }
  return out;
}

// ------------------------------------------------------------ distance scan --

int read_workers() {
  const char* env = std::getenv("SCATMRD_WORKERS");
  if (!env) return 1;
  const long v = std::strtol(env, nullptr, 10);
  if (v < 1) return 1;
  if (v > 64) return 64;
  return static_cast<int>(v);
}

std::vector<fp_t> index_digits(std::uint64_t idx, int dim, std::uint32_t q) {
  std::vector<fp_t> dig(static_cast<std::size_t>(dim), 0);
  for (int j = 0; j < dim && idx != 0; ++j) {
    dig[static_cast<std::size_t>(j)] = static_cast<fp_t>(idx % q);
    idx /= q;
  }
  return dig;
}

FqMat combine(const RankCode& c, const std::vector<fp_t>& dig) {
  FqMat sum = FqMat::zero(c.tw, c.m, c.n);
  for (std::size_t j = 0; j < dig.size(); ++j)
    if (dig[j] != 0) fq_add_into(sum, fq_scale(dig[j], c.generators[j]));
  return sum;
}

struct RangeResult {
  int d = 0;
  std::uint64_t first = 0;
  bool found = false;
};

// Scans the codeword indices [lo, hi), maintaining the running sum through
// the SmallField stepping deltas; returns the minimum rank and the least
// index attaining it.
RangeResult scan_range(const RankCode& c,
                       const std::vector<std::vector<FqMat>>& stepmat,
                       std::uint64_t lo, std::uint64_t hi) {
  const std::uint32_t q = c.tw->q();
  std::vector<fp_t> dig = index_digits(lo, c.dim, q);
  FqMat sum = combine(c, dig);
  RangeResult res;
  for (std::uint64_t idx = lo; idx < hi; ++idx) {
    const int rank = fq_rank(sum);
    if (!res.found || rank < res.d) {
      res.d = rank;
      res.first = idx;
      res.found = true;
    }
    if (idx + 1 == hi) break;
    for (std::size_t j = 0;; ++j) {
      const fp_t cur = dig[j];
      fq_add_into(sum, stepmat[j][cur]);
      dig[j] = static_cast<fp_t>((cur + 1) % q);
      if (dig[j] != 0) break;
    }
  }
  return res;
}

}  // namespace

// ----------------------------------------------------------------- strings --

std::string to_string(VerifStatus s) {
  switch (s) {
    case VerifStatus::unverified: return "unverified";
    case VerifStatus::sampled: return "sampled";
    case VerifStatus::theorem: return "theorem";
    case VerifStatus::exhaustive: return "exhaustive";
  }
  throw std::logic_error("unknown verification status");
}

std::string to_string(Provenance s) {
  switch (s) {
    case Provenance::from_subspace: return "from_subspace";
    case Provenance::sheekey: return "sheekey";
    case Provenance::gabidulin: return "gabidulin";
    case Provenance::explicit_fv: return "explicit_Fv";
    case Provenance::derived: return "derived";
  }
  throw std::logic_error("unknown provenance");
}

// ---------------------------------------------------------- make_rank_code --

RankCode make_rank_code(std::shared_ptr<const Tower> tw, int m, int n,
                        const std::vector<FqMat>& spanning, Provenance prov) {
  if (!tw) throw std::invalid_argument("make_rank_code: null field");
  if (m < 1 || n < 1) throw std::invalid_argument("make_rank_code: empty shape");
  std::vector<std::vector<fp_t>> rows;
  rows.reserve(spanning.size());
  for (const FqMat& g : spanning) {
    if (!g.tw || !g.tw->same_field(*tw) || g.m != m || g.n != n)
      throw std::invalid_argument("make_rank_code: generator shape or field mismatch");
    rows.push_back(flatten(g));
  }
  const fp_t gamma = tw->sf_index(tw->subfield_generator(1));
  const SmallField& sf = tw->small_field();
  const std::uint32_t p = tw->p();
  const int h = tw->h();
  auto scale_gamma = [&sf, gamma, p, h](const std::vector<fp_t>& row) {
    std::vector<fp_t> out(row.size());
    for (std::size_t e = 0; e * h < row.size(); ++e) {
      fp_t idx = 0;
      for (int l = h - 1; l >= 0; --l) idx = idx * p + row[e * static_cast<std::size_t>(h) + static_cast<std::size_t>(l)];
      fp_t scaled = sf.m(idx, gamma);
      for (int l = 0; l < h; ++l) {
        out[e * static_cast<std::size_t>(h) + static_cast<std::size_t>(l)] = scaled % p;
        scaled /= p;
      }
    }
    return out;
  };
  FqSpan span = fq_row_span(p, h, m * n * h, rows, scale_gamma, /*close=*/true);
  RankCode c;
  c.tw = std::move(tw);
  c.m = m;
  c.n = n;
  for (const auto& r : span.fq_basis) c.generators.push_back(unflatten(c.tw, m, n, r));
  c.dim = span.k;
  c.provenance = prov;
  return c;
}

// ------------------------------------------------------------- code params --

CodeParams code_params(const RankCode& c) {
  check_code_shape(c, "code_params");
  if (!c.d_min) throw std::invalid_argument("code_params: minimum distance not recorded");
  CodeParams cp;
  cp.m = c.m;
  cp.n = c.n;
  cp.p = c.tw->p();
  cp.h = c.tw->h();
  cp.d = *c.d_min;
  cp.dim = c.dim;
  return cp;
}

bool singleton_holds(const CodeParams& cp) {
  const int mx = std::max(cp.m, cp.n);
  const int mn = std::min(cp.m, cp.n);
  return cp.dim <= mx * (mn - cp.d + 1);
}

// ------------------------------------------------------- code_from_subspace --

RankCode code_from_subspace(const Subspace& u, const std::optional<GMap>& g_opt) {
  const Ambient amb = u.ambient();
  auto tw = amb.tw;
  const int n = amb.n;
  const int rn = amb.fq_dim();
  if (rn % 2 != 0)
    throw std::invalid_argument("code_from_subspace: the ambient F_q-dimension rn must be even");
  const int m = rn / 2;
  if (u.k() != m)
    throw std::invalid_argument("code_from_subspace: the subspace must have F_q-dimension rn/2");
  if (tw->M() % (m * tw->h()) != 0)
    throw std::invalid_argument("code_from_subspace: the field tower lacks the degree-rn/2 codomain subfield");

  const LinearSetAnalysis an = analyze_linear_set(u);
  if (an.max_weight >= n)
    throw std::invalid_argument("code_from_subspace: a point of weight n makes the codeword map non-injective");

  GMap g = g_opt ? *g_opt : default_kernel_map(u, m);
  validate_kernel(u, g, m, "code_from_subspace");

  const std::vector<Element> lambda = power_basis(tw, n);
  std::vector<FqMat> gens;
  for (const Vec& v : ambient_unit_basis(amb))
    gens.push_back(codeword_matrix(amb, g, m, lambda, v));
  RankCode c = make_rank_code(tw, m, n, gens, Provenance::from_subspace);
  if (c.dim != rn)
    throw std::logic_error("code_from_subspace: the codeword map collapsed; dimension below rn");
  c.d_min = n - an.max_weight;
  c.status = VerifStatus::theorem;
  if (!singleton_holds(code_params(c)))
    throw std::logic_error("code_from_subspace: Singleton bound violated");
  return c;
}

// --------------------------------------------------------- recover_omega_f --

OmegaF recover_omega_f(const Subspace& u) {
  const Ambient amb = u.ambient();
  auto tw = amb.tw;
  if (amb.ell() != 1)
    throw std::invalid_argument("recover_omega_f: the subspace must live in a one-component ambient");
  const int D = amb.comps[0];
  if (D % 2 != 0)
    throw std::invalid_argument("recover_omega_f: the ambient degree must be even");
  const int half = D / 2;
  if (u.k() != half)
    throw std::invalid_argument("recover_omega_f: the subspace must have F_q-dimension half the ambient degree");

  const std::vector<Element> hb = power_basis(tw, half);
  std::optional<Element> omega;
  for (const Element& a : tw->subfield_elements(D)) {
    if (a.is_zero() || tw->in_subfield(a, half)) continue;
    FpMat probe = u.rows();
    for (const Element& b : hb) probe.append_row(vec_coords(amb, Vec{tw->mul(a, b)}));
    if (fp_rank(probe) == amb.fp_dim()) {
      omega = a;
      break;
    }
  }
  if (!omega)
    throw std::logic_error("recover_omega_f: every scalar line through the subfield meets the subspace");

  // Split u = x + omega y along the basis {1, omega} through the conjugate
  // over F_{q^{D/2}}: y = (u - u^sigma) / (omega - omega^sigma).
  const Element wden = tw->sub(*omega, tw->frobenius(*omega, half));
  std::vector<Vec> xbasis;
  std::vector<Element> ys;
  for (const Vec& bv : u.fq_basis()) {
    const Element e = bv[0];
    const Element y = tw->mul(tw->sub(e, tw->frobenius(e, half)), tw->inverse(wden));
    const Element x = tw->sub(e, tw->mul(*omega, y));
    xbasis.push_back(Vec{x});
    ys.push_back(y);
  }
  const Ambient ah = Ambient::make(tw, {half}, 1);
  LinearizedPoly f = lp_from_map(tw, half, [&](const Element& z) {
    const auto cs = fq_coords_in_basis(ah, xbasis, Vec{z});
    Element acc = tw->zero();
    for (std::size_t j = 0; j < cs.size(); ++j)
      acc = tw->add(acc, tw->mul(tw->sf_element(cs[j]), ys[j]));
    return acc;
  });

  const Subspace rebuilt = Subspace::from_image(amb, half, [&](const Element& x) {
    return Vec{tw->add(x, tw->mul(*omega, f.eval(x)))};
  });
  if (!rebuilt.equals(u))
    throw std::logic_error("recover_omega_f: reconstruction does not reproduce the subspace");
  return OmegaF{*omega, std::move(f)};
}

// ------------------------------------------------------------ sheekey_code --

RankCode sheekey_code(const LinearizedPoly& f, int n) {
  auto tw = f.tw;
  if (!tw) throw std::invalid_argument("sheekey_code: polynomial has no field");
  const int D = f.d;
  if (n < 2 || D % n != 0)
    throw std::invalid_argument("sheekey_code: the restriction degree must be a proper divisor profile of the domain (n >= 2, n | D)");

  const Ambient av = Ambient::make(tw, {D, D}, n);
  const Subspace uf = Subspace::from_image(av, D, [&](const Element& x) {
    return Vec{x, f.eval(x)};
  });
  const bool scattered = (uf.k() == D) && is_scattered(uf);

  const std::vector<Element> bD = power_basis(tw, D);
  const std::vector<Element> lam = power_basis(tw, n);
  std::vector<FqMat> gens;
  for (const Element& b : bD) {
    FqMat ga = FqMat::zero(tw, D, n);
    FqMat gb = FqMat::zero(tw, D, n);
    for (std::size_t j = 0; j < lam.size(); ++j) {
      const auto ca = tw->fq_coords(tw->mul(b, lam[j]), D);
      const auto cb = tw->fq_coords(tw->mul(b, f.eval(lam[j])), D);
      for (int i = 0; i < D; ++i) {
        ga.at(i, static_cast<int>(j)) = ca[static_cast<std::size_t>(i)];
        gb.at(i, static_cast<int>(j)) = cb[static_cast<std::size_t>(i)];
      }
    }
    gens.push_back(std::move(ga));
    gens.push_back(std::move(gb));
  }
  RankCode c = make_rank_code(tw, D, n, gens, Provenance::sheekey);
  if (scattered) {
    if (c.dim != 2 * D)
      throw std::logic_error("sheekey_code: dimension below 2D despite a scattered graph");
    c.d_min = n - 1;
    c.status = VerifStatus::theorem;
    if (!singleton_holds(code_params(c)))
      throw std::logic_error("sheekey_code: Singleton bound violated");
  }
  return c;
}

// -------------------------------------------------------- restriction_code --

RankCode restriction_code(const RankCode& c, int n_new) {
  check_code_shape(c, "restriction_code");
  if (n_new < 1 || c.n % n_new != 0)
    throw std::invalid_argument("restriction_code: the target degree must divide the domain degree");
  if (c.tw->M() % (n_new * c.tw->h()) != 0)
    throw std::invalid_argument("restriction_code: the field tower lacks the target subfield");
  FqMat t = FqMat::zero(c.tw, c.n, n_new);
  const std::vector<Element> nb = power_basis(c.tw, n_new);
  for (std::size_t j = 0; j < nb.size(); ++j) {
    const auto col = c.tw->fq_coords(nb[j], c.n);
    for (int i = 0; i < c.n; ++i) t.at(i, static_cast<int>(j)) = col[static_cast<std::size_t>(i)];
  }
  std::vector<FqMat> gens;
  gens.reserve(c.generators.size());
  for (const FqMat& g : c.generators) gens.push_back(fq_mul(g, t));
  return make_rank_code(c.tw, c.m, n_new, gens, Provenance::derived);
}

// ----------------------------------------------------------- gabidulin_code --

RankCode gabidulin_code(const QParams& q, int n, int k, int s) {
  if (n < 2 || k < 1 || k >= n)
    throw std::invalid_argument("gabidulin_code: need 1 <= k < n");
  if (s < 1 || std::gcd(n, s) != 1)
    throw std::invalid_argument("gabidulin_code: need s >= 1 with gcd(n, s) = 1");
  auto tw = Tower::make_q(q.p, q.h, {1, n});
  std::vector<FqMat> gens;
  for (int j = 0; j < k; ++j)
    for (const Element& b : power_basis(tw, n))
      gens.push_back(lp_to_matrix(LinearizedPoly::monomial(tw, n, (s * j) % n, b)));
  RankCode c = make_rank_code(tw, n, n, gens, Provenance::gabidulin);
  if (c.dim != n * k)
    throw std::logic_error("gabidulin_code: dimension below nk");
  c.d_min = n - k + 1;
  c.status = VerifStatus::theorem;
  return c;
}

// ---------------------------------------------------------- explicit_fv_code --

namespace {

// Shared assembly for the odd-r explicit families: f(x) = a x^{q^i} (+ b
// x^{q^{2t+i}} when b is nonzero), codewords indexed by v = omega v_0 + v_1.
RankCode build_fv_code(const std::shared_ptr<const Tower>& tw, int t, int r,
                       int i, const Element& a, const Element& b,
                       const Element& A0, const Element& A1) {
  const int rt = r * t;
  const std::vector<Element> vb = power_basis(tw, rt);
  const std::vector<Element> tb = power_basis(tw, t);

  auto fv_matrix = [&](const Element& v0, const Element& v1) {
    // F_v(x, y) = x^{q^i} c_x + y^{q^i} c_y - x A_1 v_0 - y v_1 with
    // c_x = a (A_0^{q^i} v_0^{q^i} + v_1^{q^i}) + b (A_0^{q^i} v_0^{q^{2t+i}} + v_1^{q^{2t+i}})
    // c_y = a v_0^{q^i} + b v_0^{q^{2t+i}}.
    const Element a0i = tw->frobenius(A0, i);
    const Element v0i = tw->frobenius(v0, i);
    const Element v1i = tw->frobenius(v1, i);
    const Element v0s = tw->frobenius(v0, 2 * t + i);
    const Element v1s = tw->frobenius(v1, 2 * t + i);
    const Element cx = tw->add(
        tw->mul(a, tw->add(tw->mul(a0i, v0i), v1i)),
        tw->mul(b, tw->add(tw->mul(a0i, v0s), v1s)));
    const Element cy = tw->add(tw->mul(a, v0i), tw->mul(b, v0s));
    const Element dx = tw->mul(A1, v0);
    FqMat mat = FqMat::zero(tw, 2 * t, rt);
    for (int row = 0; row < 2 * t; ++row) {
      const bool first = row < t;
      const Element& e = tb[static_cast<std::size_t>(first ? row : row - t)];
      const Element ei = tw->frobenius(e, i);
      const Element img = first
          ? tw->sub(tw->mul(ei, cx), tw->mul(e, dx))
          : tw->sub(tw->mul(ei, cy), tw->mul(e, v1));
      const auto coords = tw->fq_coords(img, rt);
      for (int cc = 0; cc < rt; ++cc) mat.at(row, cc) = coords[static_cast<std::size_t>(cc)];
    }
    return mat;
  };

  std::vector<FqMat> gens;
  const Element z = tw->zero();
  for (const Element& e : vb) gens.push_back(fv_matrix(e, z));
  for (const Element& e : vb) gens.push_back(fv_matrix(z, e));
  RankCode c = make_rank_code(tw, 2 * t, rt, gens, Provenance::explicit_fv);
  if (c.dim != 2 * rt)
    throw std::logic_error("explicit_fv_code: dimension below 2rt");
  c.d_min = 2 * t - 1;
  c.status = VerifStatus::theorem;
  if (!singleton_holds(code_params(c)))
    throw std::logic_error("explicit_fv_code: Singleton bound violated");
  return c;
}

void check_omega_split(const std::shared_ptr<const Tower>& tw, int t,
                       const Element& omega, const Element& A0,
                       const Element& A1, const char* who) {
  if (tw->in_subfield(omega, t))
    throw std::invalid_argument(std::string(who) + ": omega lies in F_{q^t}");
  if (!tw->in_subfield(A0, t) || !tw->in_subfield(A1, t))
    throw std::invalid_argument(std::string(who) + ": the coefficients of omega's quadratic relation must lie in F_{q^t}");
  if (tw->mul(omega, omega) != tw->add(tw->mul(omega, A0), A1))
    throw std::invalid_argument(std::string(who) + ": omega^2 = omega A0 + A1 fails");
}

}  // namespace

RankCode explicit_fv_code(const PlaneConstructionParams& pp) {
  const int t = pp.t;
  const int i = pp.i;
  if (t < 2) throw std::invalid_argument("explicit_fv_code: t must be at least 2");
  if (i < 1 || i > 3 * t - 1 || std::gcd(i, 2 * t) != 1)
    throw std::invalid_argument("explicit_fv_code: the exponent must satisfy 1 <= i <= 3t-1 and gcd(i, 2t) = 1");
  auto tw = Tower::make_q(pp.p, pp.h, {1, t, 2 * t, 3 * t, 6 * t});
  const Element a = transport(tw, pp.a, "explicit_fv_code");
  const Element b = transport(tw, pp.b, "explicit_fv_code");
  const Element omega = transport(tw, pp.omega, "explicit_fv_code");
  const Element a0 = transport(tw, pp.A0, "explicit_fv_code");
  const Element a1 = transport(tw, pp.A1, "explicit_fv_code");
  if (a.is_zero() || b.is_zero())
    throw std::invalid_argument("explicit_fv_code: both binomial coefficients must be nonzero");
  if (!tw->in_subfield(a, 3 * t) || !tw->in_subfield(b, 3 * t))
    throw std::invalid_argument("explicit_fv_code: the binomial coefficients must lie in F_{q^{3t}}");
  check_omega_split(tw, t, omega, a0, a1, "explicit_fv_code");
  // The defining property of the searched pair: the direction image avoids
  // F_{q^t}.
  for (const Element& x : tw->subfield_elements(3 * t)) {
    if (x.is_zero()) continue;
    const Element fx = tw->add(tw->mul(a, tw->frobenius(x, i)),
                               tw->mul(b, tw->frobenius(x, 2 * t + i)));
    if (tw->in_subfield(tw->mul(fx, tw->inverse(x)), t))
      throw std::invalid_argument("explicit_fv_code: the binomial's direction image meets F_{q^t}; the graph is not scattered");
  }
  return build_fv_code(tw, t, 3, i, a, b, a0, a1);
}

RankCode explicit_fv_code(const MonomialParams& mp) {
  const int t = mp.t;
  const int r = mp.r;
  const int i = mp.i;
  if (t < 2) throw std::invalid_argument("explicit_fv_code: t must be at least 2");
  if (r < 3 || r % 2 == 0)
    throw std::invalid_argument("explicit_fv_code: r must be odd and at least 3");
  if (i < 1 || i > r * t - 1)
    throw std::invalid_argument("explicit_fv_code: the exponent is out of range");
  auto tw = Tower::make_q(mp.p, mp.h, {1, r, t, 2 * t, r * t, 2 * r * t});
  const Element a = transport(tw, mp.a, "explicit_fv_code");
  const Element omega = transport(tw, mp.omega, "explicit_fv_code");
  const Element a0 = transport(tw, mp.A0, "explicit_fv_code");
  const Element a1 = transport(tw, mp.A1, "explicit_fv_code");
  if (a.is_zero() || !tw->in_subfield(a, r * t))
    throw std::invalid_argument("explicit_fv_code: the coefficient must be a nonzero element of F_{q^{rt}}");
  check_omega_split(tw, t, omega, a0, a1, "explicit_fv_code");
  const std::uint64_t qv = tw->q();
  if (mp.variant == MonomialVariant::r_linear) {
    if (std::gcd(t, r) != 1)
      throw std::invalid_argument("explicit_fv_code: this variant needs gcd(t, r) = 1");
    if (std::gcd(i, 2 * t) != 1 || std::gcd(i, r * t) != r)
      throw std::invalid_argument("explicit_fv_code: this variant needs gcd(i, 2t) = 1 and gcd(i, rt) = r");
    if (tw->in_subfield(tw->relative_norm(a, r * t, r), 1))
      throw std::invalid_argument("explicit_fv_code: the coefficient's norm down to F_{q^r} must avoid F_q");
  } else {
    if ((qv - 1) % static_cast<std::uint64_t>(r) != 0)
      throw std::invalid_argument("explicit_fv_code: this variant needs q = 1 mod r");
    if (std::gcd(i, 2 * t) != 1 || std::gcd(i, r * t) != 1)
      throw std::invalid_argument("explicit_fv_code: this variant needs gcd(i, 2t) = gcd(i, rt) = 1");
    const Element norm = tw->relative_norm(a, r * t, 1);
    if (tw->pow(norm, (qv - 1) / static_cast<std::uint64_t>(r)) == tw->one())
      throw std::invalid_argument("explicit_fv_code: the coefficient's norm must not be an r-th power in F_q");
  }
  return build_fv_code(tw, t, r, i, a, tw->zero(), a0, a1);
}

// -------------------------------------------------------- distance scanning --

ScanMode ScanMode::exhaustive_mode(std::uint64_t budget) {
  ScanMode m;
  m.exhaustive = true;
  m.budget = budget;
  return m;
}

ScanMode ScanMode::sample_mode(std::uint64_t samples, std::uint64_t seed) {
  ScanMode m;
  m.exhaustive = false;
  m.samples = samples;
  m.seed = seed;
  return m;
}

DistanceReport min_rank_distance(const RankCode& c, const ScanMode& mode) {
  check_code_shape(c, "min_rank_distance");
  if (c.dim < 1) throw std::invalid_argument("min_rank_distance: zero code");
  const std::uint32_t q = c.tw->q();

  DistanceReport rep;
  if (mode.exhaustive) {
    std::uint64_t total = 1;
    bool over = false;
    for (int j = 0; j < c.dim; ++j) {
      if (total > mode.budget / q) {
        over = true;
        break;
      }
      total *= q;
    }
    if (over || total > mode.budget)
      throw std::runtime_error("min_rank_distance: codeword count exceeds the exhaustive budget");

    std::vector<std::vector<FqMat>> stepmat(static_cast<std::size_t>(c.dim));
    const SmallField& sf = c.tw->small_field();
    for (int j = 0; j < c.dim; ++j)
      for (std::uint32_t cur = 0; cur < q; ++cur)
        stepmat[static_cast<std::size_t>(j)].push_back(
            fq_scale(sf.step_delta[cur], c.generators[static_cast<std::size_t>(j)]));

    const std::uint64_t count = total - 1;  // indices 1 .. total-1
    int workers = read_workers();
    if (static_cast<std::uint64_t>(workers) > count) workers = static_cast<int>(count);
    std::vector<RangeResult> parts(static_cast<std::size_t>(workers));
    if (workers == 1) {
      parts[0] = scan_range(c, stepmat, 1, total);
    } else {
      std::vector<std::thread> pool;
      const std::uint64_t chunk = count / static_cast<std::uint64_t>(workers);
      for (int w = 0; w < workers; ++w) {
        const std::uint64_t lo = 1 + chunk * static_cast<std::uint64_t>(w);
        const std::uint64_t hi = (w + 1 == workers) ? total : lo + chunk;
        pool.emplace_back([&, lo, hi, w] { parts[static_cast<std::size_t>(w)] = scan_range(c, stepmat, lo, hi); });
      }
      for (auto& th : pool) th.join();
    }
    RangeResult best;
    for (const RangeResult& pr : parts) {
      if (!pr.found) continue;
      if (!best.found || pr.d < best.d || (pr.d == best.d && pr.first < best.first))
        best = pr;
    }
    rep.d = best.d;
    rep.exact = true;
    rep.scanned = count;
    rep.witness_index = best.first;
    rep.witness = combine(c, index_digits(best.first, c.dim, q));
  } else {
    if (mode.samples < 1)
      throw std::invalid_argument("min_rank_distance: sample mode needs at least one draw");
    std::mt19937_64 rng(mode.seed);
    bool found = false;
    for (std::uint64_t s = 1; s <= mode.samples; ++s) {
      std::vector<fp_t> dig(static_cast<std::size_t>(c.dim));
      do {
        for (auto& dgt : dig) dgt = static_cast<fp_t>(rng() % q);
      } while (std::all_of(dig.begin(), dig.end(), [](fp_t d) { return d == 0; }));
      FqMat mat = combine(c, dig);
      const int rank = fq_rank(mat);
      if (!found || rank < rep.d) {
        rep.d = rank;
        rep.witness_index = s;
        rep.witness = std::move(mat);
        found = true;
      }
    }
    rep.exact = false;
    rep.scanned = mode.samples;
  }
  return rep;
}

void cache_distance(RankCode& c, const DistanceReport& r) {
  if (r.exact) {
    if (c.d_min && c.status != VerifStatus::unverified && *c.d_min != r.d)
      throw std::logic_error("cache_distance: exhaustive distance contradicts the recorded value");
    c.d_min = r.d;
    c.status = VerifStatus::exhaustive;
  } else {
    if (c.d_min && r.d < *c.d_min)
      throw std::logic_error("cache_distance: a sampled codeword falls below the recorded minimum distance");
    // A sampled bound never upgrades the cache.
  }
}

bool is_mrd(const RankCode& c) {
  check_code_shape(c, "is_mrd");
  if (!c.d_min || (c.status != VerifStatus::theorem && c.status != VerifStatus::exhaustive))
    throw std::invalid_argument("is_mrd: minimum distance not established exactly");
  const int mx = std::max(c.m, c.n);
  const int mn = std::min(c.m, c.n);
  return c.dim == mx * (mn - *c.d_min + 1);
}

bool codes_equal(const RankCode& c1, const RankCode& c2) {
  check_code_shape(c1, "codes_equal");
  check_code_shape(c2, "codes_equal");
  if (c1.m != c2.m || c1.n != c2.n || c1.tw->p() != c2.tw->p() || c1.tw->h() != c2.tw->h())
    throw std::invalid_argument("codes_equal: shape or field mismatch");
  const RankCode a = make_rank_code(c1.tw, c1.m, c1.n, c1.generators, c1.provenance);
  const RankCode b = make_rank_code(c2.tw, c2.m, c2.n, c2.generators, c2.provenance);
  if (a.dim != b.dim) return false;
  for (int j = 0; j < a.dim; ++j)
    if (a.generators[static_cast<std::size_t>(j)].a != b.generators[static_cast<std::size_t>(j)].a)
      return false;
  return true;
}

// ---------------------------------------------- equivalence witness for G --

FqMat equivalence_witness_for_G_change(const Subspace& u, const GMap& g,
                                       const GMap& gbar) {
  const Ambient amb = u.ambient();
  auto tw = amb.tw;
  const int rn = amb.fq_dim();
  if (rn % 2 != 0 || u.k() != rn / 2)
    throw std::invalid_argument("equivalence_witness_for_G_change: the subspace must have F_q-dimension rn/2");
  const int m = rn / 2;
  validate_kernel(u, g, m, "equivalence_witness_for_G_change");
  validate_kernel(u, gbar, m, "equivalence_witness_for_G_change");

  const std::vector<Element> lambda = power_basis(tw, amb.n);
  const std::vector<Vec> vbasis = ambient_unit_basis(amb);
  std::vector<FqMat> cmats, dmats;
  for (const Vec& v : vbasis) {
    cmats.push_back(codeword_matrix(amb, g, m, lambda, v));
    dmats.push_back(codeword_matrix(amb, gbar, m, lambda, v));
  }

  // Greedily pick m independent columns from the G-codewords and solve
  // H = B A^{-1} on them.
  FqMat a = FqMat::zero(tw, m, m);
  FqMat b = FqMat::zero(tw, m, m);
  int picked = 0;
  for (std::size_t idx = 0; idx < cmats.size() && picked < m; ++idx) {
    for (int col = 0; col < cmats[idx].n && picked < m; ++col) {
      for (int row = 0; row < m; ++row) a.at(row, picked) = cmats[idx].at(row, col);
      FqMat probe = FqMat::zero(tw, m, picked + 1);
      for (int row = 0; row < m; ++row)
        for (int cc = 0; cc <= picked; ++cc) probe.at(row, cc) = a.at(row, cc);
      if (fq_rank(probe) == picked + 1) {
        for (int row = 0; row < m; ++row) b.at(row, picked) = dmats[idx].at(row, col);
        ++picked;
      }
    }
  }
  if (picked != m)
    throw std::logic_error("equivalence_witness_for_G_change: the codeword columns do not span the codomain");
  const FqMat h = fq_mul(b, fq_inverse(a));
  if (fq_rank(h) != m)
    throw std::logic_error("equivalence_witness_for_G_change: the solved intertwiner is singular");
  for (std::size_t idx = 0; idx < cmats.size(); ++idx)
    if (fq_mul(h, cmats[idx]) != dmats[idx])
      throw std::logic_error("equivalence_witness_for_G_change: the solved intertwiner fails on a generator");
  return h;
}

// ----------------------------------------------------------- transpose_code --

RankCode transpose_code(const RankCode& c) {
  check_code_shape(c, "transpose_code");
  std::vector<FqMat> gens;
  gens.reserve(c.generators.size());
  for (const FqMat& g : c.generators) gens.push_back(fq_transpose(g));
  RankCode t = make_rank_code(c.tw, c.n, c.m, gens, Provenance::derived);
  if (t.dim != c.dim)
    throw std::logic_error("transpose_code: transposition changed the dimension");
  t.d_min = c.d_min;
  t.status = c.status;
  return t;
}

}  // namespace scatmrd
