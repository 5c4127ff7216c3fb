#include "scatmrd/linsets.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace scatmrd {

// ---------------------------------------------------------------- Ambient --

Ambient Ambient::make(std::shared_ptr<const Tower> tw, std::vector<int> comps, int n) {
  if (!tw) throw std::invalid_argument("ambient needs a field");
  if (comps.empty()) throw std::invalid_argument("ambient needs components");
  if (n < 1) throw std::invalid_argument("scalar degree must be positive");
  for (int e : comps) {
    if (e < 1 || e % n != 0)
      throw std::invalid_argument("component degree must be a positive multiple of n");
    if ((e * tw->h()) > tw->M() || tw->M() % (e * tw->h()) != 0)
      throw std::invalid_argument("component field does not embed in the tower");
  }
  Ambient a;
  a.tw = std::move(tw);
  a.comps = std::move(comps);
  a.n = n;
  return a;
}

int Ambient::r() const {
  int s = 0;
  for (int e : comps) s += e;
  return s / n;
}

int Ambient::fq_dim() const {
  int s = 0;
  for (int e : comps) s += e;
  return s;
}

int Ambient::fp_dim() const { return tw->h() * fq_dim(); }

int Ambient::offset(int j) const {
  int s = 0;
  for (int i = 0; i < j; ++i) s += comps[static_cast<std::size_t>(i)];
  return s * tw->h();
}

bool Ambient::same(const Ambient& o) const {
  return tw->same_field(*o.tw) && comps == o.comps && n == o.n;
}

// ---------------------------------------------------------------- vectors --

Vec zero_vec(const Ambient& a) {
  return Vec(static_cast<std::size_t>(a.ell()), a.tw->zero());
}

bool vec_is_zero(const Vec& v) {
  return std::all_of(v.begin(), v.end(), [](const Element& x) { return x.is_zero(); });
}

static void check_width(const Ambient& a, const Vec& v) {
  if (static_cast<int>(v.size()) != a.ell())
    throw std::invalid_argument("vector has the wrong number of components");
}

Vec vec_add(const Ambient& a, const Vec& u, const Vec& v) {
  check_width(a, u);
  check_width(a, v);
  Vec out(u.size());
  for (std::size_t j = 0; j < u.size(); ++j) out[j] = u[j] + v[j];
  return out;
}

Vec vec_sub(const Ambient& a, const Vec& u, const Vec& v) {
  check_width(a, u);
  check_width(a, v);
  Vec out(u.size());
  for (std::size_t j = 0; j < u.size(); ++j) out[j] = u[j] - v[j];
  return out;
}

Vec scal_mul(const Ambient& a, const Element& lam, const Vec& v) {
  check_width(a, v);
  if (!a.tw->in_subfield(lam, a.n))
    throw std::invalid_argument("scalar lies outside F_{q^n}");
  Vec out(v.size());
  for (std::size_t j = 0; j < v.size(); ++j) out[j] = lam * v[j];
  return out;
}

std::vector<fp_t> vec_coords(const Ambient& a, const Vec& v) {
  check_width(a, v);
  std::vector<fp_t> out;
  out.reserve(static_cast<std::size_t>(a.fp_dim()));
  for (int j = 0; j < a.ell(); ++j) {
    auto part = a.tw->subfield_coords_p(v[static_cast<std::size_t>(j)],
                                        a.comps[static_cast<std::size_t>(j)] * a.tw->h());
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

Vec vec_from_coords(const Ambient& a, const std::vector<fp_t>& c) {
  if (static_cast<int>(c.size()) != a.fp_dim())
    throw std::invalid_argument("coordinate length mismatch");
  Vec out;
  out.reserve(static_cast<std::size_t>(a.ell()));
  std::size_t at = 0;
  for (int j = 0; j < a.ell(); ++j) {
    int d = a.comps[static_cast<std::size_t>(j)] * a.tw->h();
    std::vector<fp_t> part(c.begin() + static_cast<std::ptrdiff_t>(at),
                           c.begin() + static_cast<std::ptrdiff_t>(at + static_cast<std::size_t>(d)));
    out.push_back(a.tw->from_subfield_coords_p(part, d));
    at += static_cast<std::size_t>(d);
  }
  return out;
}

// --------------------------------------------------------------- Subspace --

namespace {

// gamma-scaling callback on coordinate rows, used to close/verify F_q spans.
std::function<std::vector<fp_t>(const std::vector<fp_t>&)> gamma_scaler(const Ambient& a) {
  Element gamma = a.tw->subfield_generator(1);
  return [a, gamma](const std::vector<fp_t>& row) {
    return vec_coords(a, scal_mul(a, gamma, vec_from_coords(a, row)));
  };
}

}  // namespace

Subspace Subspace::from_fq_generators(const Ambient& a, const std::vector<Vec>& gens) {
  std::vector<std::vector<fp_t>> rows;
  rows.reserve(gens.size());
  for (const Vec& g : gens) rows.push_back(vec_coords(a, g));
  FqSpan span = fq_row_span(a.tw->p(), a.tw->h(), a.fp_dim(), rows, gamma_scaler(a),
                            /*close=*/true);
  Subspace s;
  s.amb_ = a;
  s.k_ = span.k;
  s.rows_ = std::move(span.rref);
  s.pivots_ = std::move(span.pivots);
  for (const auto& r : span.fq_basis) s.basis_.push_back(vec_from_coords(a, r));
  return s;
}

Subspace Subspace::from_closed_rows(const Ambient& a,
                                    const std::vector<std::vector<fp_t>>& rows) {
  FqSpan span = fq_row_span(a.tw->p(), a.tw->h(), a.fp_dim(), rows, gamma_scaler(a),
                            /*close=*/false);
  Subspace s;
  s.amb_ = a;
  s.k_ = span.k;
  s.rows_ = std::move(span.rref);
  s.pivots_ = std::move(span.pivots);
  for (const auto& r : span.fq_basis) s.basis_.push_back(vec_from_coords(a, r));
  return s;
}

Subspace Subspace::from_image(const Ambient& a, int domain_e,
                              const std::function<Vec(const Element&)>& map) {
  const Tower& tw = *a.tw;
  Element g = tw.subfield_generator(domain_e);
  std::vector<std::vector<fp_t>> rows;
  Element b = tw.one();
  for (int i = 0; i < domain_e * tw.h(); ++i) {
    rows.push_back(vec_coords(a, map(b)));
    b = b * g;
  }
  return from_closed_rows(a, rows);
}

Subspace Subspace::from_image_pair(
    const Ambient& a, int e1, int e2,
    const std::function<Vec(const Element&, const Element&)>& map) {
  const Tower& tw = *a.tw;
  std::vector<std::vector<fp_t>> rows;
  Element b = tw.one();
  for (int i = 0; i < e1 * tw.h(); ++i) {
    rows.push_back(vec_coords(a, map(b, tw.zero())));
    b = b * tw.subfield_generator(e1);
  }
  b = tw.one();
  for (int i = 0; i < e2 * tw.h(); ++i) {
    rows.push_back(vec_coords(a, map(tw.zero(), b)));
    b = b * tw.subfield_generator(e2);
  }
  return from_closed_rows(a, rows);
}

bool Subspace::contains(const Vec& v) const {
  return rows_.contains(vec_coords(amb_, v), pivots_);
}

bool Subspace::equals(const Subspace& o) const {
  return amb_.same(o.amb_) && rows_ == o.rows_;
}

// ----------------------------------------------------------------- weight --

namespace {

// F_p-basis of the scalar field F_{q^n}: powers of its canonical generator.
std::vector<Element> scalar_basis(const Ambient& a) {
  const Tower& tw = *a.tw;
  Element g = tw.subfield_generator(a.n);
  std::vector<Element> out;
  Element acc = tw.one();
  for (int i = 0; i < a.n * tw.h(); ++i) {
    out.push_back(acc);
    acc = acc * g;
  }
  return out;
}

// weight via dim(U meet <v>) = nh - rank of the <v> rows reduced modulo U.
int weight_with_basis(const Subspace& u, const Vec& v,
                      const std::vector<Element>& lambdas) {
  const Ambient& a = u.ambient();
  if (vec_is_zero(v)) throw std::invalid_argument("weight of the zero vector");
  int h = a.tw->h();
  FpMat extra(a.tw->p(), a.fp_dim());
  for (const Element& lam : lambdas) {
    std::vector<fp_t> row = vec_coords(a, scal_mul(a, lam, v));
    u.rows().reduce_row(row, u.pivots());
    extra.rows.push_back(std::move(row));
  }
  int nh = static_cast<int>(lambdas.size());
  int meet = nh - static_cast<int>(extra.rref().size());
  if (meet % h != 0) throw std::logic_error("intersection is not F_q-closed");
  return meet / h;
}

}  // namespace

int weight(const Subspace& u, const Vec& v) {
  return weight_with_basis(u, v, scalar_basis(u.ambient()));
}

// ---------------------------------------------------------------- scans ----

namespace {

// Odometer over the nonzero vectors of U in F_q-coordinate order: digit i
// (an F_q index) steps fastest for i = 0.  visit(u, digits) returning false
// stops the scan early.
void scan_subspace(const Subspace& u,
                   const std::function<bool(const Vec&, const std::vector<fp_t>&)>& visit) {
  const Ambient& a = u.ambient();
  const Tower& tw = *a.tw;
  const SmallField& sf = tw.small_field();
  int k = u.k();
  if (k == 0) return;
  double logsz = static_cast<double>(k) * std::log2(static_cast<double>(sf.q));
  if (logsz > 22.0) throw std::invalid_argument("subspace too large to enumerate");

  // step_vec[i][d] = (elem(d+1 mod q) - elem(d)) * b_i
  std::vector<std::vector<Vec>> step_vec(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i)
    for (std::uint32_t d = 0; d < sf.q; ++d)
      step_vec[static_cast<std::size_t>(i)].push_back(
          scal_mul(a, tw.sf_element(sf.step_delta[d]), u.fq_basis()[static_cast<std::size_t>(i)]));

  std::vector<fp_t> digits(static_cast<std::size_t>(k), 0);
  Vec cur = zero_vec(a);
  while (true) {
    // Increment with carries, updating cur incrementally.
    int i = 0;
    while (i < k) {
      fp_t d = digits[static_cast<std::size_t>(i)];
      cur = vec_add(a, cur, step_vec[static_cast<std::size_t>(i)][d]);
      digits[static_cast<std::size_t>(i)] = static_cast<fp_t>((d + 1) % sf.q);
      if (digits[static_cast<std::size_t>(i)] != 0) break;
      ++i;
    }
    if (i == k) break;  // wrapped around to zero
    if (!visit(cur, digits)) break;
  }
}

}  // namespace

LinearSetAnalysis analyze_linear_set(const Subspace& u) {
  const Ambient& a = u.ambient();
  const std::uint32_t q = a.tw->q();
  auto lambdas = scalar_basis(a);

  LinearSetAnalysis out;
  out.points_by_weight.assign(static_cast<std::size_t>(std::min(u.k(), a.n)) + 1, 0);
  std::vector<std::uint64_t> vecs_by_weight(out.points_by_weight.size(), 0);
  std::uint64_t total = 0;

  scan_subspace(u, [&](const Vec& v, const std::vector<fp_t>&) {
    int w = weight_with_basis(u, v, lambdas);
    if (w < 1 || w >= static_cast<int>(vecs_by_weight.size()))
      throw std::logic_error("weight out of range");
    ++vecs_by_weight[static_cast<std::size_t>(w)];
    ++total;
    if (w > out.max_weight) {
      out.max_weight = w;
      out.witness = v;
    }
    return true;
  });

  // q^k - 1 vectors seen in total.
  std::uint64_t expect = 1;
  for (int i = 0; i < u.k(); ++i) expect *= q;
  if (total != expect - 1) throw std::logic_error("vector count mismatch");

  // A weight-w point carries q^w - 1 nonzero vectors of U.
  for (int w = 1; w < static_cast<int>(vecs_by_weight.size()); ++w) {
    std::uint64_t qw = 1;
    for (int i = 0; i < w; ++i) qw *= q;
    if (vecs_by_weight[static_cast<std::size_t>(w)] % (qw - 1) != 0)
      throw std::logic_error("weight histogram is not point-aligned");
    out.points_by_weight[static_cast<std::size_t>(w)] =
        vecs_by_weight[static_cast<std::size_t>(w)] / (qw - 1);
    out.points += out.points_by_weight[static_cast<std::size_t>(w)];
  }

  out.scattered = (u.k() == 0) || out.max_weight == 1;
  if (out.scattered) {
    if (out.points != (expect - 1) / (q - 1))
      throw std::logic_error("scattered point count violates (q^k-1)/(q-1)");
    if (2 * u.k() > a.r() * a.n)
      throw std::logic_error("scattered dimension exceeds rn/2");
  }
  return out;
}

bool is_scattered(const Subspace& u, Vec* witness) {
  auto lambdas = scalar_basis(u.ambient());
  bool ok = true;
  scan_subspace(u, [&](const Vec& v, const std::vector<fp_t>&) {
    if (weight_with_basis(u, v, lambdas) > 1) {
      ok = false;
      if (witness) *witness = v;
      return false;
    }
    return true;
  });
  return ok;
}

// ---------------------------------------------------------------- lattice --

Subspace rescatter_view(const Subspace& u, int new_n) {
  const Ambient& a = u.ambient();
  for (int e : a.comps)
    if (new_n < 1 || e % new_n != 0)
      throw std::invalid_argument("new scalar degree must divide every component degree");
  Ambient b = Ambient::make(a.tw, a.comps, new_n);
  std::vector<std::vector<fp_t>> rows = u.rows().rows;
  return Subspace::from_closed_rows(b, rows);
}

Subspace intersect(const Subspace& u, const Subspace& w) {
  if (!u.ambient().same(w.ambient()))
    throw std::invalid_argument("subspaces live in different ambients");
  FpMat meet = fp_rowspace_intersection(u.rows(), w.rows());
  return Subspace::from_closed_rows(u.ambient(), meet.rows);
}

Subspace subspace_sum(const Subspace& u, const Subspace& w) {
  if (!u.ambient().same(w.ambient()))
    throw std::invalid_argument("subspaces live in different ambients");
  std::vector<std::vector<fp_t>> rows = u.rows().rows;
  rows.insert(rows.end(), w.rows().rows.begin(), w.rows().rows.end());
  return Subspace::from_closed_rows(u.ambient(), rows);
}

Subspace direct_sum(const Subspace& u, const Subspace& w) {
  const Ambient& au = u.ambient();
  const Ambient& aw = w.ambient();
  if (!au.tw->same_field(*aw.tw))
    throw std::invalid_argument("summands live in different fields");
  if (au.n != aw.n) throw std::invalid_argument("summands have different scalar degrees");
  std::vector<int> comps = au.comps;
  comps.insert(comps.end(), aw.comps.begin(), aw.comps.end());
  Ambient big = Ambient::make(au.tw, comps, au.n);
  int wu = au.fp_dim(), ww = aw.fp_dim();
  std::vector<std::vector<fp_t>> rows;
  for (const auto& r : u.rows().rows) {
    std::vector<fp_t> row(static_cast<std::size_t>(wu + ww), 0);
    std::copy(r.begin(), r.end(), row.begin());
    rows.push_back(std::move(row));
  }
  for (const auto& r : w.rows().rows) {
    std::vector<fp_t> row(static_cast<std::size_t>(wu + ww), 0);
    std::copy(r.begin(), r.end(), row.begin() + wu);
    rows.push_back(std::move(row));
  }
  return Subspace::from_closed_rows(big, rows);
}

}  // namespace scatmrd
