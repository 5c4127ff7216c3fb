#include "scatmrd/linmaps.hpp"

#include <stdexcept>

namespace scatmrd {

// ------------------------------------------------------------------ FqMat --

FqMat FqMat::zero(std::shared_ptr<const Tower> tw, int m, int n) {
  if (m < 0 || n < 0) throw std::invalid_argument("negative matrix dimension");
  FqMat x;
  x.tw = std::move(tw);
  x.m = m;
  x.n = n;
  x.a.assign(static_cast<std::size_t>(m) * static_cast<std::size_t>(n), 0);
  return x;
}

FqMat FqMat::identity(std::shared_ptr<const Tower> tw, int n) {
  FqMat x = zero(std::move(tw), n, n);
  for (int i = 0; i < n; ++i) x.at(i, i) = 1;
  return x;
}

bool FqMat::operator==(const FqMat& o) const {
  return tw->same_field(*o.tw) && m == o.m && n == o.n && a == o.a;
}

static void check_same_shape(const FqMat& x, const FqMat& y) {
  if (!x.tw->same_field(*y.tw) || x.m != y.m || x.n != y.n)
    throw std::invalid_argument("matrix shape or field mismatch");
}

FqMat fq_add(const FqMat& x, const FqMat& y) {
  FqMat out = x;
  fq_add_into(out, y);
  return out;
}

void fq_add_into(FqMat& dst, const FqMat& src) {
  check_same_shape(dst, src);
  const SmallField& sf = dst.tw->small_field();
  for (std::size_t i = 0; i < dst.a.size(); ++i) dst.a[i] = sf.a(dst.a[i], src.a[i]);
}

FqMat fq_scale(fp_t c, const FqMat& x) {
  const SmallField& sf = x.tw->small_field();
  FqMat out = x;
  for (fp_t& v : out.a) v = sf.m(c, v);
  return out;
}

FqMat fq_mul(const FqMat& x, const FqMat& y) {
  if (!x.tw->same_field(*y.tw) || x.n != y.m)
    throw std::invalid_argument("matrix product shape mismatch");
  const SmallField& sf = x.tw->small_field();
  FqMat out = FqMat::zero(x.tw, x.m, y.n);
  for (int i = 0; i < x.m; ++i)
    for (int k = 0; k < x.n; ++k) {
      fp_t c = x.at(i, k);
      if (!c) continue;
      for (int j = 0; j < y.n; ++j)
        out.at(i, j) = sf.a(out.at(i, j), sf.m(c, y.at(k, j)));
    }
  return out;
}

FqMat fq_transpose(const FqMat& x) {
  FqMat out = FqMat::zero(x.tw, x.n, x.m);
  for (int i = 0; i < x.m; ++i)
    for (int j = 0; j < x.n; ++j) out.at(j, i) = x.at(i, j);
  return out;
}

int fq_rank(FqMat x) {
  const SmallField& sf = x.tw->small_field();
  int rank = 0;
  for (int col = 0; col < x.n && rank < x.m; ++col) {
    int piv = -1;
    for (int r = rank; r < x.m; ++r)
      if (x.at(r, col)) {
        piv = r;
        break;
      }
    if (piv < 0) continue;
    for (int j = 0; j < x.n; ++j) std::swap(x.at(piv, j), x.at(rank, j));
    fp_t inv = sf.inv[x.at(rank, col)];
    for (int j = col; j < x.n; ++j) x.at(rank, j) = sf.m(inv, x.at(rank, j));
    for (int r = rank + 1; r < x.m; ++r) {
      fp_t c = x.at(r, col);
      if (!c) continue;
      fp_t nc = sf.neg[c];
      for (int j = col; j < x.n; ++j)
        x.at(r, j) = sf.a(x.at(r, j), sf.m(nc, x.at(rank, j)));
    }
    ++rank;
  }
  return rank;
}

FqMat fq_inverse(const FqMat& x) {
  if (x.m != x.n) throw std::invalid_argument("inverse of a non-square matrix");
  const SmallField& sf = x.tw->small_field();
  int n = x.n;
  FqMat work = FqMat::zero(x.tw, n, 2 * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) work.at(i, j) = x.at(i, j);
    work.at(i, n + i) = 1;
  }
  for (int col = 0; col < n; ++col) {
    int piv = -1;
    for (int r = col; r < n; ++r)
      if (work.at(r, col)) {
        piv = r;
        break;
      }
    if (piv < 0) throw std::invalid_argument("matrix is singular");
    for (int j = 0; j < 2 * n; ++j) std::swap(work.at(piv, j), work.at(col, j));
    fp_t inv = sf.inv[work.at(col, col)];
    for (int j = 0; j < 2 * n; ++j) work.at(col, j) = sf.m(inv, work.at(col, j));
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      fp_t c = work.at(r, col);
      if (!c) continue;
      fp_t nc = sf.neg[c];
      for (int j = 0; j < 2 * n; ++j)
        work.at(r, j) = sf.a(work.at(r, j), sf.m(nc, work.at(col, j)));
    }
  }
  FqMat out = FqMat::zero(x.tw, n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out.at(i, j) = work.at(i, n + j);
  return out;
}

bool fq_is_zero(const FqMat& x) {
  for (fp_t v : x.a)
    if (v) return false;
  return true;
}

// --------------------------------------------------------- LinearizedPoly --

LinearizedPoly LinearizedPoly::make(std::shared_ptr<const Tower> tw, int d,
                                    std::vector<Element> coef) {
  if (!tw) throw std::invalid_argument("polynomial needs a field");
  int dp = d * tw->h();
  if (d < 1 || dp > tw->M() || tw->M() % dp != 0)
    throw std::invalid_argument("domain degree not in the tower");
  if (static_cast<int>(coef.size()) > d)
    throw std::invalid_argument("more coefficients than the reduced degree");
  coef.resize(static_cast<std::size_t>(d), tw->zero());
  for (const Element& c : coef)
    if (!tw->in_subfield(c, d))
      throw std::invalid_argument("coefficient outside F_{q^d}");
  LinearizedPoly f;
  f.tw = std::move(tw);
  f.d = d;
  f.coef = std::move(coef);
  return f;
}

LinearizedPoly LinearizedPoly::monomial(std::shared_ptr<const Tower> tw, int d, int i,
                                        const Element& c) {
  if (i < 0) throw std::invalid_argument("negative Frobenius power");
  std::vector<Element> coef(static_cast<std::size_t>(d), tw->zero());
  coef[static_cast<std::size_t>(i % d)] = c;
  return make(std::move(tw), d, std::move(coef));
}

Element LinearizedPoly::eval(const Element& x) const {
  if (!tw->in_subfield(x, d))
    throw std::invalid_argument("argument outside the domain field");
  Element acc = tw->zero();
  for (int i = 0; i < d; ++i) {
    if (coef[static_cast<std::size_t>(i)].is_zero()) continue;
    acc = acc + coef[static_cast<std::size_t>(i)] * tw->frobenius(x, i);
  }
  return acc;
}

bool LinearizedPoly::is_zero() const {
  for (const Element& c : coef)
    if (!c.is_zero()) return false;
  return true;
}

static void check_same_domain(const LinearizedPoly& f, const LinearizedPoly& g) {
  if (!f.tw->same_field(*g.tw) || f.d != g.d)
    throw std::invalid_argument("polynomials over different domains");
}

LinearizedPoly lp_add(const LinearizedPoly& f, const LinearizedPoly& g) {
  check_same_domain(f, g);
  std::vector<Element> coef(f.coef);
  for (int i = 0; i < f.d; ++i)
    coef[static_cast<std::size_t>(i)] =
        coef[static_cast<std::size_t>(i)] + g.coef[static_cast<std::size_t>(i)];
  return LinearizedPoly::make(f.tw, f.d, std::move(coef));
}

LinearizedPoly lp_sub(const LinearizedPoly& f, const LinearizedPoly& g) {
  check_same_domain(f, g);
  std::vector<Element> coef(f.coef);
  for (int i = 0; i < f.d; ++i)
    coef[static_cast<std::size_t>(i)] =
        coef[static_cast<std::size_t>(i)] - g.coef[static_cast<std::size_t>(i)];
  return LinearizedPoly::make(f.tw, f.d, std::move(coef));
}

LinearizedPoly lp_compose(const LinearizedPoly& f, const LinearizedPoly& g) {
  check_same_domain(f, g);
  int d = f.d;
  std::vector<Element> coef(static_cast<std::size_t>(d), f.tw->zero());
  for (int i = 0; i < d; ++i) {
    if (f.coef[static_cast<std::size_t>(i)].is_zero()) continue;
    for (int j = 0; j < d; ++j) {
      if (g.coef[static_cast<std::size_t>(j)].is_zero()) continue;
      int k = (i + j) % d;
      coef[static_cast<std::size_t>(k)] =
          coef[static_cast<std::size_t>(k)] +
          f.coef[static_cast<std::size_t>(i)] *
              f.tw->frobenius(g.coef[static_cast<std::size_t>(j)], i);
    }
  }
  return LinearizedPoly::make(f.tw, d, std::move(coef));
}

LinearizedPoly lp_adjoint(const LinearizedPoly& f) {
  int d = f.d;
  std::vector<Element> coef(static_cast<std::size_t>(d), f.tw->zero());
  for (int i = 0; i < d; ++i)
    coef[static_cast<std::size_t>(i)] =
        f.tw->frobenius(f.coef[static_cast<std::size_t>((d - i) % d)], i);
  return LinearizedPoly::make(f.tw, d, std::move(coef));
}

FqMat lp_to_matrix(const LinearizedPoly& f) {
  const Tower& tw = *f.tw;
  FqMat out = FqMat::zero(f.tw, f.d, f.d);
  Element g = tw.subfield_generator(f.d);
  Element b = tw.one();
  for (int j = 0; j < f.d; ++j) {
    std::vector<fp_t> col = tw.fq_coords(f.eval(b), f.d);
    for (int i = 0; i < f.d; ++i) out.at(i, j) = col[static_cast<std::size_t>(i)];
    b = b * g;
  }
  return out;
}

Subspace lp_kernel(const LinearizedPoly& f) {
  Ambient a = Ambient::make(f.tw, {f.d}, f.d);
  // F_p matrix of x -> f(x) on the power-basis coordinates of F_{q^d}.
  int dp = f.d * f.tw->h();
  FpMat m(f.tw->p(), dp);
  m.rows.assign(static_cast<std::size_t>(dp), std::vector<fp_t>(static_cast<std::size_t>(dp), 0));
  Element g = f.tw->subfield_generator(f.d);
  Element b = f.tw->one();
  for (int j = 0; j < dp; ++j) {
    std::vector<fp_t> col = f.tw->subfield_coords_p(f.eval(b), dp);
    for (int i = 0; i < dp; ++i) m.rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = col[static_cast<std::size_t>(i)];
    b = b * g;
  }
  std::vector<std::vector<fp_t>> null = fp_nullspace(m);
  return Subspace::from_closed_rows(a, null);
}

LinearizedPoly lp_from_map(std::shared_ptr<const Tower> tw, int d,
                           const std::function<Element(const Element&)>& map) {
  const Tower& t = *tw;
  // Moore system: sum_i a_i b_j^{q^i} = map(b_j) over the canonical basis.
  Element g = t.subfield_generator(d);
  std::vector<Element> b(static_cast<std::size_t>(d));
  std::vector<Element> y(static_cast<std::size_t>(d));
  Element acc = t.one();
  for (int j = 0; j < d; ++j) {
    b[static_cast<std::size_t>(j)] = acc;
    y[static_cast<std::size_t>(j)] = map(acc);
    if (!t.in_subfield(y[static_cast<std::size_t>(j)], d))
      throw std::invalid_argument("map leaves the domain field");
    acc = acc * g;
  }
  // Row j: [ b_j^{q^0}, ..., b_j^{q^{d-1}} | y_j ], eliminated over the field.
  std::vector<std::vector<Element>> a(static_cast<std::size_t>(d));
  for (int j = 0; j < d; ++j) {
    auto& row = a[static_cast<std::size_t>(j)];
    for (int i = 0; i < d; ++i) row.push_back(t.frobenius(b[static_cast<std::size_t>(j)], i));
    row.push_back(y[static_cast<std::size_t>(j)]);
  }
  for (int col = 0; col < d; ++col) {
    int piv = -1;
    for (int r = col; r < d; ++r)
      if (!a[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)].is_zero()) {
        piv = r;
        break;
      }
    if (piv < 0) throw std::logic_error("Moore matrix is singular");
    std::swap(a[static_cast<std::size_t>(piv)], a[static_cast<std::size_t>(col)]);
    Element inv = t.inverse(a[static_cast<std::size_t>(col)][static_cast<std::size_t>(col)]);
    for (auto& v : a[static_cast<std::size_t>(col)]) v = v * inv;
    for (int r = 0; r < d; ++r) {
      if (r == col) continue;
      Element c = a[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)];
      if (c.is_zero()) continue;
      for (int j2 = col; j2 <= d; ++j2)
        a[static_cast<std::size_t>(r)][static_cast<std::size_t>(j2)] =
            a[static_cast<std::size_t>(r)][static_cast<std::size_t>(j2)] -
            c * a[static_cast<std::size_t>(col)][static_cast<std::size_t>(j2)];
    }
  }
  std::vector<Element> coef(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) coef[static_cast<std::size_t>(i)] = a[static_cast<std::size_t>(i)][static_cast<std::size_t>(d)];
  LinearizedPoly f = LinearizedPoly::make(std::move(tw), d, std::move(coef));
  for (int j = 0; j < d; ++j)
    if (f.eval(b[static_cast<std::size_t>(j)]) != y[static_cast<std::size_t>(j)])
      throw std::logic_error("interpolation failed to reproduce the map");
  return f;
}

std::vector<fp_t> fq_coords_in_basis(const Ambient& a, const std::vector<Vec>& basis,
                                     const Vec& v) {
  const Tower& tw = *a.tw;
  int h = tw.h();
  int k = static_cast<int>(basis.size());
  int w = a.fp_dim();
  // Solve [ coords(gamma^l b_i) ] * x = coords(v) over F_p; the F_q digit
  // block of basis vector i occupies columns i*h .. i*h+h-1.
  Element gamma = tw.subfield_generator(1);
  FpMat sys(tw.p(), k * h + 1);
  sys.rows.assign(static_cast<std::size_t>(w),
                  std::vector<fp_t>(static_cast<std::size_t>(k * h + 1), 0));
  for (int i = 0; i < k; ++i) {
    Vec scaled = basis[static_cast<std::size_t>(i)];
    for (int l = 0; l < h; ++l) {
      std::vector<fp_t> col = vec_coords(a, scaled);
      for (int rr = 0; rr < w; ++rr)
        sys.rows[static_cast<std::size_t>(rr)][static_cast<std::size_t>(i * h + l)] =
            col[static_cast<std::size_t>(rr)];
      if (l + 1 < h) scaled = scal_mul(a, gamma, scaled);
    }
  }
  std::vector<fp_t> rhs = vec_coords(a, v);
  for (int rr = 0; rr < w; ++rr)
    sys.rows[static_cast<std::size_t>(rr)][static_cast<std::size_t>(k * h)] =
        rhs[static_cast<std::size_t>(rr)];
  std::vector<int> piv = sys.rref();
  std::vector<fp_t> digits(static_cast<std::size_t>(k * h), 0);
  for (std::size_t r = 0; r < piv.size(); ++r) {
    if (piv[r] == k * h) throw std::invalid_argument("vector outside the basis span");
    digits[static_cast<std::size_t>(piv[r])] =
        sys.rows[r][static_cast<std::size_t>(k * h)];
  }
  // Any non-pivot basis column would mean a dependent basis.
  if (static_cast<int>(piv.size()) < k * h)
    throw std::invalid_argument("basis is dependent");
  std::vector<fp_t> out(static_cast<std::size_t>(k), 0);
  for (int i = 0; i < k; ++i) {
    std::uint32_t idx = 0;
    for (int l = h - 1; l >= 0; --l)
      idx = idx * tw.p() + digits[static_cast<std::size_t>(i * h + l)];
    out[static_cast<std::size_t>(i)] = static_cast<fp_t>(idx);
  }
  return out;
}

}  // namespace scatmrd
