#include "scatmrd/fields.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace scatmrd {
namespace {

using Poly = std::vector<fp_t>;  // ascending coefficients, may carry a zero tail

int deg(const Poly& f) {
  for (int i = static_cast<int>(f.size()) - 1; i >= 0; --i)
    if (f[static_cast<std::size_t>(i)]) return i;
  return -1;
}

std::uint32_t mod_inverse(std::uint32_t a, std::uint32_t p) {
  // Fermat; p is prime and a != 0 mod p.
  std::uint64_t r = 1, b = a % p, e = p - 2;
  while (e) {
    if (e & 1) r = r * b % p;
    b = b * b % p;
    e >>= 1;
  }
  return static_cast<std::uint32_t>(r);
}

Poly poly_mod(Poly a, const Poly& f, std::uint32_t p) {
  int df = deg(f);
  std::uint32_t lead_inv = mod_inverse(f[static_cast<std::size_t>(df)], p);
  for (int i = deg(a); i >= df; --i) {
    std::uint32_t c = a[static_cast<std::size_t>(i)];
    if (!c) continue;
    std::uint32_t factor = static_cast<std::uint32_t>(
        static_cast<std::uint64_t>(c) * lead_inv % p);
    for (int j = 0; j <= df; ++j) {
      std::uint64_t sub = static_cast<std::uint64_t>(factor) *
                          f[static_cast<std::size_t>(j)] % p;
      std::uint64_t cur = a[static_cast<std::size_t>(i - df + j)];
      a[static_cast<std::size_t>(i - df + j)] =
          static_cast<fp_t>((cur + p - sub) % p);
    }
  }
  a.resize(static_cast<std::size_t>(df));
  return a;
}

Poly poly_mulmod(const Poly& a, const Poly& b, const Poly& f, std::uint32_t p) {
  int da = deg(a), db = deg(b);
  if (da < 0 || db < 0) return Poly(f.size() - 1, 0);
  Poly c(static_cast<std::size_t>(da + db + 1), 0);
  std::vector<std::uint64_t> acc(c.size(), 0);
  for (int i = 0; i <= da; ++i) {
    if (!a[static_cast<std::size_t>(i)]) continue;
    for (int j = 0; j <= db; ++j)
      acc[static_cast<std::size_t>(i + j)] +=
          static_cast<std::uint64_t>(a[static_cast<std::size_t>(i)]) *
          b[static_cast<std::size_t>(j)];
  }
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = static_cast<fp_t>(acc[i] % p);
  return poly_mod(std::move(c), f, p);
}

// s^e mod f by square and multiply.
Poly poly_powmod(Poly s, std::uint64_t e, const Poly& f, std::uint32_t p) {
  Poly r(f.size() - 1, 0);
  r[0] = 1;
  while (e) {
    if (e & 1) r = poly_mulmod(r, s, f, p);
    s = poly_mulmod(s, s, f, p);
    e >>= 1;
  }
  return r;
}

Poly poly_gcd(Poly a, Poly b, std::uint32_t p) {
  while (!b.empty() && b.back() == 0) b.pop_back();
  while (deg(b) >= 0) {
    Poly r = poly_mod(a, b, p);
    while (!r.empty() && r.back() == 0) r.pop_back();
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

// Rabin's irreducibility test: f of degree M is irreducible over F_p iff
// x^{p^M} = x (mod f) and gcd(x^{p^{M/l}} - x, f) = 1 for every prime l | M.
bool is_irreducible(const Poly& f, std::uint32_t p) {
  int M = deg(f);
  if (M == 1) return true;
  std::vector<std::uint64_t> ls = prime_factors(static_cast<std::uint64_t>(M));
  std::vector<int> checkpoints;
  for (std::uint64_t l : ls) checkpoints.push_back(M / static_cast<int>(l));

  Poly x(f.size() - 1, 0);
  if (x.size() < 2) return false;  // M >= 2 here
  x[1] = 1;
  Poly s = x;
  for (int k = 1; k <= M; ++k) {
    s = poly_powmod(std::move(s), p, f, p);  // s = x^{p^k} mod f
    if (std::find(checkpoints.begin(), checkpoints.end(), k) != checkpoints.end()) {
      Poly diff = s;
      diff[1] = static_cast<fp_t>((diff[1] + p - 1) % p);
      while (!diff.empty() && diff.back() == 0) diff.pop_back();
      if (diff.empty()) return false;  // x^{p^k} = x already: proper subfield
      Poly g = poly_gcd(f, diff, p);
      if (deg(g) != 0) return false;
    }
    if (k == M) {
      Poly diff = s;
      diff[1] = static_cast<fp_t>((diff[1] + p - 1) % p);
      if (deg(diff) >= 0) return false;
    }
  }
  return true;
}

}  // namespace

std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

// ---------------------------------------------------------------- Element --

Element Element::operator+(const Element& o) const { return tw_->add(*this, o); }
Element Element::operator-(const Element& o) const { return tw_->sub(*this, o); }
Element Element::operator*(const Element& o) const { return tw_->mul(*this, o); }
Element Element::operator-() const { return tw_->neg(*this); }

bool Element::operator==(const Element& o) const {
  if (tw_ != o.tw_) throw std::invalid_argument("elements of different towers");
  return c_ == o.c_;
}

bool Element::is_zero() const {
  for (fp_t v : c_)
    if (v) return false;
  return true;
}

std::uint64_t Element::pack() const {
  std::uint64_t v = 0;
  const std::uint32_t p = tw_->p();
  for (int i = tw_->M() - 1; i >= 0; --i) v = v * p + c_[static_cast<std::size_t>(i)];
  return v;
}

std::vector<int> Element::coeff_vector() const {
  std::vector<int> out(static_cast<std::size_t>(tw_->M()));
  for (int i = 0; i < tw_->M(); ++i) out[static_cast<std::size_t>(i)] = c_[static_cast<std::size_t>(i)];
  return out;
}

std::string Element::to_string() const {
  std::ostringstream os;
  bool first = true;
  for (int i = tw_->M() - 1; i >= 0; --i) {
    int c = c_[static_cast<std::size_t>(i)];
    if (!c) continue;
    if (!first) os << "+";
    first = false;
    if (i == 0 || c != 1) os << c;
    if (i > 0) {
      os << "x";
      if (i > 1) os << "^" << i;
    }
  }
  if (first) os << "0";
  return os.str();
}

// ------------------------------------------------------------------ Tower --

std::shared_ptr<const Tower> Tower::make(std::uint32_t p, int M,
                                         std::vector<int> declared, int h) {
  if (!is_prime_u64(p)) throw std::invalid_argument("p is not prime");
  if (M < 1 || M > kMaxAmbientDegree) throw std::invalid_argument("M out of range");
  if (h < 1 || M % h != 0) throw std::invalid_argument("h must divide M");
  double bits = M * std::log2(static_cast<double>(p));
  if (bits > 48.0) throw std::invalid_argument("p^M too large (cap 2^48)");
  std::sort(declared.begin(), declared.end());
  declared.erase(std::unique(declared.begin(), declared.end()), declared.end());
  for (int d : declared)
    if (d < 1 || M % d != 0)
      throw std::invalid_argument("declared degree does not divide M");

  auto tw = std::shared_ptr<Tower>(new Tower());
  tw->p_ = p;
  tw->h_ = h;
  tw->M_ = M;
  tw->declared_ = declared;
  std::uint64_t q = 1;
  for (int i = 0; i < h; ++i) q *= p;
  tw->q_ = static_cast<std::uint32_t>(q);
  std::uint64_t ord = 1;
  for (int i = 0; i < M; ++i) ord *= p;
  tw->order_ = ord - 1;

  // Least monic irreducible of degree M, candidates ordered by pack of the
  // low part (c_0 least significant).
  std::uint64_t count = ord;  // p^M candidates for the low coefficients
  Poly f(static_cast<std::size_t>(M + 1), 0);
  f[static_cast<std::size_t>(M)] = 1;
  bool found = false;
  for (std::uint64_t v = 0; v < count; ++v) {
    std::uint64_t t = v;
    for (int i = 0; i < M; ++i) {
      f[static_cast<std::size_t>(i)] = static_cast<fp_t>(t % p);
      t /= p;
    }
    if (is_irreducible(f, p)) {
      found = true;
      break;
    }
  }
  if (!found) throw std::logic_error("no irreducible polynomial found");
  tw->modulus_.assign(f.begin(), f.end());

  tw->build_frobenius();
  tw->order_prime_factors_ = prime_factors(tw->order_);

  // Least primitive element in canonical order.
  Element cand;
  bool have_mu = false;
  for (std::uint64_t v = 1; v < ord; ++v) {
    cand = tw->from_pack(v);
    bool prim = true;
    for (std::uint64_t l : tw->order_prime_factors_) {
      if (tw->pow(cand, tw->order_ / l) == tw->one()) {
        prim = false;
        break;
      }
    }
    if (prim) {
      have_mu = true;
      break;
    }
  }
  if (!have_mu) throw std::logic_error("no primitive element found");
  tw->mu_ = cand;

  tw->build_subfield_caches();
  tw->build_small_field();
  return tw;
}

std::shared_ptr<const Tower> Tower::make_q(std::uint32_t p, int h,
                                           std::vector<int> q_degrees) {
  if (q_degrees.empty()) throw std::invalid_argument("no degrees given");
  int top = *std::max_element(q_degrees.begin(), q_degrees.end());
  std::vector<int> declared;
  declared.push_back(h == 1 ? 1 : h);  // the base field itself
  for (int d : q_degrees) {
    if (d < 1 || top % d != 0)
      throw std::invalid_argument("q-degree does not divide the largest degree");
    declared.push_back(d * h);
  }
  return make(p, top * h, std::move(declared), h);
}

Element Tower::zero() const {
  Element e;
  e.tw_ = this;
  return e;
}

Element Tower::one() const { return from_int(1); }
Element Tower::mu() const { return mu_; }

Element Tower::from_coeffs(const std::vector<int>& coeffs) const {
  if (static_cast<int>(coeffs.size()) > M_)
    throw std::invalid_argument("coefficient vector longer than M");
  Element e = zero();
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    long long c = coeffs[i] % static_cast<long long>(p_);
    if (c < 0) c += p_;
    e.c_[i] = static_cast<fp_t>(c);
  }
  return e;
}

Element Tower::from_pack(std::uint64_t v) const {
  Element e = zero();
  for (int i = 0; i < M_ && v; ++i) {
    e.c_[static_cast<std::size_t>(i)] = static_cast<fp_t>(v % p_);
    v /= p_;
  }
  if (v) throw std::invalid_argument("pack value out of range");
  return e;
}

Element Tower::from_int(std::uint64_t c) const {
  Element e = zero();
  e.c_[0] = static_cast<fp_t>(c % p_);
  return e;
}

Element Tower::add(const Element& a, const Element& b) const {
  if (a.tw_ != this || b.tw_ != this)
    throw std::invalid_argument("elements of different towers");
  Element r = zero();
  for (int i = 0; i < M_; ++i) {
    std::uint32_t s = a.c_[static_cast<std::size_t>(i)] + b.c_[static_cast<std::size_t>(i)];
    if (s >= p_) s -= p_;
    r.c_[static_cast<std::size_t>(i)] = static_cast<fp_t>(s);
  }
  return r;
}

Element Tower::sub(const Element& a, const Element& b) const {
  return add(a, neg(b));
}

Element Tower::neg(const Element& a) const {
  if (a.tw_ != this) throw std::invalid_argument("element of a different tower");
  Element r = zero();
  for (int i = 0; i < M_; ++i)
    r.c_[static_cast<std::size_t>(i)] =
        static_cast<fp_t>(a.c_[static_cast<std::size_t>(i)] ? p_ - a.c_[static_cast<std::size_t>(i)] : 0);
  return r;
}

Element Tower::mul(const Element& a, const Element& b) const {
  if (a.tw_ != this || b.tw_ != this)
    throw std::invalid_argument("elements of different towers");
  std::array<std::uint64_t, 2 * kMaxAmbientDegree> acc{};
  for (int i = 0; i < M_; ++i) {
    if (!a.c_[static_cast<std::size_t>(i)]) continue;
    std::uint64_t ai = a.c_[static_cast<std::size_t>(i)];
    for (int j = 0; j < M_; ++j)
      acc[static_cast<std::size_t>(i + j)] += ai * b.c_[static_cast<std::size_t>(j)];
  }
  // reduce degree 2M-2 .. M by the monic modulus
  for (int k = 2 * M_ - 2; k >= M_; --k) {
    std::uint64_t c = acc[static_cast<std::size_t>(k)] % p_;
    if (!c) continue;
    acc[static_cast<std::size_t>(k)] = 0;
    // subtract c * x^{k-M} * modulus; modulus is monic so x^k cancels
    for (int j = 0; j < M_; ++j) {
      std::uint64_t sub = c * modulus_[static_cast<std::size_t>(j)] % p_;
      std::size_t idx = static_cast<std::size_t>(k - M_ + j);
      acc[idx] = (acc[idx] + p_ - sub) % p_;
    }
  }
  Element r = zero();
  for (int i = 0; i < M_; ++i)
    r.c_[static_cast<std::size_t>(i)] = static_cast<fp_t>(acc[static_cast<std::size_t>(i)] % p_);
  return r;
}

Element Tower::pow(Element base, std::uint64_t e) const {
  Element r = one();
  while (e) {
    if (e & 1) r = mul(r, base);
    base = mul(base, base);
    e >>= 1;
  }
  return r;
}

Element Tower::inverse(const Element& a) const {
  if (a.is_zero()) throw std::invalid_argument("inverse of zero");
  return pow(a, order_ - 1);
}

std::uint64_t Tower::element_order(const Element& a) const {
  if (a.is_zero()) throw std::invalid_argument("order of zero");
  std::uint64_t ord = order_;
  for (std::uint64_t l : order_prime_factors_) {
    while (ord % l == 0 && pow(a, ord / l) == one()) ord /= l;
  }
  return ord;
}

void Tower::build_frobenius() {
  frob_.assign(static_cast<std::size_t>(M_), std::vector<fp_t>());
  frob_[0].assign(static_cast<std::size_t>(M_) * M_, 0);
  for (int i = 0; i < M_; ++i) frob_[0][static_cast<std::size_t>(i) * M_ + i] = 1;
  if (M_ == 1) return;  // F_p: Frobenius is the identity

  // frob_[1] column i = coeffs of x^{i*p} = (x^p)^i mod modulus
  Poly f(modulus_.begin(), modulus_.end());
  Poly x(static_cast<std::size_t>(M_), 0);
  x[1] = 1;
  Poly xp = poly_powmod(x, p_, f, p_);
  std::vector<fp_t> F1(static_cast<std::size_t>(M_) * M_, 0);
  Poly cur(static_cast<std::size_t>(M_), 0);
  cur[0] = 1;
  for (int i = 0; i < M_; ++i) {
    for (int r = 0; r < M_; ++r)
      F1[static_cast<std::size_t>(r) * M_ + i] = cur[static_cast<std::size_t>(r)];
    cur = poly_mulmod(cur, xp, f, p_);
  }
  frob_[1] = std::move(F1);
  // powers by repeated matrix product
  for (int k = 2; k < M_; ++k) {
    const std::vector<fp_t>& B1 = frob_[1];
    const std::vector<fp_t>& A = frob_[static_cast<std::size_t>(k - 1)];
    std::vector<fp_t> C(static_cast<std::size_t>(M_) * M_, 0);
    for (int i = 0; i < M_; ++i)
      for (int l = 0; l < M_; ++l) {
        fp_t a = B1[static_cast<std::size_t>(i) * M_ + l];
        if (!a) continue;
        for (int j = 0; j < M_; ++j) {
          std::uint32_t add = static_cast<std::uint32_t>(a) *
                              A[static_cast<std::size_t>(l) * M_ + j] % p_;
          std::uint32_t cur = C[static_cast<std::size_t>(i) * M_ + j];
          C[static_cast<std::size_t>(i) * M_ + j] = static_cast<fp_t>((cur + add) % p_);
        }
      }
    frob_[static_cast<std::size_t>(k)] = std::move(C);
  }
}

Element Tower::frobenius_p(const Element& x, int k) const {
  if (x.tw_ != this) throw std::invalid_argument("element of a different tower");
  k %= M_;
  if (k < 0) k += M_;
  if (k == 0) return x;
  const std::vector<fp_t>& F = frob_[static_cast<std::size_t>(k)];
  Element r = zero();
  for (int i = 0; i < M_; ++i) {
    std::uint32_t s = 0;
    for (int j = 0; j < M_; ++j)
      s += static_cast<std::uint32_t>(F[static_cast<std::size_t>(i) * M_ + j]) *
           x.c_[static_cast<std::size_t>(j)];
    r.c_[static_cast<std::size_t>(i)] = static_cast<fp_t>(s % p_);
  }
  return r;
}

bool Tower::in_subfield_p(const Element& x, int d) const {
  if (d < 1 || M_ % d != 0) throw std::invalid_argument("degree does not divide M");
  return frobenius_p(x, d % M_) == x;
}

Element Tower::subfield_generator_p(int d) const {
  if (d < 1 || M_ % d != 0) throw std::invalid_argument("degree does not divide M");
  std::uint64_t pd = 1;
  for (int i = 0; i < d; ++i) pd *= p_;
  return pow(mu_, order_ / (pd - 1));
}

std::vector<Element> Tower::subfield_elements_p(int d) const {
  if (d < 1 || M_ % d != 0) throw std::invalid_argument("degree does not divide M");
  std::uint64_t pd = 1;
  for (int i = 0; i < d; ++i) pd *= p_;
  if (pd > (1ull << 22)) throw std::invalid_argument("subfield too large to enumerate");
  std::vector<Element> out;
  out.reserve(static_cast<std::size_t>(pd));
  out.push_back(zero());
  Element g = subfield_generator_p(d);
  Element acc = one();
  for (std::uint64_t j = 0; j + 1 < pd; ++j) {
    out.push_back(acc);
    acc = mul(acc, g);
  }
  std::sort(out.begin(), out.end(),
            [](const Element& a, const Element& b) { return a.pack() < b.pack(); });
  return out;
}

Element Tower::relative_norm(const Element& x, int n_deg, int h_deg) const {
  if (h_deg < 1 || n_deg % h_deg != 0)
    throw std::invalid_argument("norm: subfield degree must divide the field degree");
  if (n_deg * h_ > M_ || M_ % (n_deg * h_) != 0)
    throw std::invalid_argument("norm: degree not in the tower");
  if (!in_subfield(x, n_deg)) throw std::invalid_argument("norm: element outside F_{q^n}");
  Element r = one();
  for (int j = 0; j < n_deg / h_deg; ++j) r = mul(r, frobenius(x, h_deg * j));
  return r;
}

Element Tower::relative_trace(const Element& x, int n_deg, int h_deg) const {
  if (h_deg < 1 || n_deg % h_deg != 0)
    throw std::invalid_argument("trace: subfield degree must divide the field degree");
  if (n_deg * h_ > M_ || M_ % (n_deg * h_) != 0)
    throw std::invalid_argument("trace: degree not in the tower");
  if (!in_subfield(x, n_deg)) throw std::invalid_argument("trace: element outside F_{q^n}");
  Element r = zero();
  for (int j = 0; j < n_deg / h_deg; ++j) r = add(r, frobenius(x, h_deg * j));
  return r;
}

void Tower::build_subfield_caches() {
  // One cache per divisor d of M: elimination transform for power-basis
  // coordinates in F_{p^d}.
  auto build = [this](const std::vector<Element>& basis) {
    int n = static_cast<int>(basis.size());
    // rows: M, cols: n (basis coords) augmented with identity (M)
    std::vector<std::vector<std::uint32_t>> a(
        static_cast<std::size_t>(M_),
        std::vector<std::uint32_t>(static_cast<std::size_t>(n + M_), 0));
    for (int j = 0; j < n; ++j)
      for (int r = 0; r < M_; ++r)
        a[static_cast<std::size_t>(r)][static_cast<std::size_t>(j)] =
            basis[static_cast<std::size_t>(j)].c_[static_cast<std::size_t>(r)];
    for (int r = 0; r < M_; ++r)
      a[static_cast<std::size_t>(r)][static_cast<std::size_t>(n + r)] = 1;
    int row = 0;
    for (int col = 0; col < n && row < M_; ++col) {
      int piv = -1;
      for (int r = row; r < M_; ++r)
        if (a[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)]) {
          piv = r;
          break;
        }
      if (piv < 0) throw std::logic_error("subfield basis is dependent");
      std::swap(a[static_cast<std::size_t>(piv)], a[static_cast<std::size_t>(row)]);
      std::uint32_t inv = mod_inverse(a[static_cast<std::size_t>(row)][static_cast<std::size_t>(col)], p_);
      for (auto& v : a[static_cast<std::size_t>(row)])
        v = static_cast<std::uint32_t>(static_cast<std::uint64_t>(v) * inv % p_);
      for (int r = 0; r < M_; ++r) {
        if (r == row) continue;
        std::uint32_t c = a[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)];
        if (!c) continue;
        for (std::size_t j2 = 0; j2 < a[0].size(); ++j2) {
          std::uint64_t sub = static_cast<std::uint64_t>(c) *
                              a[static_cast<std::size_t>(row)][j2] % p_;
          a[static_cast<std::size_t>(r)][j2] =
              static_cast<std::uint32_t>((a[static_cast<std::size_t>(r)][j2] + p_ - sub) % p_);
        }
      }
      ++row;
    }
    if (row != n) throw std::logic_error("subfield basis is dependent");
    SubfieldCache c;
    c.E.assign(static_cast<std::size_t>(M_) * M_, 0);
    for (int r = 0; r < M_; ++r)
      for (int j = 0; j < M_; ++j)
        c.E[static_cast<std::size_t>(r) * M_ + j] =
            static_cast<fp_t>(a[static_cast<std::size_t>(r)][static_cast<std::size_t>(n + j)]);
    return c;
  };

  for (int d = 1; d <= M_; ++d) {
    if (M_ % d != 0) continue;
    Element g = subfield_generator_p(d);
    std::vector<Element> basis;
    Element acc = one();
    for (int j = 0; j < d; ++j) {
      basis.push_back(acc);
      acc = mul(acc, g);
    }
    SubfieldCache c = build(basis);
    c.d = d;
    c.gen = g;
    sub_.push_back(std::move(c));
  }

  // F_q-coordinate caches for each q-degree e | M/h: basis gamma^l * g^j,
  // column order j*h + l.
  Element gamma = subfield_generator_p(h_);
  for (int e = 1; e <= M_ / h_; ++e) {
    if ((M_ / h_) % e != 0) continue;
    Element g = subfield_generator_p(e * h_);
    std::vector<Element> basis;
    Element gj = one();
    for (int j = 0; j < e; ++j) {
      Element gl = one();
      for (int l = 0; l < h_; ++l) {
        basis.push_back(mul(gj, gl));
        gl = mul(gl, gamma);
      }
      gj = mul(gj, g);
    }
    SubfieldCache c = build(basis);
    c.d = e;
    c.gen = g;
    fqsub_.push_back(std::move(c));
  }
}

const Tower::SubfieldCache& Tower::cache(int d) const {
  for (const auto& c : sub_)
    if (c.d == d) return c;
  throw std::invalid_argument("degree does not divide M");
}

const Tower::SubfieldCache& Tower::fq_cache(int e_q) const {
  for (const auto& c : fqsub_)
    if (c.d == e_q) return c;
  throw std::invalid_argument("q-degree not in the tower");
}

std::vector<fp_t> Tower::subfield_coords_p(const Element& x, int d) const {
  const SubfieldCache& c = cache(d);
  std::vector<fp_t> y(static_cast<std::size_t>(M_), 0);
  for (int r = 0; r < M_; ++r) {
    std::uint32_t s = 0;
    for (int j = 0; j < M_; ++j)
      s += static_cast<std::uint32_t>(c.E[static_cast<std::size_t>(r) * M_ + j]) *
           x.c_[static_cast<std::size_t>(j)];
    y[static_cast<std::size_t>(r)] = static_cast<fp_t>(s % p_);
  }
  for (int r = d; r < M_; ++r)
    if (y[static_cast<std::size_t>(r)])
      throw std::invalid_argument("element outside the subfield");
  y.resize(static_cast<std::size_t>(d));
  return y;
}

Element Tower::from_subfield_coords_p(const std::vector<fp_t>& coords, int d) const {
  const SubfieldCache& c = cache(d);
  if (static_cast<int>(coords.size()) != d)
    throw std::invalid_argument("coordinate length mismatch");
  Element r = zero();
  Element b = one();
  for (int j = 0; j < d; ++j) {
    if (coords[static_cast<std::size_t>(j)]) {
      Element t = mul(b, from_int(coords[static_cast<std::size_t>(j)]));
      r = add(r, t);
    }
    b = mul(b, c.gen);
  }
  return r;
}

std::vector<fp_t> Tower::fq_coords(const Element& x, int e_q) const {
  const SubfieldCache& c = fq_cache(e_q);
  std::vector<fp_t> y(static_cast<std::size_t>(M_), 0);
  for (int r = 0; r < M_; ++r) {
    std::uint32_t s = 0;
    for (int j = 0; j < M_; ++j)
      s += static_cast<std::uint32_t>(c.E[static_cast<std::size_t>(r) * M_ + j]) *
           x.c_[static_cast<std::size_t>(j)];
    y[static_cast<std::size_t>(r)] = static_cast<fp_t>(s % p_);
  }
  int n = e_q * h_;
  for (int r = n; r < M_; ++r)
    if (y[static_cast<std::size_t>(r)])
      throw std::invalid_argument("element outside F_{q^e}");
  std::vector<fp_t> idx(static_cast<std::size_t>(e_q), 0);
  for (int j = 0; j < e_q; ++j) {
    std::uint32_t v = 0;
    for (int l = h_ - 1; l >= 0; --l)
      v = v * p_ + y[static_cast<std::size_t>(j * h_ + l)];
    idx[static_cast<std::size_t>(j)] = static_cast<fp_t>(v);
  }
  return idx;
}

Element Tower::from_fq_coords(const std::vector<fp_t>& idx, int e_q) const {
  const SubfieldCache& c = fq_cache(e_q);
  if (static_cast<int>(idx.size()) != e_q)
    throw std::invalid_argument("coordinate length mismatch");
  Element r = zero();
  Element gj = one();
  for (int j = 0; j < e_q; ++j) {
    if (idx[static_cast<std::size_t>(j)]) {
      r = add(r, mul(gj, sf_element(idx[static_cast<std::size_t>(j)])));
    }
    gj = mul(gj, c.gen);
  }
  return r;
}

void Tower::build_small_field() {
  sf_.p = p_;
  sf_.h = h_;
  sf_.q = q_;
  if (q_ > 256) throw std::invalid_argument("q too large for table arithmetic");
  Element gamma = subfield_generator_p(h_);
  std::vector<Element> elems(q_);
  for (std::uint32_t i = 0; i < q_; ++i) {
    Element e = zero();
    std::uint32_t t = i;
    Element gl = one();
    for (int l = 0; l < h_; ++l) {
      fp_t d = static_cast<fp_t>(t % p_);
      t /= p_;
      if (d) e = add(e, mul(gl, from_int(d)));
      gl = mul(gl, gamma);
    }
    elems[i] = e;
  }
  std::unordered_map<std::uint64_t, fp_t> idx_of;
  for (std::uint32_t i = 0; i < q_; ++i) idx_of[elems[i].pack()] = static_cast<fp_t>(i);

  sf_.add.assign(static_cast<std::size_t>(q_) * q_, 0);
  sf_.mul.assign(static_cast<std::size_t>(q_) * q_, 0);
  sf_.neg.assign(q_, 0);
  sf_.inv.assign(q_, 0);
  sf_.step_delta.assign(q_, 0);
  for (std::uint32_t i = 0; i < q_; ++i) {
    sf_.neg[i] = idx_of.at(neg(elems[i]).pack());
    if (i) sf_.inv[i] = idx_of.at(inverse(elems[i]).pack());
    sf_.step_delta[i] = idx_of.at(sub(elems[(i + 1) % q_], elems[i]).pack());
    for (std::uint32_t j = 0; j < q_; ++j) {
      sf_.add[static_cast<std::size_t>(i) * q_ + j] = idx_of.at(add(elems[i], elems[j]).pack());
      sf_.mul[static_cast<std::size_t>(i) * q_ + j] = idx_of.at(mul(elems[i], elems[j]).pack());
    }
  }
  sf_elems_ = std::move(elems);
  sf_index_of_ = std::move(idx_of);
}

Element Tower::sf_element(fp_t idx) const {
  if (idx >= q_) throw std::invalid_argument("F_q index out of range");
  return sf_elems_[idx];
}

fp_t Tower::sf_index(const Element& x) const {
  auto it = sf_index_of_.find(x.pack());
  if (it == sf_index_of_.end()) throw std::invalid_argument("element outside F_q");
  return it->second;
}

}  // namespace scatmrd
