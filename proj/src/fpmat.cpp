#include "scatmrd/fpmat.hpp"

#include <algorithm>
#include <stdexcept>

namespace scatmrd {
namespace {

std::uint32_t inv_mod(std::uint32_t a, std::uint32_t p) {
  std::uint64_t r = 1, b = a % p, e = p - 2;
  while (e) {
    if (e & 1) r = r * b % p;
    b = b * b % p;
    e >>= 1;
  }
  return static_cast<std::uint32_t>(r);
}

void scale_row(std::vector<fp_t>& r, std::uint32_t c, std::uint32_t p) {
  for (fp_t& v : r) v = static_cast<fp_t>(static_cast<std::uint64_t>(v) * c % p);
}

// r -= c * s (mod p)
void axpy_row(std::vector<fp_t>& r, std::uint32_t c, const std::vector<fp_t>& s,
              std::uint32_t p) {
  for (std::size_t j = 0; j < r.size(); ++j) {
    std::uint64_t sub = static_cast<std::uint64_t>(c) * s[j] % p;
    r[j] = static_cast<fp_t>((r[j] + p - sub) % p);
  }
}

}  // namespace

void FpMat::append_row(std::vector<fp_t> r) {
  if (static_cast<int>(r.size()) != cols)
    throw std::invalid_argument("row width mismatch");
  rows.push_back(std::move(r));
}

std::vector<int> FpMat::rref() {
  std::vector<int> pivots;
  int row = 0;
  for (int col = 0; col < cols && row < nrows(); ++col) {
    int piv = -1;
    for (int r = row; r < nrows(); ++r)
      if (rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)]) {
        piv = r;
        break;
      }
    if (piv < 0) continue;
    std::swap(rows[static_cast<std::size_t>(piv)], rows[static_cast<std::size_t>(row)]);
    auto& pr = rows[static_cast<std::size_t>(row)];
    std::uint32_t lead = pr[static_cast<std::size_t>(col)];
    if (lead != 1) scale_row(pr, inv_mod(lead, p), p);
    for (int r = 0; r < nrows(); ++r) {
      if (r == row) continue;
      std::uint32_t c = rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)];
      if (c) axpy_row(rows[static_cast<std::size_t>(r)], c, pr, p);
    }
    pivots.push_back(col);
    ++row;
  }
  rows.resize(static_cast<std::size_t>(row));
  return pivots;
}

void FpMat::reduce_row(std::vector<fp_t>& r, const std::vector<int>& pivots) const {
  for (std::size_t i = 0; i < pivots.size(); ++i) {
    std::uint32_t c = r[static_cast<std::size_t>(pivots[i])];
    if (c) axpy_row(r, c, rows[i], p);
  }
}

bool FpMat::contains(std::vector<fp_t> r, const std::vector<int>& pivots) const {
  reduce_row(r, pivots);
  return std::all_of(r.begin(), r.end(), [](fp_t v) { return v == 0; });
}

int fp_rank(FpMat m) { return static_cast<int>(m.rref().size()); }

std::vector<std::vector<fp_t>> fp_nullspace(const FpMat& a) {
  FpMat m = a;
  std::vector<int> pivots = m.rref();
  std::vector<bool> is_pivot(static_cast<std::size_t>(a.cols), false);
  for (int c : pivots) is_pivot[static_cast<std::size_t>(c)] = true;
  std::vector<std::vector<fp_t>> basis;
  for (int free = 0; free < a.cols; ++free) {
    if (is_pivot[static_cast<std::size_t>(free)]) continue;
    std::vector<fp_t> v(static_cast<std::size_t>(a.cols), 0);
    v[static_cast<std::size_t>(free)] = 1;
    // back-substitute: pivot var = -coeff of free column
    for (std::size_t i = 0; i < pivots.size(); ++i) {
      std::uint32_t c = m.rows[i][static_cast<std::size_t>(free)];
      if (c) v[static_cast<std::size_t>(pivots[i])] = static_cast<fp_t>((a.p - c) % a.p);
    }
    basis.push_back(std::move(v));
  }
  return basis;
}

FpMat fp_inverse(const FpMat& a) {
  int n = a.nrows();
  if (n != a.cols) throw std::invalid_argument("inverse of a non-square matrix");
  FpMat work(a.p, 2 * n);
  for (int i = 0; i < n; ++i) {
    std::vector<fp_t> r(static_cast<std::size_t>(2 * n), 0);
    std::copy(a.rows[static_cast<std::size_t>(i)].begin(),
              a.rows[static_cast<std::size_t>(i)].end(), r.begin());
    r[static_cast<std::size_t>(n + i)] = 1;
    work.rows.push_back(std::move(r));
  }
  std::vector<int> pivots = work.rref();
  if (static_cast<int>(pivots.size()) != n || pivots[static_cast<std::size_t>(n - 1)] != n - 1)
    throw std::invalid_argument("matrix is singular");
  FpMat out(a.p, n);
  for (int i = 0; i < n; ++i)
    out.rows.emplace_back(work.rows[static_cast<std::size_t>(i)].begin() + n,
                          work.rows[static_cast<std::size_t>(i)].end());
  return out;
}

std::vector<fp_t> fp_apply(const FpMat& a, const std::vector<fp_t>& x) {
  if (static_cast<int>(x.size()) != a.cols)
    throw std::invalid_argument("vector length mismatch");
  std::vector<fp_t> y(a.rows.size(), 0);
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    std::uint64_t s = 0;
    for (std::size_t j = 0; j < x.size(); ++j)
      s += static_cast<std::uint64_t>(a.rows[i][j]) * x[j];
    y[i] = static_cast<fp_t>(s % a.p);
  }
  return y;
}

FpMat fp_rowspace_intersection(const FpMat& a, const FpMat& b) {
  if (a.p != b.p || a.cols != b.cols)
    throw std::invalid_argument("incompatible row spaces");
  int w = a.cols;
  // Zassenhaus: reduce rows (u | u) for u in a and (v | 0) for v in b; the
  // echelon rows with zero left half carry the intersection in the right half.
  FpMat big(a.p, 2 * w);
  for (const auto& u : a.rows) {
    std::vector<fp_t> r(static_cast<std::size_t>(2 * w), 0);
    std::copy(u.begin(), u.end(), r.begin());
    std::copy(u.begin(), u.end(), r.begin() + w);
    big.rows.push_back(std::move(r));
  }
  for (const auto& v : b.rows) {
    std::vector<fp_t> r(static_cast<std::size_t>(2 * w), 0);
    std::copy(v.begin(), v.end(), r.begin());
    big.rows.push_back(std::move(r));
  }
  big.rref();
  FpMat out(a.p, w);
  for (const auto& r : big.rows) {
    bool left_zero = std::all_of(r.begin(), r.begin() + w, [](fp_t v) { return v == 0; });
    if (left_zero) {
      std::vector<fp_t> right(r.begin() + w, r.end());
      bool nz = std::any_of(right.begin(), right.end(), [](fp_t v) { return v != 0; });
      if (nz) out.rows.push_back(std::move(right));
    }
  }
  out.rref();
  return out;
}

FqSpan fq_row_span(std::uint32_t p, int h, int width,
                   const std::vector<std::vector<fp_t>>& gens,
                   const std::function<std::vector<fp_t>(const std::vector<fp_t>&)>& scale_gamma,
                   bool close) {
  FqSpan out;
  out.rref = FpMat(p, width);
  for (const auto& g : gens) {
    if (static_cast<int>(g.size()) != width)
      throw std::invalid_argument("generator width mismatch");
    out.rref.rows.push_back(g);
    if (close) {
      std::vector<fp_t> r = g;
      for (int l = 1; l < h; ++l) {
        r = scale_gamma(r);
        out.rref.rows.push_back(r);
      }
    }
  }
  out.pivots = out.rref.rref();
  int rank = out.rref.nrows();
  if (rank % h != 0)
    throw std::invalid_argument("row space is not closed under F_q scaling");

  // Extract an F_q-basis: greedily take echelon rows outside the F_q-closure
  // accumulated so far.
  FpMat acc(p, width);
  std::vector<int> acc_piv;
  for (const auto& row : out.rref.rows) {
    if (acc.contains(row, acc_piv)) continue;
    out.fq_basis.push_back(row);
    std::vector<fp_t> r = row;
    for (int l = 0; l < h; ++l) {
      acc.rows.push_back(r);
      if (l + 1 < h) r = scale_gamma(r);
    }
    acc_piv = acc.rref();
  }
  if (acc.nrows() != rank)
    throw std::invalid_argument("row space is not closed under F_q scaling");
  out.k = rank / h;
  return out;
}

}  // namespace scatmrd
