#pragma once

// Dense matrices over the prime field F_p, sized for coordinate work
// (widths below ~64): reduced echelon forms, ranks, kernels, row reduction
// against a fixed echelon basis, and F_q-closed row spaces.

#include <cstdint>
#include <functional>
#include <vector>

#include "scatmrd/fields.hpp"

namespace scatmrd {

struct FpMat {
  std::uint32_t p = 2;
  int cols = 0;
  std::vector<std::vector<fp_t>> rows;

  FpMat() = default;
  FpMat(std::uint32_t p_, int cols_) : p(p_), cols(cols_) {}

  int nrows() const { return static_cast<int>(rows.size()); }
  void append_row(std::vector<fp_t> r);

  // In-place reduced row echelon form; zero rows are dropped.
  // Returns the pivot columns in row order.
  std::vector<int> rref();

  // Reduces r against this matrix, which must already be in rref.
  // pivots must be the list rref() returned.
  void reduce_row(std::vector<fp_t>& r, const std::vector<int>& pivots) const;

  bool contains(std::vector<fp_t> r, const std::vector<int>& pivots) const;

  bool operator==(const FpMat& o) const {
    return p == o.p && cols == o.cols && rows == o.rows;
  }
};

int fp_rank(FpMat m);  // by value: ranks a copy

// Basis of {x : A x = 0} where A acts on column vectors (rows are the
// equations).  Returned rows have length A.cols.
std::vector<std::vector<fp_t>> fp_nullspace(const FpMat& a);

// Inverse of a square matrix; throws when singular.
FpMat fp_inverse(const FpMat& a);

// y = A x over F_p.
std::vector<fp_t> fp_apply(const FpMat& a, const std::vector<fp_t>& x);

// Intersection of two row spaces (Zassenhaus).  Inputs need not be reduced.
FpMat fp_rowspace_intersection(const FpMat& a, const FpMat& b);

// An F_q-closed row space, q = p^h: the canonical F_p rref of the span plus
// an extracted F_q-basis (h F_p-dimensions per F_q-dimension).
//
// scale_gamma multiplies the vector a row represents by the canonical
// generator gamma of F_q.  With close = true the span of the generators is
// closed under gamma before reducing; with close = false the generators're
// required to span an F_q-closed space already (verified, throws otherwise).
struct FqSpan {
  FpMat rref;                             // canonical form
  std::vector<int> pivots;
  std::vector<std::vector<fp_t>> fq_basis;  // k rows
  int k = 0;                              // F_q-dimension
};
FqSpan fq_row_span(std::uint32_t p, int h, int width,
                   const std::vector<std::vector<fp_t>>& gens,
                   const std::function<std::vector<fp_t>(const std::vector<fp_t>&)>& scale_gamma,
                   bool close);

}  // namespace scatmrd
