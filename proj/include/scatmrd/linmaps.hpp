#pragma once

// Linearized polynomials f(x) = sum_i c_i x^{q^i} over F_{q^d} (reduced mod
// x^{q^d} - x), their matrices over F_q, and matrices over F_q in general.
// These are exactly the F_q-linear endomorphisms of F_{q^d}.

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "scatmrd/fields.hpp"
#include "scatmrd/linsets.hpp"

namespace scatmrd {

// Dense matrix over F_q; entries are SmallField indices of the owning tower.
struct FqMat {
  std::shared_ptr<const Tower> tw;
  int m = 0, n = 0;
  std::vector<fp_t> a;  // row-major, m * n entries

  static FqMat zero(std::shared_ptr<const Tower> tw, int m, int n);
  static FqMat identity(std::shared_ptr<const Tower> tw, int n);

  fp_t at(int i, int j) const { return a[static_cast<std::size_t>(i) * n + j]; }
  fp_t& at(int i, int j) { return a[static_cast<std::size_t>(i) * n + j]; }

  bool operator==(const FqMat& o) const;
  bool operator!=(const FqMat& o) const { return !(*this == o); }
};

FqMat fq_add(const FqMat& x, const FqMat& y);
void fq_add_into(FqMat& dst, const FqMat& src);       // dst += src
FqMat fq_scale(fp_t c, const FqMat& x);               // entrywise c * x
FqMat fq_mul(const FqMat& x, const FqMat& y);
FqMat fq_transpose(const FqMat& x);
int fq_rank(FqMat x);                                 // destructive on the copy
FqMat fq_inverse(const FqMat& x);                     // errors on singular
bool fq_is_zero(const FqMat& x);

// f = sum_{i<d} coef[i] x^{q^i} acting on F_{q^d}; coef[i] in F_{q^d}.
struct LinearizedPoly {
  std::shared_ptr<const Tower> tw;
  int d = 0;
  std::vector<Element> coef;  // length d

  static LinearizedPoly make(std::shared_ptr<const Tower> tw, int d,
                             std::vector<Element> coef);
  // Monomial c x^{q^i}.
  static LinearizedPoly monomial(std::shared_ptr<const Tower> tw, int d, int i,
                                 const Element& c);

  Element eval(const Element& x) const;  // x must lie in F_{q^d}
  bool is_zero() const;
};

LinearizedPoly lp_add(const LinearizedPoly& f, const LinearizedPoly& g);
LinearizedPoly lp_sub(const LinearizedPoly& f, const LinearizedPoly& g);
// (f o g)(x) = f(g(x)), reduced mod x^{q^d} - x.
LinearizedPoly lp_compose(const LinearizedPoly& f, const LinearizedPoly& g);
// Adjoint with respect to the bilinear form Tr_{q^d/q}(xy):
// Tr(y f(x)) = Tr(x f^(y)) for all x, y.
LinearizedPoly lp_adjoint(const LinearizedPoly& f);

// Matrix of f in the canonical power basis {g^j} of F_{q^d} over F_q.
FqMat lp_to_matrix(const LinearizedPoly& f);

// Kernel of f as a subspace of the one-component ambient V(1, q^d).
Subspace lp_kernel(const LinearizedPoly& f);

// The unique linearized polynomial agreeing with the given F_q-linear map on
// F_{q^d}, by Moore-matrix interpolation on the canonical basis.  Checks the
// result against the map on the basis; a non-linear map is only detected as
// far as those checks go.
LinearizedPoly lp_from_map(std::shared_ptr<const Tower> tw, int d,
                           const std::function<Element(const Element&)>& map);

// F_q-coordinates (SmallField indices) of v in an independent F_q-basis of a
// subspace of the ambient; errors when v is outside the span.
std::vector<fp_t> fq_coords_in_basis(const Ambient& a, const std::vector<Vec>& basis,
                                     const Vec& v);

}  // namespace scatmrd
