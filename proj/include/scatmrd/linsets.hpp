#pragma once

// F_q-linear sets of PG(r-1, q^n).
//
// The ambient space V(r, q^n) is presented as a direct sum of fields
// F_{q^{e_1}} + ... + F_{q^{e_l}} with n | e_j and r = sum e_j / n; scalars
// lambda in F_{q^n} act componentwise by field multiplication.  An
// F_q-subspace U of dimension k defines the linear set
//
//   L_U = { <u>_{F_{q^n}} : u in U \ {0} },
//
// and the weight of a point P = <v> is dim_{F_q}(U meet <v>_{F_{q^n}}).
// U is scattered when every point has weight one, i.e. |L_U| = (q^k-1)/(q-1).

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "scatmrd/fields.hpp"
#include "scatmrd/fpmat.hpp"

namespace scatmrd {

struct Ambient {
  std::shared_ptr<const Tower> tw;
  std::vector<int> comps;  // component degrees e_j, in q-units
  int n = 1;               // scalar field degree over F_q

  // Validates n >= 1, comps nonempty, n | e_j, and e_j*h | M for every j.
  static Ambient make(std::shared_ptr<const Tower> tw, std::vector<int> comps, int n);

  int ell() const { return static_cast<int>(comps.size()); }
  int r() const;       // sum e_j / n
  int fp_dim() const;  // h * sum e_j
  int fq_dim() const;  // sum e_j
  int offset(int j) const;  // first F_p coordinate of component j
  bool same(const Ambient& o) const;
};

// A vector of V: one field element per component.
using Vec = std::vector<Element>;

Vec zero_vec(const Ambient& a);
bool vec_is_zero(const Vec& v);
Vec vec_add(const Ambient& a, const Vec& u, const Vec& v);
Vec vec_sub(const Ambient& a, const Vec& u, const Vec& v);
// lam * v for lam in F_{q^n} (or any subfield of every component).
Vec scal_mul(const Ambient& a, const Element& lam, const Vec& v);
// F_p coordinates: concatenation over components of the power-basis
// coordinates of v_j in F_{p^{e_j h}}.
std::vector<fp_t> vec_coords(const Ambient& a, const Vec& v);
Vec vec_from_coords(const Ambient& a, const std::vector<fp_t>& c);

// An F_q-subspace of V in canonical form: the reduced echelon basis of its
// F_p coordinate row space (k*h rows) plus a canonical F_q-basis.
class Subspace {
 public:
  // Spans the given vectors over F_q (closing under scalar multiplication).
  static Subspace from_fq_generators(const Ambient& a, const std::vector<Vec>& gens);
  // Spans F_p coordinate rows that must already be closed under F_q scaling;
  // errors if they are not.
  static Subspace from_closed_rows(const Ambient& a,
                                   const std::vector<std::vector<fp_t>>& rows);
  // Image of an F_q-linear map F_{q^e} -> V; errors when the image rows are
  // not F_q-closed (i.e. the map was not linear).
  static Subspace from_image(const Ambient& a, int domain_e,
                             const std::function<Vec(const Element&)>& map);
  // Image of F_{q^{e1}} x F_{q^{e2}} -> V.
  static Subspace from_image_pair(
      const Ambient& a, int e1, int e2,
      const std::function<Vec(const Element&, const Element&)>& map);

  const Ambient& ambient() const { return amb_; }
  int k() const { return k_; }
  const FpMat& rows() const { return rows_; }
  const std::vector<int>& pivots() const { return pivots_; }
  const std::vector<Vec>& fq_basis() const { return basis_; }

  bool contains(const Vec& v) const;
  bool equals(const Subspace& o) const;

 private:
  Subspace() = default;
  Ambient amb_;
  int k_ = 0;
  FpMat rows_;
  std::vector<int> pivots_;
  std::vector<Vec> basis_;
};

// Weight of the point <v> with respect to U; v must be nonzero.
int weight(const Subspace& u, const Vec& v);

struct LinearSetAnalysis {
  std::uint64_t points = 0;  // |L_U|
  int max_weight = 0;
  // points_by_weight[w] = number of points of weight w (index 0 unused).
  std::vector<std::uint64_t> points_by_weight;
  bool scattered = false;
  Vec witness;  // first vector (odometer order) attaining max_weight
};

// Full weight histogram of L_U by scanning all q^k - 1 nonzero vectors.
// Errors when q^k exceeds 2^22.  Cross-checks the histogram against the
// counting identities and the scattered bound before returning.
LinearSetAnalysis analyze_linear_set(const Subspace& u);

// Early-exit scatteredness test; on failure *witness (if given) receives the
// first vector spanning a point of weight >= 2.
bool is_scattered(const Subspace& u, Vec* witness = nullptr);

// The same subspace viewed in V(r', q^{new_n}): the scalar field is re-read
// as F_{q^{new_n}}, which must divide every component degree.
Subspace rescatter_view(const Subspace& u, int new_n);

// Lattice operations; ambients must match (direct_sum: same tower and n).
Subspace intersect(const Subspace& u, const Subspace& w);
Subspace subspace_sum(const Subspace& u, const Subspace& w);
// U + W inside V_U + V_W, components concatenated.
Subspace direct_sum(const Subspace& u, const Subspace& w);

}  // namespace scatmrd
