#pragma once

// Ambient finite field F_{p^M} with its lattice of subfields F_{p^d}, d | M.
//
// One field object (Tower) hosts every extension a computation needs: the
// subfield F_{p^d} is the set of x with x^{p^d} = x, so towers of extensions
// never require embedding maps.  All constructions are deterministic:
//
//   * the modulus is the least monic irreducible of degree M over F_p, where
//     polynomials are ordered by pack(f) = sum f_i p^i (ascending);
//   * mu is the least primitive element in the same element order;
//   * canonical generators, bases and search orders all derive from mu.
//
// The working base field F_q, q = p^h, is fixed per tower; interfaces taking
// degrees "in q-units" scale them by h internally.

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

namespace scatmrd {

using fp_t = std::uint8_t;

// Hard caps keeping elements POD-sized and pack()/order arithmetic in uint64.
inline constexpr int kMaxAmbientDegree = 32;

class Tower;

// Element of F_{p^M}: coefficients of the representative polynomial,
// ascending degree, length M.  Owned by a Tower; arithmetic asserts both
// operands share the owner.
class Element {
 public:
  Element() : tw_(nullptr) { c_.fill(0); }

  const Tower* owner() const { return tw_; }
  fp_t coeff(int i) const { return c_[static_cast<std::size_t>(i)]; }

  Element operator+(const Element& o) const;
  Element operator-(const Element& o) const;
  Element operator*(const Element& o) const;
  Element operator-() const;
  bool operator==(const Element& o) const;
  bool operator!=(const Element& o) const { return !(*this == o); }

  bool is_zero() const;

  // Numeric key giving the canonical element order (and a hash/map key).
  std::uint64_t pack() const;

  std::vector<int> coeff_vector() const;  // ascending degree, length M
  std::string to_string() const;          // e.g. "x^3+2x+1"

 private:
  friend class Tower;
  const Tower* tw_;
  std::array<fp_t, kMaxAmbientDegree> c_;
};

// Arithmetic tables for the small base field F_q, q = p^h <= 256.  Entries of
// matrices over F_q are stored as indices: index i encodes sum d_l gamma^l
// where (d_0, ..., d_{h-1}) are the base-p digits of i and gamma is the
// canonical generator of F_q.  For h = 1 the index is just the residue.
struct SmallField {
  std::uint32_t p = 0;
  int h = 0;
  std::uint32_t q = 0;
  std::vector<fp_t> add;   // q*q
  std::vector<fp_t> mul;   // q*q
  std::vector<fp_t> neg;   // q
  std::vector<fp_t> inv;   // q, inv[0] unused
  // Stepping delta[d] = elem(d+1 mod q) - elem(d), used by odometer scans.
  std::vector<fp_t> step_delta;

  fp_t a(fp_t x, fp_t y) const { return add[static_cast<std::size_t>(x) * q + y]; }
  fp_t m(fp_t x, fp_t y) const { return mul[static_cast<std::size_t>(x) * q + y]; }
};

class Tower {
 public:
  // Builds F_{p^M} with base field F_{p^h}.  declared_p_degrees lists the
  // intermediate extension degrees (in p-units) the caller intends to use;
  // each must divide M.  h must divide M as well.
  static std::shared_ptr<const Tower> make(std::uint32_t p, int M,
                                           std::vector<int> declared_p_degrees,
                                           int h = 1);

  // Convenience: degrees in q-units, M = h * max(q_degrees); every listed
  // degree must divide the largest.
  static std::shared_ptr<const Tower> make_q(std::uint32_t p, int h,
                                             std::vector<int> q_degrees);

  std::uint32_t p() const { return p_; }
  int h() const { return h_; }
  std::uint32_t q() const { return q_; }
  int M() const { return M_; }
  const std::vector<fp_t>& modulus() const { return modulus_; }  // length M+1
  const std::vector<int>& declared_degrees() const { return declared_; }

  Element zero() const;
  Element one() const;
  Element mu() const;  // least primitive element
  // Element with the given coefficient vector (length <= M).
  Element from_coeffs(const std::vector<int>& coeffs) const;
  Element from_pack(std::uint64_t v) const;
  Element from_int(std::uint64_t c) const;  // constant c mod p

  Element add(const Element& a, const Element& b) const;
  Element sub(const Element& a, const Element& b) const;
  Element mul(const Element& a, const Element& b) const;
  Element neg(const Element& a) const;
  Element inverse(const Element& a) const;  // errors on zero
  Element pow(Element base, std::uint64_t e) const;

  std::uint64_t order() const { return order_; }  // p^M - 1
  std::uint64_t element_order(const Element& a) const;  // errors on zero

  // x^{p^k} via the precomputed Frobenius matrices; k is reduced mod M.
  Element frobenius_p(const Element& x, int k) const;
  // x^{q^k} (q-unit Frobenius).
  Element frobenius(const Element& x, int k) const { return frobenius_p(x, k * h_); }

  bool in_subfield_p(const Element& x, int d) const;  // d | M required
  bool in_subfield(const Element& x, int d_q) const { return in_subfield_p(x, d_q * h_); }

  // Canonical generator of F_{p^d}: mu^((p^M-1)/(p^d-1)); d | M.
  Element subfield_generator_p(int d) const;
  Element subfield_generator(int d_q) const { return subfield_generator_p(d_q * h_); }

  // All p^d elements of F_{p^d} in canonical (ascending pack) order.
  // Intended for small subfields; errors when p^d > 2^22.
  std::vector<Element> subfield_elements_p(int d) const;
  std::vector<Element> subfield_elements(int d_q) const {
    return subfield_elements_p(d_q * h_);
  }

  // N_{q^n/q^hdeg}(x) = prod of the n/hdeg conjugates x^{q^{hdeg*j}}.
  // Degrees in q-units; hdeg | n; errors when x lies outside F_{q^n}.
  Element relative_norm(const Element& x, int n_deg, int h_deg) const;
  // Tr_{q^n/q^hdeg}(x) = sum of the same conjugates.
  Element relative_trace(const Element& x, int n_deg, int h_deg) const;

  // Coordinates of x in the power basis {g^0, ..., g^{d-1}} of F_{p^d},
  // g = subfield_generator_p(d).  Errors when x lies outside the subfield.
  std::vector<fp_t> subfield_coords_p(const Element& x, int d) const;
  Element from_subfield_coords_p(const std::vector<fp_t>& coords, int d) const;

  // F_q-coordinates of x in the basis {g^0, ..., g^{e-1}} of F_{q^e} over
  // F_q (g = subfield_generator(e)).  Returned as SmallField indices.
  std::vector<fp_t> fq_coords(const Element& x, int e_q) const;
  Element from_fq_coords(const std::vector<fp_t>& idx, int e_q) const;

  const SmallField& small_field() const { return sf_; }
  Element sf_element(fp_t idx) const;      // index -> element of F_q
  fp_t sf_index(const Element& x) const;   // element of F_q -> index

  bool same_field(const Tower& o) const {
    return p_ == o.p_ && h_ == o.h_ && M_ == o.M_ && modulus_ == o.modulus_;
  }

 private:
  Tower() = default;
  void build_frobenius();
  void build_subfield_caches();
  void build_small_field();

  std::uint32_t p_ = 0, q_ = 0;
  int h_ = 1, M_ = 0;
  std::uint64_t order_ = 0;
  std::vector<fp_t> modulus_;
  std::vector<int> declared_;
  std::vector<std::uint64_t> order_prime_factors_;
  Element mu_;
  // frob_[k] is the M x M matrix of x -> x^{p^k}, row-major.
  std::vector<std::vector<fp_t>> frob_;
  struct SubfieldCache {
    int d = 0;
    Element gen;
    // E is the M x M elimination transform with (E * coeffs)[0..d-1] the
    // power-basis coordinates and (E * coeffs)[d..M-1] = 0 iff member.
    std::vector<fp_t> E;
    std::vector<int> perm;  // row order used by the solve
  };
  std::vector<SubfieldCache> sub_;  // one per divisor of M
  const SubfieldCache& cache(int d) const;
  // Same elimination idea for F_q-coordinates: basis gamma^l * g^j of
  // F_{q^e} over F_p, grouped h digits per F_q-entry.  Keyed by q-degree e.
  std::vector<SubfieldCache> fqsub_;
  const SubfieldCache& fq_cache(int e_q) const;
  SmallField sf_;
  std::vector<Element> sf_elems_;
  std::unordered_map<std::uint64_t, fp_t> sf_index_of_;
};

// Prime factorization by trial division (n < 2^48 at desk scale).
std::vector<std::uint64_t> prime_factors(std::uint64_t n);

}  // namespace scatmrd
