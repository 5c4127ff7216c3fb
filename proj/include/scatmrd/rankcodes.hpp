#pragma once

// Rank-metric codes: F_q-linear spaces of m x n matrices over F_q, with the
// distance d(A, B) = rank(A - B).  Builders cover codes induced by a
// half-dimensional subspace U through a kernel functional G (codeword for v
// is the matrix of G composed with scalar multiplication by v), restrictions
// of a code's maps to a subfield of their domain, Gabidulin codes, Sheekey's
// two-coefficient codes attached to a linearized polynomial, and the explicit
// two-variable families induced by the plane and monomial constructions.
// Distance scans are exact (exhaustive odometer enumeration) or sampled, and
// spans are compared through canonical echelon forms.

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "scatmrd/constructions.hpp"
#include "scatmrd/fields.hpp"
#include "scatmrd/linmaps.hpp"
#include "scatmrd/linsets.hpp"

namespace scatmrd {

// How the cached minimum distance was established.  Sampled scans only ever
// bound the distance from above and never count as verification.
enum class VerifStatus { unverified, sampled, theorem, exhaustive };
std::string to_string(VerifStatus s);

// Which builder produced the code.
enum class Provenance { from_subspace, sheekey, gabidulin, explicit_fv, derived };
std::string to_string(Provenance s);

struct RankCode {
  std::shared_ptr<const Tower> tw;  // supplies q = p^h and entry arithmetic
  int m = 0, n = 0;                 // codeword shape over F_q
  // Canonical F_q-basis: the echelon form of the span over the flattened
  // F_p coordinates, with one representative per F_q-dimension.
  std::vector<FqMat> generators;
  int dim = 0;  // F_q-dimension = generators.size()
  std::optional<int> d_min;
  VerifStatus status = VerifStatus::unverified;
  Provenance provenance = Provenance::derived;
};

// Canonicalizes a spanning set (closing it under F_q scaling) into a
// RankCode.  All matrices must share the tower and the m x n shape.
RankCode make_rank_code(std::shared_ptr<const Tower> tw, int m, int n,
                        const std::vector<FqMat>& spanning, Provenance prov);

struct CodeParams {
  int m = 0, n = 0;
  std::uint32_t p = 2;
  int h = 1;
  int d = 0;
  int dim = 0;  // F_q-dimension
};

// Shape, field, cached distance and dimension; errors when d_min is unset.
CodeParams code_params(const RankCode& c);
// Singleton bound q^dim <= q^{max(m,n) (min(m,n) - d + 1)}, as exponents.
bool singleton_holds(const CodeParams& cp);

// An F_q-linear functional V -> F_{q^{rn/2}} used as the kernel map G; it
// must vanish exactly on the subspace U it is paired with.
using GMap = std::function<Element(const Vec&)>;

// The code {matrix of G o tau_v : v in V} where tau_v(lambda) = lambda v,
// lambda in F_{q^n}.  U must have F_q-dimension rn/2 and maximum weight
// i < n; the parameters are then (rn/2, n, q; n - i) and the code is MRD
// exactly when U is scattered.  Without G, the canonical choice projects
// onto the complement of U spanned by the unit vectors at the non-pivot
// F_q-coordinates of U's echelon form.
RankCode code_from_subspace(const Subspace& u,
                            const std::optional<GMap>& g = std::nullopt);

struct OmegaF {
  Element omega;
  LinearizedPoly f;
};

// For U of F_q-dimension D/2 inside the single-component ambient F_{q^D}
// (D even): the least omega outside F_{q^{D/2}} with U and omega F_{q^{D/2}}
// meeting trivially, and the unique linearized f with U = {x + omega f(x)}.
OmegaF recover_omega_f(const Subspace& u);

// S_f = {(alpha x + beta f(x)) restricted to F_{q^n}} for f over F_{q^D},
// n | D (so r = 2D/n is even).  When the graph {(x, f(x))} is scattered in
// V(2D/n, q^n) the code is MRD with parameters (D, n, q; n-1); otherwise it
// is still built but left unverified.
RankCode sheekey_code(const LinearizedPoly& f, int n);

// Restricts every codeword map to the subfield F_{q^{n_new}} of the domain
// F_{q^{c.n}}; the resulting shape is m x n_new.
RankCode restriction_code(const RankCode& c, int n_new);

// Codewords x -> a_0 x + a_1 x^{q^s} + ... + a_{k-1} x^{q^{s(k-1)}} over
// F_{q^n}, with 1 <= k < n and gcd(n, s) = 1: MRD with d = n - k + 1.
RankCode gabidulin_code(const QParams& q, int n, int k, int s);

// The explicit codes of the odd-r families: codewords are the maps
//   F_v(x, y) = f(x v_1 + y v_0 + x v_0 A_0) - x A_1 v_0 - y v_1
// on F_{q^t} x F_{q^t} with values in F_{q^{rt}}, indexed by
// v = omega v_0 + v_1.  Stored row-per-domain-basis-vector, so the shape is
// 2t x rt and the parameters are (2t, rt, q; 2t-1).
RankCode explicit_fv_code(const PlaneConstructionParams& pp);
RankCode explicit_fv_code(const MonomialParams& mp);

struct ScanMode {
  bool exhaustive = true;
  std::uint64_t budget = std::uint64_t{1} << 22;  // exhaustive codeword cap
  std::uint64_t samples = 0;                      // sampled draw count
  std::uint64_t seed = 0;

  static ScanMode exhaustive_mode(std::uint64_t budget = std::uint64_t{1} << 22);
  static ScanMode sample_mode(std::uint64_t samples, std::uint64_t seed);
};

struct DistanceReport {
  int d = 0;
  // True only for exhaustive scans; a sampled result is an upper bound on
  // the distance, never an exact value.
  bool exact = false;
  std::uint64_t scanned = 0;
  // Exhaustive: least codeword enumeration index attaining d (coefficient
  // odometer order).  Sampled: ordinal of the attaining draw.
  std::uint64_t witness_index = 0;
  FqMat witness;
};

// Minimum rank over nonzero codewords.  Exhaustive mode enumerates all
// q^dim - 1 coefficient vectors (errors beyond mode.budget) and is split
// across SCATMRD_WORKERS threads; the result and witness are independent of
// the partitioning (min distance, then least index).  Sample mode draws
// mode.samples nonzero coefficient vectors from mt19937_64(mode.seed).
DistanceReport min_rank_distance(const RankCode& c, const ScanMode& mode);

// Writes an exhaustive result into the cache; a sampled result only
// cross-checks the cache (it can contradict, never upgrade it).
void cache_distance(RankCode& c, const DistanceReport& r);

// True iff q^dim meets the Singleton bound; requires d_min established by an
// exhaustive scan or by theorem.
bool is_mrd(const RankCode& c);

// Exact span equality via canonical echelon forms; shapes and fields must
// match.
bool codes_equal(const RankCode& c1, const RankCode& c2);

// For two kernel functionals G, Gbar with kernel exactly U: the invertible
// m x m matrix H with H (G o tau_v) = Gbar o tau_v for every v, exhibiting
// the equivalence of the two induced codes.
FqMat equivalence_witness_for_G_change(const Subspace& u, const GMap& g,
                                       const GMap& gbar);

// Entrywise transpose of every codeword; rank-preserving, so the cached
// distance and its status carry over.  Involution.
RankCode transpose_code(const RankCode& c);

}  // namespace scatmrd
