#pragma once

// Builders for maximum scattered F_q-subspaces.
//
// The central family lives in the projective plane PG(2, q^{2t}): for
// suitable a, b in F_{q^{3t}}^* and omega in F_{q^{2t}} \ F_{q^t},
//
//   U = { a x^{q^i} + b x^{q^{2t+i}} + omega x : x in F_{q^{3t}} }
//
// is a scattered F_q-subspace of dimension 3t of F_{q^{6t}} = V(3, q^{2t}).
// The coefficients are found in two deterministic searches:
//
//   1. find_nonscattered_binomial picks (a, b) whose graph subspace
//      {(x, a x^{q^i} + b x^{q^{2t+i}})} is NOT scattered on the projective
//      line PG(1, q^{3t}), certified by a witness pair (lambda, x_0) with
//      f(lambda x_0) = lambda f(x_0), lambda outside F_q;
//   2. find_shift_c turns that failure into a shift c in F_{q^{3t}}^* such
//      that f_{i,ca,cb}(x)/x avoids F_{q^t} for every nonzero x, which is
//      exactly the sufficient condition for U (with the shifted pair) to be
//      scattered.
//
// Alongside the plane family the module builds the classical comparison
// families: monomial subspaces omega x + a x^{q^i} in V(r, q^{2t}) for odd r,
// Frobenius-graph subspaces {(x, x^{q^s})} (pseudoregulus type), and the
// four-component family {(x, y, x^q, y^{q^k})} together with its
// two-component re-coordinatization.
//
// Every builder re-verifies scatteredness exhaustively before returning and
// every "there exists" scan walks the canonical (ascending pack) element
// order, so fixed inputs always produce identical outputs.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "scatmrd/fields.hpp"
#include "scatmrd/linmaps.hpp"
#include "scatmrd/linsets.hpp"

namespace scatmrd {

// Base-field descriptor: q = p^h.
struct QParams {
  std::uint32_t p = 2;
  int h = 1;
};

// One step of a deterministic search: a short label plus the integer it
// examined (element pack values, coset indices, chosen exponents).
struct TraceStep {
  std::string label;
  std::uint64_t value = 0;
  bool operator==(const TraceStep&) const = default;
};

// Ordered log of every candidate a search examined, ending with the
// accepting witness.  Re-running the same search must reproduce the trace
// exactly; a replay therefore re-executes and compares.
struct SearchTrace {
  std::vector<TraceStep> steps;
  void log(std::string label, std::uint64_t value) {
    steps.push_back(TraceStep{std::move(label), value});
  }
  void append(const SearchTrace& o) {
    steps.insert(steps.end(), o.steps.begin(), o.steps.end());
  }
  bool operator==(const SearchTrace&) const = default;
};

// g(x) = (x - x^{q^i}) (x^{q^t} - x^{q^{t+i}}) (x^{q^{2t}} - x^{q^{2t+i}})
//      + (x^{q^{2t+i}} - x) (x^{q^i} - x^{q^t}) (x^{q^{t+i}} - x^{q^{2t}}).
//
// g vanishes on F_q, and for lambda outside F_{q^3} it vanishes exactly when
// N_{q^{3t}/q^t}(alpha_lambda) = -1 with alpha_lambda = binomial_alpha below.
// A root-count bound keeps g from vanishing on all of F_{q^{3t}} \ F_{q^3},
// which is what makes the lambda scan below total.
// Requires x in F_{q^{3t}} (3t a q-degree of x's field) and gcd(i, t) = 1.
Element g_eval(int t, int i, const Element& x);

// alpha_lambda = (lambda - lambda^{q^i}) / (lambda^{q^{2t+i}} - lambda).
// Requires gcd(i, t) = 1 and lambda in F_{q^{3t}} \ F_{q^3} (both the
// numerator and the denominator are then nonzero for lambda outside F_q).
Element binomial_alpha(int t, int i, const Element& lambda);

// Result of the non-scattered binomial search.  The pair (a, b) satisfies
// the norm condition N_{q^{3t}/q^t}(a) != -N_{q^{3t}/q^t}(b), and the
// witness certifies non-scatteredness of {(x, f(x))}: lambda lies outside
// F_q, x0 is nonzero, and f(lambda x0) = lambda f(x0), so the point spanned
// by (x0, f(x0)) has weight at least 2.
struct BinomialSearch {
  std::shared_ptr<const Tower> tw;
  int t = 0;
  int i = 0;
  Element a, b;
  Element lambda;
  Element x0;
  SearchTrace trace;
};

// Searches for the canonical non-scattered binomial f = a x^{q^i} +
// b x^{q^{2t+i}} on F_{q^{3t}}.  When gcd(i, t) = 1 the scan follows the
// norm argument: find lambda outside F_{q^3} with g(lambda) != 0, fix a = 1,
// pick the least b with N_{q^{3t}/q^t}(b) = N(alpha_lambda), and solve
// x0^{q^{2t+i}-q^i} = (a/b) alpha_lambda (solvable because the right side
// has relative norm one).  When d = gcd(i, t) > 1 the map f is F_{q^d}-linear
// and any (a, b) with the norm condition works; the witness is the least
// element of F_{q^d} \ F_q acting on x0 = 1.
// Requires t >= 2 and 1 <= i <= 3t-1.
//
// The standalone overload builds its own canonical tower for F_{q^{3t}};
// the tower overload runs inside the subfield F_{q^{3t}} of the given tower
// (used by the plane builder so the results live in its F_{q^{6t}} field).
BinomialSearch find_nonscattered_binomial(const QParams& q, int t, int i);
BinomialSearch find_nonscattered_binomial_in(std::shared_ptr<const Tower> tw,
                                             int t, int i);

// Result of the shift search: c = mu_{3t}^{-d} for the least coset index d
// such that the image of x -> f_{i,a,b}(x)/x misses mu_{3t}^d F_{q^t}^*,
// where mu_{3t} is the canonical generator of F_{q^{3t}}^*.  Then
// f_{i,ca,cb}(x)/x avoids F_{q^t} for every nonzero x (re-verified
// exhaustively before returning).
struct ShiftSearch {
  Element c;
  int coset = 0;  // the empty coset index d
  SearchTrace trace;
};

// Requires gcd(i, t) = 1, both coefficients nonzero in F_{q^{3t}}, and the
// norm condition N(a) != -N(b) (otherwise 0 would lie in the image and no
// shift could work); rejects violations with invalid_argument.  If every
// coset meets the image -- which happens exactly when the binomial's graph
// is scattered -- reports failure instead of fabricating a shift.
ShiftSearch find_shift_c(int t, int i, const Element& a, const Element& b);

// Parameters of the plane construction, assembled by build_scattered_plane:
// U = { a x^{q^i} + b x^{q^{2t+i}} + omega x } with omega^2 = omega A0 + A1,
// omega in F_{q^{2t}} \ F_{q^t}, A0, A1 in F_{q^t}, gcd(i, 2t) = 1, and the
// norm condition on (a, b).
struct PlaneConstructionParams {
  std::uint32_t p = 0;
  int h = 1;  // q = p^h
  int t = 0;
  int i = 0;
  Element a, b;  // shifted coefficients actually used in U
  Element c;     // the shift that was applied
  Element omega;
  Element A0, A1;
};

struct PlaneBuild {
  Subspace U;  // F_q-dimension 3t, scattered in V(3, q^{2t})
  PlaneConstructionParams params;
  SearchTrace trace;
};

// Builds the scattered plane subspace for any prime power q and t >= 2.
// Default i: the least exponent with gcd(i, 2t) = 1 (namely 1); an explicit
// i must satisfy 1 <= i <= 3t-1 and gcd(i, 2t) = 1.  omega defaults to the
// canonical generator of F_{q^{2t}}^*.  Verifies dim U = 3t, the direction
// condition f(x)/x outside F_{q^t}, and scatteredness before returning.
PlaneBuild build_scattered_plane(const QParams& q, int t,
                                 std::optional<int> i = std::nullopt);

// The two monomial families U = { omega x + a x^{q^i} : x in F_{q^{rt}} }
// inside F_{q^{2rt}} = V(r, q^{2t}), r odd.  They differ in the admissible
// exponents and in the norm test selecting the coefficient a:
//
//   r_linear: gcd(i, 2t) = 1 and gcd(i, rt) = r (so U and everything built
//             from it is even F_{q^r}-linear); requires gcd(t, r) = 1 and
//             a with N_{q^{rt}/q^r}(a) outside F_q.
//   coprime:  gcd(i, 2t) = gcd(i, rt) = 1; requires q = 1 (mod r) and a
//             whose norm N_{q^{rt}/q}(a) is not an r-th power in F_q^*
//             (equivalently N(a)^{(q-1)/r} != 1).
enum class MonomialVariant { r_linear, coprime };

struct MonomialParams {
  std::uint32_t p = 0;
  int h = 1;
  int t = 0;
  int r = 0;
  int i = 0;
  MonomialVariant variant = MonomialVariant::r_linear;
  Element a;
  Element omega;
  Element A0, A1;  // omega^2 = omega A0 + A1 over F_{q^t}
};

struct MonomialBuild {
  Subspace U;  // F_q-dimension rt, scattered in V(r, q^{2t})
  MonomialParams params;
  SearchTrace trace;
};

// Requires r >= 3 odd and t >= 2 (plus the variant conditions above).  When
// i is omitted the least admissible exponent is chosen; an explicit i is
// validated against the variant's gcd conditions.  The coefficient a is the
// least element of F_{q^{rt}}^* passing the variant's norm test; if no
// exponent or no coefficient qualifies, the builder reports failure rather
// than fabricating parameters.
MonomialBuild build_monomial_family(const QParams& q, int t, int r,
                                    std::optional<int> i, MonomialVariant variant);

// Graph of the twisted Frobenius x -> x^{q^s} on F_{q^{t_pairs * n}}:
//   U = { (x, x^{q^s}) : x in F_{q^{t_pairs * n}} }  in  V(2 t_pairs, q^n).
// The twist is F_{q^n}-semilinear with fixed field F_{q^{gcd(s,n)}}, so
// gcd(s, n) = 1 is required; then U is scattered of dimension t_pairs * n
// (verified exhaustively).  Requires n >= 2, t_pairs >= 1, s >= 1.
Subspace build_pseudoregulus(const QParams& q, int n, int t_pairs, int s);

// The four-component family and its re-coordinatization:
//   W = { (x, y, x^q, y^{q^k}) : x, y in F_{q^n} }  in  V(4, q^n),
// n >= 5, 1 < k < n-1, gcd(k, n) = 1.  Writing F_{q^{2n}} x F_{q^{2n}} for
// V(4, q^n) via the basis {1, omega}, W equals U_g = {(z, g(z))} where
//   g(z) = a1 z^q + ak z^{q^k} + (1 - a1) z^{q^{n+1}} - ak z^{q^{n+k}},
//   a1 = omega^{q^{n+1}} / (omega^{q^{n+1}} - omega^q),
//   ak = 1 / (omega^{q^k - 1} - omega^{q^{k+n} - 1}).
// The closed-form coefficients are re-derived by interpolation and the
// equality W = U_g is checked canonically, never assumed; the restriction
// of g to F_{q^n} is verified to be z -> z^q.
struct WExampleBuild {
  Subspace W;        // in V(4, q^n) with components {n, n, n, n}
  Subspace U_g;      // the same space with components {2n, 2n}
  LinearizedPoly g;  // over F_{q^{2n}}
  Element omega;
  Element a1, ak;
};

WExampleBuild build_w_example(const QParams& q, int n, int k);

}  // namespace scatmrd
