#include "scatmrd/constructions.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>

namespace scatmrd {

namespace {

std::uint64_t upow(std::uint64_t b, int e) {
  std::uint64_t r = 1;
  for (int j = 0; j < e; ++j) r *= b;
  return r;
}

const Tower& tower_of(const Element& x, const char* who) {
  if (x.owner() == nullptr)
    throw std::invalid_argument(std::string(who) + ": element has no field");
  return *x.owner();
}

void require_q_degree(const Tower& tw, int d_q, const char* who) {
  if (d_q < 1 || d_q * tw.h() > tw.M() || tw.M() % (d_q * tw.h()) != 0)
    throw std::invalid_argument(std::string(who) +
                                ": degree not available in this field");
}

void check_binomial_shape(int t, int i, const char* who) {
  if (t < 2) throw std::invalid_argument(std::string(who) + ": t must be at least 2");
  if (i < 1 || i > 3 * t - 1)
    throw std::invalid_argument(std::string(who) +
                                ": exponent must lie in [1, 3t-1]");
}

std::vector<int> normalize_degrees(std::vector<int> ds) {
  std::sort(ds.begin(), ds.end());
  ds.erase(std::unique(ds.begin(), ds.end()), ds.end());
  return ds;
}

// f_{i,a,b}(x) = a x^{q^i} + b x^{q^{2t+i}}.
Element binom_eval(const Tower& tw, int t, int i, const Element& a,
                   const Element& b, const Element& x) {
  return tw.add(tw.mul(a, tw.frobenius(x, i)),
                tw.mul(b, tw.frobenius(x, 2 * t + i)));
}

bool norm_condition_holds(const Tower& tw, int t, const Element& a,
                          const Element& b) {
  return tw.relative_norm(a, 3 * t, t) !=
         tw.neg(tw.relative_norm(b, 3 * t, t));
}

// omega = canonical generator of F_{q^{2t}}^* together with the coefficients
// of its quadratic relation omega^2 = omega A0 + A1 over F_{q^t}: A0 is the
// relative trace and A1 the negated relative norm of omega (the other root
// of X^2 - A0 X - A1 is the conjugate omega^{q^t}).
struct OmegaSplit {
  Element omega, A0, A1;
};

OmegaSplit split_omega(const Tower& tw, int t, const char* who) {
  Element omega = tw.subfield_generator(2 * t);
  if (tw.in_subfield(omega, t))
    throw std::logic_error(std::string(who) + ": omega fell into F_{q^t}");
  Element A0 = tw.relative_trace(omega, 2 * t, t);
  Element A1 = tw.neg(tw.relative_norm(omega, 2 * t, t));
  if (!tw.in_subfield(A0, t) || !tw.in_subfield(A1, t))
    throw std::logic_error(std::string(who) +
                           ": quadratic coefficients left F_{q^t}");
  if (tw.mul(omega, omega) != tw.add(tw.mul(omega, A0), A1))
    throw std::logic_error(std::string(who) +
                           ": quadratic relation for omega failed");
  return OmegaSplit{omega, A0, A1};
}

}  // namespace

Element g_eval(int t, int i, const Element& x) {
  const Tower& tw = tower_of(x, "g_eval");
  check_binomial_shape(t, i, "g_eval");
  if (std::gcd(i, t) != 1)
    throw std::invalid_argument("g_eval: gcd(i, t) must be 1");
  require_q_degree(tw, 3 * t, "g_eval");
  if (!tw.in_subfield(x, 3 * t))
    throw std::invalid_argument("g_eval: element outside F_{q^{3t}}");
  Element xi = tw.frobenius(x, i);
  Element xt = tw.frobenius(x, t);
  Element xti = tw.frobenius(x, t + i);
  Element x2t = tw.frobenius(x, 2 * t);
  Element x2ti = tw.frobenius(x, 2 * t + i);
  Element first =
      tw.mul(tw.mul(tw.sub(x, xi), tw.sub(xt, xti)), tw.sub(x2t, x2ti));
  Element second =
      tw.mul(tw.mul(tw.sub(x2ti, x), tw.sub(xi, xt)), tw.sub(xti, x2t));
  return tw.add(first, second);
}

Element binomial_alpha(int t, int i, const Element& lambda) {
  const Tower& tw = tower_of(lambda, "binomial_alpha");
  check_binomial_shape(t, i, "binomial_alpha");
  if (std::gcd(i, t) != 1)
    throw std::invalid_argument("binomial_alpha: gcd(i, t) must be 1");
  require_q_degree(tw, 3 * t, "binomial_alpha");
  if (!tw.in_subfield(lambda, 3 * t))
    throw std::invalid_argument("binomial_alpha: element outside F_{q^{3t}}");
  if (tw.in_subfield(lambda, 3))
    throw std::invalid_argument("binomial_alpha: element must lie outside F_{q^3}");
  Element num = tw.sub(lambda, tw.frobenius(lambda, i));
  Element den = tw.sub(tw.frobenius(lambda, 2 * t + i), lambda);
  // gcd(i, t) = 1 forces gcd(i, 3t), gcd(2t+i, 3t) into {1, 3}, so both
  // conjugate differences are nonzero outside F_{q^3}.
  if (num.is_zero() || den.is_zero())
    throw std::logic_error("binomial_alpha: conjugate difference vanished outside F_{q^3}");
  return tw.mul(num, tw.inverse(den));
}

BinomialSearch find_nonscattered_binomial_in(std::shared_ptr<const Tower> tw_sp,
                                             int t, int i) {
  if (!tw_sp) throw std::invalid_argument("binomial search: null tower");
  const Tower& tw = *tw_sp;
  check_binomial_shape(t, i, "binomial search");
  require_q_degree(tw, 3 * t, "binomial search");

  SearchTrace trace;
  trace.log("t", static_cast<std::uint64_t>(t));
  trace.log("i", static_cast<std::uint64_t>(i));

  const int d = std::gcd(i, t);
  Element a = tw.one();
  Element b, lambda, x0;

  if (d > 1) {
    // Both exponents i and 2t+i are divisible by d, so f is F_{q^d}-linear
    // and every point of the graph's linear set has weight at least d.  Any
    // pair meeting the norm condition will do.
    trace.log("fixed-subfield-degree", static_cast<std::uint64_t>(d));
    trace.log("a-accepted", a.pack());
    Element avoid = tw.neg(tw.relative_norm(a, 3 * t, t));
    bool found = false;
    for (const Element& cand : tw.subfield_elements(3 * t)) {
      if (cand.is_zero()) continue;
      trace.log("b-candidate", cand.pack());
      if (tw.relative_norm(cand, 3 * t, t) != avoid) {
        b = cand;
        found = true;
        break;
      }
    }
    if (!found)
      throw std::logic_error("binomial search: the norm avoids only one value");
    trace.log("b-accepted", b.pack());
    found = false;
    for (const Element& cand : tw.subfield_elements(d)) {
      if (tw.in_subfield(cand, 1)) continue;
      lambda = cand;
      found = true;
      break;
    }
    if (!found)
      throw std::logic_error("binomial search: F_{q^d} \\ F_q is empty for d > 1");
    trace.log("witness-lambda", lambda.pack());
    x0 = tw.one();
    trace.log("witness-x0", x0.pack());
  } else {
    // Find lambda outside F_{q^3} with g(lambda) != 0; equivalently
    // N_{q^{3t}/q^t}(alpha_lambda) != -1.  The root-count bound on g
    // guarantees such a lambda exists.
    bool found = false;
    for (const Element& cand : tw.subfield_elements(3 * t)) {
      if (tw.in_subfield(cand, 3)) continue;
      trace.log("lambda-candidate", cand.pack());
      if (!g_eval(t, i, cand).is_zero()) {
        lambda = cand;
        found = true;
        break;
      }
    }
    if (!found)
      throw std::logic_error(
          "binomial search: g vanished on all of F_{q^{3t}} \\ F_{q^3}, "
          "contradicting its degree");
    trace.log("lambda-accepted", lambda.pack());

    Element alpha = binomial_alpha(t, i, lambda);
    Element target = tw.relative_norm(alpha, 3 * t, t);
    // With a = 1, any b of norm N(alpha) != -1 meets the norm condition.
    trace.log("a-accepted", a.pack());
    found = false;
    for (const Element& cand : tw.subfield_elements(3 * t)) {
      if (cand.is_zero()) continue;
      trace.log("b-candidate", cand.pack());
      if (tw.relative_norm(cand, 3 * t, t) == target) {
        b = cand;
        found = true;
        break;
      }
    }
    if (!found)
      throw std::logic_error("binomial search: the relative norm is surjective");
    trace.log("b-accepted", b.pack());

    // Solve x0^{q^{2t+i} - q^i} = (a/b) alpha, written multiplicatively as
    // b x0^{q^{2t+i}} = a alpha x0^{q^i}.  The right side has relative norm
    // one over F_{q^t}, and the image of the power map is exactly the
    // norm-one subgroup, so a solution exists.
    Element lhs_coef = b;
    Element rhs_coef = tw.mul(a, alpha);
    found = false;
    for (const Element& cand : tw.subfield_elements(3 * t)) {
      if (cand.is_zero()) continue;
      if (tw.mul(lhs_coef, tw.frobenius(cand, 2 * t + i)) ==
          tw.mul(rhs_coef, tw.frobenius(cand, i))) {
        x0 = cand;
        found = true;
        break;
      }
    }
    if (!found)
      throw std::logic_error(
          "binomial search: the norm-one power equation has no solution");
    trace.log("witness-x0", x0.pack());
  }

  // Re-check everything the caller relies on, independently of the branch.
  if (!norm_condition_holds(tw, t, a, b))
    throw std::logic_error("binomial search: norm condition failed after selection");
  if (x0.is_zero() || lambda.is_zero() || tw.in_subfield(lambda, 1))
    throw std::logic_error("binomial search: degenerate witness");
  Element left = binom_eval(tw, t, i, a, b, tw.mul(lambda, x0));
  Element right = tw.mul(lambda, binom_eval(tw, t, i, a, b, x0));
  if (left != right)
    throw std::logic_error("binomial search: witness identity failed");

  return BinomialSearch{std::move(tw_sp), t, i, a, b, lambda, x0, std::move(trace)};
}

BinomialSearch find_nonscattered_binomial(const QParams& q, int t, int i) {
  check_binomial_shape(t, i, "binomial search");
  auto tw = Tower::make_q(q.p, q.h, normalize_degrees({1, 3, t, 3 * t}));
  return find_nonscattered_binomial_in(std::move(tw), t, i);
}

ShiftSearch find_shift_c(int t, int i, const Element& a, const Element& b) {
  const Tower& tw = tower_of(a, "shift search");
  if (b.owner() != &tw)
    throw std::invalid_argument("shift search: coefficients from different fields");
  check_binomial_shape(t, i, "shift search");
  if (std::gcd(i, t) != 1)
    throw std::invalid_argument("shift search: gcd(i, t) must be 1");
  require_q_degree(tw, 3 * t, "shift search");
  if (a.is_zero() || b.is_zero())
    throw std::invalid_argument("shift search: coefficients must be nonzero");
  if (!tw.in_subfield(a, 3 * t) || !tw.in_subfield(b, 3 * t))
    throw std::invalid_argument("shift search: coefficients outside F_{q^{3t}}");
  if (!norm_condition_holds(tw, t, a, b))
    throw std::invalid_argument(
        "shift search: norm condition violated, zero would lie in the "
        "direction image");

  const std::uint64_t q3t = upow(tw.q(), 3 * t);
  const std::uint64_t qt = upow(tw.q(), t);
  const std::uint64_t n_cosets = (q3t - 1) / (qt - 1);  // q^{2t} + q^t + 1

  SearchTrace trace;
  trace.log("t", static_cast<std::uint64_t>(t));
  trace.log("i", static_cast<std::uint64_t>(i));

  // Discrete logs over F_{q^{3t}}^* with respect to its canonical generator;
  // mu^e lies in the coset mu^k F_{q^t}^* exactly when e = k mod n_cosets.
  Element mu3 = tw.subfield_generator(3 * t);
  std::unordered_map<std::uint64_t, std::uint64_t> dlog;
  dlog.reserve(static_cast<std::size_t>(q3t));
  {
    Element acc = tw.one();
    for (std::uint64_t e = 0; e + 1 < q3t; ++e) {
      dlog.emplace(acc.pack(), e);
      acc = tw.mul(acc, mu3);
    }
  }

  std::vector<std::uint64_t> hits(static_cast<std::size_t>(n_cosets), 0);
  std::unordered_set<std::uint64_t> image;
  image.reserve(static_cast<std::size_t>(q3t));
  for (const Element& x : tw.subfield_elements(3 * t)) {
    if (x.is_zero()) continue;
    Element y = tw.mul(binom_eval(tw, t, i, a, b, x), tw.inverse(x));
    if (y.is_zero())
      throw std::logic_error("shift search: zero direction despite the norm condition");
    if (image.insert(y.pack()).second)
      ++hits[static_cast<std::size_t>(dlog.at(y.pack()) % n_cosets)];
  }

  // A direction in a coset drags the whole norm-one orbit with it, so every
  // nonempty coset holds at least (q^t-1)/(q-1) distinct directions.
  const std::uint64_t lo = (qt - 1) / (tw.q() - 1);
  const std::uint64_t hi = qt - 1;
  for (std::uint64_t k = 0; k < n_cosets; ++k) {
    const std::uint64_t c = hits[static_cast<std::size_t>(k)];
    if (c != 0 && (c < lo || c > hi))
      throw std::logic_error("shift search: coset occupancy outside the predicted range");
  }

  std::optional<std::uint64_t> empty_coset;
  for (std::uint64_t dd = 0; dd < n_cosets; ++dd) {
    trace.log("coset-checked", dd);
    trace.log("coset-size", hits[static_cast<std::size_t>(dd)]);
    if (hits[static_cast<std::size_t>(dd)] == 0) {
      empty_coset = dd;
      break;
    }
  }
  if (!empty_coset)
    throw std::runtime_error(
        "shift search: every coset meets the direction image (the graph of "
        "the binomial is scattered)");
  trace.log("coset-accepted", *empty_coset);
  Element c = tw.inverse(tw.pow(mu3, *empty_coset));
  trace.log("c", c.pack());

  // Exhaustive, independent re-check of the postcondition.
  Element ca = tw.mul(c, a);
  Element cb = tw.mul(c, b);
  for (const Element& x : tw.subfield_elements(3 * t)) {
    if (x.is_zero()) continue;
    Element y = tw.mul(binom_eval(tw, t, i, ca, cb, x), tw.inverse(x));
    if (tw.in_subfield(y, t))
      throw std::logic_error("shift search: shifted direction fell into F_{q^t}");
  }

  return ShiftSearch{c, static_cast<int>(*empty_coset), std::move(trace)};
}

PlaneBuild build_scattered_plane(const QParams& q, int t, std::optional<int> i_opt) {
  if (t < 2)
    throw std::invalid_argument("plane builder: t must be at least 2");
  int i = 1;  // the least exponent coprime to 2t
  if (i_opt) {
    i = *i_opt;
    if (i < 1 || i > 3 * t - 1)
      throw std::invalid_argument("plane builder: exponent must lie in [1, 3t-1]");
    if (std::gcd(i, 2 * t) != 1)
      throw std::invalid_argument("plane builder: gcd(i, 2t) must be 1");
  }

  auto tw_sp = Tower::make_q(q.p, q.h,
                             normalize_degrees({1, 3, t, 2 * t, 3 * t, 6 * t}));
  const Tower& tw = *tw_sp;

  SearchTrace trace;
  trace.log("exponent", static_cast<std::uint64_t>(i));
  BinomialSearch bs = find_nonscattered_binomial_in(tw_sp, t, i);
  trace.append(bs.trace);
  ShiftSearch ss = find_shift_c(t, i, bs.a, bs.b);
  trace.append(ss.trace);

  Element a = tw.mul(ss.c, bs.a);
  Element b = tw.mul(ss.c, bs.b);
  trace.log("a-shifted", a.pack());
  trace.log("b-shifted", b.pack());
  // Norms scale by N(c) on both sides, so the condition survives shifting;
  // assert rather than assume.
  if (!norm_condition_holds(tw, t, a, b))
    throw std::logic_error("plane builder: norm condition lost under shifting");

  OmegaSplit os = split_omega(tw, t, "plane builder");
  trace.log("omega", os.omega.pack());

  Ambient amb = Ambient::make(tw_sp, {6 * t}, 2 * t);
  Subspace U = Subspace::from_image(amb, 3 * t, [&](const Element& x) {
    return Vec{tw.add(binom_eval(tw, t, i, a, b, x), tw.mul(os.omega, x))};
  });
  if (U.k() != 3 * t)
    throw std::logic_error("plane builder: image dimension is not 3t");
  if (!is_scattered(U))
    throw std::logic_error("plane builder: subspace failed the scatteredness scan");

  PlaneConstructionParams params{q.p, q.h, t,        i,     a,
                                 b,   ss.c, os.omega, os.A0, os.A1};
  return PlaneBuild{std::move(U), std::move(params), std::move(trace)};
}

MonomialBuild build_monomial_family(const QParams& q, int t, int r,
                                    std::optional<int> i_opt,
                                    MonomialVariant variant) {
  if (r < 3 || r % 2 == 0)
    throw std::invalid_argument("monomial builder: r must be odd and at least 3");
  if (t < 2)
    throw std::invalid_argument("monomial builder: t must be at least 2");
  const std::uint64_t qv = upow(q.p, q.h);
  if (variant == MonomialVariant::r_linear && std::gcd(t, r) != 1)
    throw std::invalid_argument(
        "monomial builder: gcd(t, r) must be 1 for the r-linear variant");
  if (variant == MonomialVariant::coprime &&
      (qv - 1) % static_cast<std::uint64_t>(r) != 0)
    throw std::invalid_argument(
        "monomial builder: q must be 1 mod r for the coprime variant");

  const int want_gcd = variant == MonomialVariant::r_linear ? r : 1;
  auto admissible = [&](int e) {
    return e >= 1 && e <= r * t - 1 && std::gcd(e, 2 * t) == 1 &&
           std::gcd(e, r * t) == want_gcd;
  };
  int i = 0;
  if (i_opt) {
    i = *i_opt;
    if (!admissible(i))
      throw std::invalid_argument(
          "monomial builder: exponent fails the gcd conditions");
  } else {
    bool found = false;
    for (int e = 1; e <= r * t - 1; ++e) {
      if (admissible(e)) {
        i = e;
        found = true;
        break;
      }
    }
    if (!found)
      throw std::runtime_error(
          "monomial builder: no exponent satisfies the gcd conditions");
  }

  auto tw_sp = Tower::make_q(
      q.p, q.h, normalize_degrees({1, t, 2 * t, r, r * t, 2 * r * t}));
  const Tower& tw = *tw_sp;

  SearchTrace trace;
  trace.log("exponent", static_cast<std::uint64_t>(i));
  Element a;
  bool found = false;
  for (const Element& cand : tw.subfield_elements(r * t)) {
    if (cand.is_zero()) continue;
    trace.log("a-candidate", cand.pack());
    bool ok = false;
    if (variant == MonomialVariant::r_linear) {
      ok = !tw.in_subfield(tw.relative_norm(cand, r * t, r), 1);
    } else {
      Element nv = tw.relative_norm(cand, r * t, 1);
      ok = tw.pow(nv, (qv - 1) / static_cast<std::uint64_t>(r)) != tw.one();
    }
    if (ok) {
      a = cand;
      found = true;
      break;
    }
  }
  if (!found)
    throw std::runtime_error(
        "monomial builder: no coefficient passes the norm condition");
  trace.log("a-accepted", a.pack());

  OmegaSplit os = split_omega(tw, t, "monomial builder");
  trace.log("omega", os.omega.pack());

  Ambient amb = Ambient::make(tw_sp, {2 * r * t}, 2 * t);
  Subspace U = Subspace::from_image(amb, r * t, [&](const Element& x) {
    return Vec{tw.add(tw.mul(os.omega, x), tw.mul(a, tw.frobenius(x, i)))};
  });
  if (U.k() != r * t)
    throw std::logic_error("monomial builder: image dimension is not rt");
  if (!is_scattered(U))
    throw std::logic_error("monomial builder: subspace failed the scatteredness scan");

  MonomialParams params{q.p, q.h,      t,     r,     i,
                        variant, a, os.omega, os.A0, os.A1};
  return MonomialBuild{std::move(U), std::move(params), std::move(trace)};
}

Subspace build_pseudoregulus(const QParams& q, int n, int t_pairs, int s) {
  if (n < 2)
    throw std::invalid_argument("pseudoregulus builder: n must be at least 2");
  if (t_pairs < 1)
    throw std::invalid_argument("pseudoregulus builder: t_pairs must be at least 1");
  if (s < 1)
    throw std::invalid_argument("pseudoregulus builder: s must be at least 1");
  if (std::gcd(s, n) != 1)
    throw std::invalid_argument(
        "pseudoregulus builder: gcd(s, n) must be 1, otherwise the twist "
        "fixes more than F_q");

  const int N = t_pairs * n;
  auto tw_sp = Tower::make_q(q.p, q.h, normalize_degrees({1, n, N}));
  const Tower& tw = *tw_sp;
  Ambient amb = Ambient::make(tw_sp, {N, N}, n);
  Subspace U = Subspace::from_image(amb, N, [&](const Element& x) {
    return Vec{x, tw.frobenius(x, s)};
  });
  if (U.k() != N)
    throw std::logic_error("pseudoregulus builder: graph dimension mismatch");
  if (!is_scattered(U))
    throw std::logic_error("pseudoregulus builder: graph failed the scatteredness scan");
  return U;
}

WExampleBuild build_w_example(const QParams& q, int n, int k) {
  if (n < 5)
    throw std::invalid_argument("four-component builder: n must be at least 5");
  if (k <= 1 || k >= n - 1)
    throw std::invalid_argument(
        "four-component builder: exponent must satisfy 1 < k < n-1");
  if (std::gcd(k, n) != 1)
    throw std::invalid_argument("four-component builder: gcd(k, n) must be 1");

  auto tw_sp = Tower::make_q(q.p, q.h, normalize_degrees({1, n, 2 * n}));
  const Tower& tw = *tw_sp;

  Ambient amb4 = Ambient::make(tw_sp, {n, n, n, n}, n);
  Subspace W = Subspace::from_image_pair(
      amb4, n, n, [&](const Element& x, const Element& y) {
        return Vec{x, y, tw.frobenius(x, 1), tw.frobenius(y, k)};
      });
  if (W.k() != 2 * n)
    throw std::logic_error("four-component builder: dimension is not 2n");
  if (!is_scattered(W))
    throw std::logic_error("four-component builder: subspace failed the scatteredness scan");

  Element omega = tw.subfield_generator(2 * n);
  if (tw.in_subfield(omega, n))
    throw std::logic_error("four-component builder: omega fell into F_{q^n}");

  // Closed-form coefficients of the two-component re-coordinatization.
  Element wq = tw.frobenius(omega, 1);
  Element wqn1 = tw.frobenius(omega, n + 1);
  Element a1 = tw.mul(wqn1, tw.inverse(tw.sub(wqn1, wq)));
  Element ak = tw.mul(
      omega,
      tw.inverse(tw.sub(tw.frobenius(omega, k), tw.frobenius(omega, k + n))));
  std::vector<Element> coef(static_cast<std::size_t>(2 * n), tw.zero());
  coef[1] = a1;
  coef[static_cast<std::size_t>(k)] = ak;
  coef[static_cast<std::size_t>(n + 1)] = tw.sub(tw.one(), a1);
  coef[static_cast<std::size_t>(n + k)] = tw.neg(ak);
  LinearizedPoly g = LinearizedPoly::make(tw_sp, 2 * n, coef);

  // Interpolate z = x + omega y -> x^q + omega y^{q^k} from scratch and
  // require coefficient-for-coefficient agreement with the closed form.
  Element split_den = tw.inverse(tw.sub(omega, tw.frobenius(omega, n)));
  auto direct = [&](const Element& z) {
    Element y = tw.mul(tw.sub(z, tw.frobenius(z, n)), split_den);
    Element x = tw.sub(z, tw.mul(omega, y));
    return tw.add(tw.frobenius(x, 1), tw.mul(omega, tw.frobenius(y, k)));
  };
  LinearizedPoly gi = lp_from_map(tw_sp, 2 * n, direct);
  for (int j = 0; j < 2 * n; ++j) {
    if (gi.coef[static_cast<std::size_t>(j)] != g.coef[static_cast<std::size_t>(j)])
      throw std::logic_error(
          "four-component builder: closed-form coefficients disagree with "
          "interpolation");
  }

  // On the middle field the re-coordinatization must restrict to z -> z^q.
  for (const Element& z : tw.subfield_elements(n)) {
    if (g.eval(z) != tw.frobenius(z, 1))
      throw std::logic_error(
          "four-component builder: restriction to F_{q^n} is not z^q");
  }

  // The direct span and the re-coordinatization must be the same subspace
  // under the pairwise {1, omega} identification.
  Ambient amb2 = Ambient::make(tw_sp, {2 * n, 2 * n}, n);
  Subspace Ug = Subspace::from_image(amb2, 2 * n, [&](const Element& z) {
    return Vec{z, g.eval(z)};
  });
  std::vector<Vec> mapped;
  mapped.reserve(W.fq_basis().size());
  for (const Vec& v : W.fq_basis()) {
    mapped.push_back(Vec{tw.add(v[0], tw.mul(omega, v[1])),
                         tw.add(v[2], tw.mul(omega, v[3]))});
  }
  Subspace Wm = Subspace::from_fq_generators(amb2, mapped);
  if (!Wm.equals(Ug))
    throw std::logic_error(
        "four-component builder: re-coordinatization disagrees with the "
        "direct span");

  return WExampleBuild{std::move(W), std::move(Ug), std::move(g),
                       omega,        a1,            ak};
}

}  // namespace scatmrd
