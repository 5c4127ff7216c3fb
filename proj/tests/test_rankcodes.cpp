#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdint>
#include <cstdlib>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "scatmrd/constructions.hpp"
#include "scatmrd/fields.hpp"
#include "scatmrd/linmaps.hpp"
#include "scatmrd/linsets.hpp"
#include "scatmrd/rankcodes.hpp"

using namespace scatmrd;

namespace {

using FMap = std::function<Element(const Element&)>;

std::vector<Element> pow_basis(const std::shared_ptr<const Tower>& tw, int d) {
  std::vector<Element> out;
  const Element g = tw->subfield_generator(d);
  Element b = tw->one();
  for (int l = 0; l < d; ++l) {
    out.push_back(b);
    b = tw->mul(b, g);
  }
  return out;
}

// Matrix of z -> mu z on F_{q^d} in the power basis (codomain rows).
FqMat mult_matrix(const std::shared_ptr<const Tower>& tw, int d,
                  const Element& mu) {
  return lp_to_matrix(LinearizedPoly::monomial(tw, d, 0, mu));
}

// Kernel functional of a Frobenius graph {(x, x^{q^s})}: (a, b) -> a^{q^s} - b.
GMap graph_kernel(const std::shared_ptr<const Tower>& tw, int s) {
  return [tw, s](const Vec& v) {
    return tw->sub(tw->frobenius(v[0], s), v[1]);
  };
}

// Kernel functional of {omega x + f(x)} in the single-component ambient
// F_{q^{2rt}} = omega F_{q^{rt}} + F_{q^{rt}}: split u = omega X + Y through
// the conjugate over F_{q^{rt}} and return f(X) - Y.
GMap conj_kernel(const std::shared_ptr<const Tower>& tw, int rt,
                 const Element& omega, const FMap& f) {
  const Element deninv =
      tw->inverse(tw->sub(omega, tw->frobenius(omega, rt)));
  return [tw, rt, omega, deninv, f](const Vec& v) {
    const Element u = v[0];
    const Element x = tw->mul(tw->sub(u, tw->frobenius(u, rt)), deninv);
    const Element y = tw->sub(u, tw->mul(omega, x));
    return tw->sub(f(x), y);
  };
}

// Independent oracle for the explicit two-variable codewords: row l holds
// the F_q-coordinates of G(pb_l v), pb the product basis (g_t^l omega, then
// g_t^l) of F_{q^{2t}} and v = omega v0 + v1.  Exercises only the generic
// composition G o tau_v, never the closed-form coefficient bundles.
FqMat fv_oracle(const std::shared_ptr<const Tower>& tw, int t, int r,
                const Element& omega, const FMap& f, const Element& v0,
                const Element& v1) {
  const int rt = r * t;
  const GMap g = conj_kernel(tw, rt, omega, f);
  const Element v = tw->add(tw->mul(omega, v0), v1);
  std::vector<Element> pb;
  for (const Element& e : pow_basis(tw, t)) pb.push_back(tw->mul(e, omega));
  for (const Element& e : pow_basis(tw, t)) pb.push_back(e);
  FqMat m = FqMat::zero(tw, 2 * t, rt);
  for (int row = 0; row < 2 * t; ++row) {
    const auto coords =
        tw->fq_coords(g(Vec{tw->mul(pb[static_cast<std::size_t>(row)], v)}), rt);
    for (int c = 0; c < rt; ++c) m.at(row, c) = coords[static_cast<std::size_t>(c)];
  }
  return m;
}

// Change of domain basis on F_{q^{2t}}: row l = F_q-coordinates of the
// product-basis vector pb_l in the power basis.
FqMat product_to_power(const std::shared_ptr<const Tower>& tw, int t,
                       const Element& omega) {
  FqMat m = FqMat::zero(tw, 2 * t, 2 * t);
  std::vector<Element> pb;
  for (const Element& e : pow_basis(tw, t)) pb.push_back(tw->mul(e, omega));
  for (const Element& e : pow_basis(tw, t)) pb.push_back(e);
  for (int row = 0; row < 2 * t; ++row) {
    const auto coords = tw->fq_coords(pb[static_cast<std::size_t>(row)], 2 * t);
    for (int c = 0; c < 2 * t; ++c) m.at(row, c) = coords[static_cast<std::size_t>(c)];
  }
  return m;
}

// Applies an F_q-matrix to a coordinate vector through the SmallField tables.
std::vector<fp_t> mat_apply(const SmallField& sf, const FqMat& m,
                            const std::vector<fp_t>& v) {
  std::vector<fp_t> out(static_cast<std::size_t>(m.m), 0);
  for (int i = 0; i < m.m; ++i)
    for (int j = 0; j < m.n; ++j)
      out[static_cast<std::size_t>(i)] =
          sf.a(out[static_cast<std::size_t>(i)],
               sf.m(m.at(i, j), v[static_cast<std::size_t>(j)]));
  return out;
}

// True iff the matrix already lies in the code's span.
bool in_span(const RankCode& c, const FqMat& extra) {
  std::vector<FqMat> gens = c.generators;
  gens.push_back(extra);
  return make_rank_code(c.tw, c.m, c.n, gens, Provenance::derived).dim == c.dim;
}

}  // namespace

TEST_CASE("canonical form: full matrix space, stability, and closure") {
  auto tw = Tower::make_q(2, 1, {1, 2});
  std::vector<FqMat> units;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      FqMat e = FqMat::zero(tw, 2, 2);
      e.at(i, j) = 1;
      units.push_back(e);
    }
  RankCode full = make_rank_code(tw, 2, 2, units, Provenance::derived);
  CHECK(full.dim == 4);
  CHECK(full.generators.size() == 4);
  CHECK(full.status == VerifStatus::unverified);

  // Idempotence: canonicalizing the canonical basis reproduces it.
  RankCode again = make_rank_code(tw, 2, 2, full.generators, Provenance::derived);
  REQUIRE(again.dim == 4);
  for (int j = 0; j < 4; ++j)
    CHECK(again.generators[static_cast<std::size_t>(j)] ==
          full.generators[static_cast<std::size_t>(j)]);

  // Closure: sums of generators span the same code.
  std::vector<FqMat> mixed = {fq_add(units[0], units[3]),
                              fq_add(units[1], units[2]), units[2], units[3]};
  CHECK(codes_equal(make_rank_code(tw, 2, 2, mixed, Provenance::derived), full));

  // The least nonzero codeword is the first generator, of rank 1.
  DistanceReport rep = min_rank_distance(full, ScanMode::exhaustive_mode());
  CHECK(rep.d == 1);
  CHECK(rep.exact);
  CHECK(rep.scanned == 15);
  CHECK(rep.witness_index == 1);
  CHECK(rep.witness == full.generators[0]);
  CHECK(fq_rank(rep.witness) == 1);

  cache_distance(full, rep);
  CHECK(full.status == VerifStatus::exhaustive);
  CHECK(full.d_min == 1);
  CHECK(is_mrd(full));  // dim 4 == max * (min - 1 + 1) = 2 * 2... with d = 1: 2*(2-1+1) = 4

  // Shape and field mismatches are rejected.
  CHECK_THROWS_AS(make_rank_code(tw, 2, 3, units, Provenance::derived),
                  std::invalid_argument);
  auto tw3 = Tower::make_q(3, 1, {1, 2});
  CHECK_THROWS_AS(make_rank_code(tw3, 2, 2, units, Provenance::derived),
                  std::invalid_argument);

  // Budget cap.
  CHECK_THROWS_AS(min_rank_distance(full, ScanMode::exhaustive_mode(10)),
                  std::runtime_error);

  // The zero code has no distance.
  RankCode zero = make_rank_code(tw, 2, 2, {}, Provenance::derived);
  CHECK(zero.dim == 0);
  CHECK_THROWS_AS(min_rank_distance(zero, ScanMode::exhaustive_mode()),
                  std::invalid_argument);
}

TEST_CASE("verification labels and parameter bookkeeping") {
  CHECK(to_string(VerifStatus::unverified) == "unverified");
  CHECK(to_string(VerifStatus::sampled) == "sampled");
  CHECK(to_string(VerifStatus::theorem) == "theorem");
  CHECK(to_string(VerifStatus::exhaustive) == "exhaustive");
  CHECK(to_string(Provenance::from_subspace) == "from_subspace");
  CHECK(to_string(Provenance::sheekey) == "sheekey");
  CHECK(to_string(Provenance::gabidulin) == "gabidulin");
  CHECK(to_string(Provenance::explicit_fv) == "explicit_Fv");
  CHECK(to_string(Provenance::derived) == "derived");

  auto tw = Tower::make_q(2, 1, {1, 2});
  RankCode c = make_rank_code(tw, 2, 2, {FqMat::identity(tw, 2)},
                              Provenance::derived);
  CHECK_THROWS_AS(code_params(c), std::invalid_argument);  // no distance yet
  CHECK_THROWS_AS(is_mrd(c), std::invalid_argument);

  CodeParams cp;
  cp.m = 4, cp.n = 4, cp.p = 2, cp.h = 1, cp.d = 3, cp.dim = 8;
  CHECK(singleton_holds(cp));
  cp.dim = 9;
  CHECK(!singleton_holds(cp));
}

TEST_CASE("graph code with its natural kernel map equals the one-term twisted family") {
  Subspace u = build_pseudoregulus(QParams{2, 1}, 4, 1, 1);
  auto tw = u.ambient().tw;
  RankCode c = code_from_subspace(u, graph_kernel(tw, 1));
  CHECK(c.m == 4);
  CHECK(c.n == 4);
  CHECK(c.dim == 8);
  CHECK(c.status == VerifStatus::theorem);
  CHECK(c.provenance == Provenance::from_subspace);
  REQUIRE(c.d_min.has_value());
  CHECK(*c.d_min == 3);
  CHECK(is_mrd(c));

  RankCode g = gabidulin_code(QParams{2, 1}, 4, 2, 1);
  CHECK(codes_equal(c, g));
  CHECK(codes_equal(g, c));

  DistanceReport rep = min_rank_distance(c, ScanMode::exhaustive_mode());
  CHECK(rep.d == 3);
  CHECK(rep.scanned == 255);
  CHECK(fq_rank(rep.witness) == 3);
  CHECK(in_span(c, rep.witness));
  cache_distance(c, rep);
  CHECK(c.status == VerifStatus::exhaustive);
  CHECK(is_mrd(c));
}

TEST_CASE("default kernel map and the intertwiner between two choices") {
  Subspace u = build_pseudoregulus(QParams{2, 1}, 4, 1, 1);
  auto tw = u.ambient().tw;

  RankCode cdef = code_from_subspace(u);
  CHECK(cdef.dim == 8);
  REQUIRE(cdef.d_min.has_value());
  CHECK(*cdef.d_min == 3);
  CHECK(is_mrd(cdef));
  DistanceReport repdef = min_rank_distance(cdef, ScanMode::exhaustive_mode());
  CHECK(repdef.d == 3);

  // A second kernel map differing by an invertible recoordinatization M of
  // the codomain must yield exactly M as the intertwiner.
  const GMap g = graph_kernel(tw, 1);
  FqMat m = FqMat::zero(tw, 4, 4);  // companion matrix of x^4 + x + 1
  m.at(1, 0) = 1;
  m.at(2, 1) = 1;
  m.at(3, 2) = 1;
  m.at(0, 3) = 1;
  m.at(1, 3) = 1;
  REQUIRE(fq_rank(m) == 4);
  const SmallField& sf = tw->small_field();
  const GMap gbar = [tw, g, m, &sf](const Vec& v) {
    return tw->from_fq_coords(mat_apply(sf, m, tw->fq_coords(g(v), 4)), 4);
  };
  FqMat h = equivalence_witness_for_G_change(u, g, gbar);
  CHECK(h == m);

  // The recoordinatized code keeps the metric data.
  RankCode cbar = code_from_subspace(u, gbar);
  CHECK(cbar.dim == 8);
  DistanceReport repbar = min_rank_distance(cbar, ScanMode::exhaustive_mode());
  CHECK(repbar.d == 3);

  // Maps that do not vanish on U, or that collapse the codomain, are not
  // kernel maps for it.
  CHECK_THROWS_AS(equivalence_witness_for_G_change(u, g, graph_kernel(tw, 3)),
                  std::invalid_argument);
  const GMap zero_map = [tw](const Vec&) { return tw->zero(); };
  CHECK_THROWS_AS(equivalence_witness_for_G_change(u, g, zero_map),
                  std::invalid_argument);
  CHECK_THROWS_AS(code_from_subspace(u, graph_kernel(tw, 3)),
                  std::invalid_argument);
}

TEST_CASE("weight-two graph: positive distance but below the bound") {
  auto tw = Tower::make_q(2, 1, {1, 2, 4});
  Ambient amb = Ambient::make(tw, {4, 4}, 4);
  Subspace u = Subspace::from_image(amb, 4, [&](const Element& x) {
    return Vec{x, tw->frobenius(x, 2)};
  });
  REQUIRE(u.k() == 4);

  RankCode c = code_from_subspace(u);
  CHECK(c.m == 4);
  CHECK(c.n == 4);
  CHECK(c.dim == 8);
  REQUIRE(c.d_min.has_value());
  CHECK(*c.d_min == 2);  // top point weight is 2
  CHECK(c.status == VerifStatus::theorem);
  CHECK(!is_mrd(c));
  CHECK(singleton_holds(code_params(c)));

  DistanceReport rep = min_rank_distance(c, ScanMode::exhaustive_mode());
  CHECK(rep.d == 2);
  cache_distance(c, rep);
  CHECK(c.status == VerifStatus::exhaustive);
  CHECK(!is_mrd(c));
}

TEST_CASE("rejected subspaces: parity, dimension, weight, and codomain") {
  // Odd ambient F_q-dimension.
  {
    auto tw = Tower::make_q(2, 1, {1, 3});
    Ambient amb = Ambient::make(tw, {3, 3, 3}, 3);
    Subspace u = Subspace::from_image(amb, 3, [&](const Element& x) {
      return Vec{x, x, tw->zero()};
    });
    CHECK_THROWS_AS(code_from_subspace(u), std::invalid_argument);
  }
  // Wrong subspace dimension.
  {
    auto tw = Tower::make_q(2, 1, {1, 2, 4});
    Ambient amb = Ambient::make(tw, {4, 4}, 4);
    Subspace u = Subspace::from_image(amb, 2, [&](const Element& x) {
      return Vec{x, tw->zero()};
    });
    CHECK_THROWS_AS(code_from_subspace(u), std::invalid_argument);
  }
  // A point of weight n: the codeword map cannot separate its line.
  {
    auto tw = Tower::make_q(2, 1, {1, 2, 4});
    Ambient amb = Ambient::make(tw, {4, 4}, 4);
    Subspace u = Subspace::from_image(amb, 4, [&](const Element& x) {
      return Vec{x, tw->zero()};
    });
    CHECK_THROWS_AS(code_from_subspace(u), std::invalid_argument);
  }
  // The tower has no subfield of degree rn/2.
  {
    auto tw = Tower::make_q(2, 1, {1, 2});
    Ambient amb = Ambient::make(tw, {2, 2, 2}, 2);
    Subspace u = Subspace::from_image_pair(
        amb, 2, 1, [&](const Element& x, const Element& c) {
          return Vec{x, tw->frobenius(x, 1), c};
        });
    REQUIRE(u.k() == 3);
    CHECK_THROWS_AS(code_from_subspace(u), std::invalid_argument);
  }
}

TEST_CASE("recovering the line presentation u = x + omega f(x)") {
  auto tw = Tower::make_q(2, 1, {1, 2, 4});
  Ambient amb = Ambient::make(tw, {4}, 4);
  const Element w0 = tw->subfield_generator(4);

  // A twisted presentation.
  Subspace u = Subspace::from_image(amb, 2, [&](const Element& x) {
    return Vec{tw->add(x, tw->mul(w0, tw->frobenius(x, 1)))};
  });
  REQUIRE(u.k() == 2);
  OmegaF of = recover_omega_f(u);
  CHECK(!tw->in_subfield(of.omega, 2));
  CHECK(of.f.d == 2);
  Subspace rebuilt = Subspace::from_image(amb, 2, [&](const Element& x) {
    return Vec{tw->add(x, tw->mul(of.omega, of.f.eval(x)))};
  });
  CHECK(rebuilt.equals(u));

  // Determinism of the scan.
  OmegaF of2 = recover_omega_f(u);
  CHECK(of2.omega == of.omega);
  CHECK(of2.f.coef == of.f.coef);

  // The subfield itself comes back with f = 0.
  Subspace triv = Subspace::from_image(amb, 2, [&](const Element& x) {
    return Vec{x};
  });
  OmegaF oftriv = recover_omega_f(triv);
  CHECK(oftriv.f.is_zero());
  CHECK(!tw->in_subfield(oftriv.omega, 2));

  // A degree-eight ambient.
  auto tw8 = Tower::make_q(2, 1, {1, 2, 4, 8});
  Ambient amb8 = Ambient::make(tw8, {8}, 2);
  const Element w8 = tw8->subfield_generator(8);
  Subspace u8 = Subspace::from_image(amb8, 4, [&](const Element& x) {
    return Vec{tw8->add(x, tw8->mul(w8, tw8->frobenius(x, 2)))};
  });
  REQUIRE(u8.k() == 4);
  OmegaF of8 = recover_omega_f(u8);
  Subspace rebuilt8 = Subspace::from_image(amb8, 4, [&](const Element& x) {
    return Vec{tw8->add(x, tw8->mul(of8.omega, of8.f.eval(x)))};
  });
  CHECK(rebuilt8.equals(u8));

  // Rejections: several components, odd degree, wrong dimension.
  Subspace multi = build_pseudoregulus(QParams{2, 1}, 4, 1, 1);
  CHECK_THROWS_AS(recover_omega_f(multi), std::invalid_argument);
  {
    auto tw3 = Tower::make_q(2, 1, {1, 3});
    Ambient amb3 = Ambient::make(tw3, {3}, 1);
    Subspace u3 = Subspace::from_image(amb3, 1, [&](const Element& x) {
      return Vec{x};
    });
    CHECK_THROWS_AS(recover_omega_f(u3), std::invalid_argument);
  }
  {
    Subspace thin = Subspace::from_image(amb, 1, [&](const Element& x) {
      return Vec{x};
    });
    CHECK_THROWS_AS(recover_omega_f(thin), std::invalid_argument);
  }
}

TEST_CASE("restriction: the two domain sizes give one chain of codes") {
  auto tw = Tower::make_q(2, 1, {1, 2, 4});
  LinearizedPoly f = LinearizedPoly::monomial(tw, 4, 1, tw->one());

  RankCode full = sheekey_code(f, 4);  // domain F_{q^4}
  CHECK(full.m == 4);
  CHECK(full.n == 4);
  CHECK(full.dim == 8);
  CHECK(full.status == VerifStatus::theorem);
  REQUIRE(full.d_min.has_value());
  CHECK(*full.d_min == 3);
  CHECK(codes_equal(full, gabidulin_code(QParams{2, 1}, 4, 2, 1)));

  // Restricting the domain to F_{q^2} equals building over F_{q^2} directly.
  RankCode narrowed = restriction_code(full, 2);
  CHECK(narrowed.m == 4);
  CHECK(narrowed.n == 2);
  CHECK(narrowed.provenance == Provenance::derived);
  CHECK(narrowed.status == VerifStatus::unverified);
  CHECK(!narrowed.d_min.has_value());
  RankCode direct = sheekey_code(f, 2);
  CHECK(codes_equal(narrowed, direct));

  // ... and equals the graph code over the fine scalars with the natural
  // kernel map.
  Subspace ufine = build_pseudoregulus(QParams{2, 1}, 2, 2, 1);
  RankCode cfine = code_from_subspace(ufine, graph_kernel(ufine.ambient().tw, 1));
  CHECK(codes_equal(cfine, narrowed));

  // Identity restriction keeps the span.
  CHECK(codes_equal(restriction_code(full, 4), full));

  // Restricting the weight-two graph code collapses half the span.
  Ambient amb = Ambient::make(tw, {4, 4}, 4);
  Subspace u2 = Subspace::from_image(amb, 4, [&](const Element& x) {
    return Vec{x, tw->frobenius(x, 2)};
  });
  RankCode cw2 = code_from_subspace(u2);
  RankCode collapsed = restriction_code(cw2, 2);
  CHECK(collapsed.dim == 4);  // x^{q^2} acts as identity on F_{q^2}
  DistanceReport rep = min_rank_distance(collapsed, ScanMode::exhaustive_mode());
  CHECK(rep.d == 2);
  cache_distance(collapsed, rep);
  CHECK(is_mrd(collapsed));  // dim 4 == max(4,2) * (2 - 2 + 1)

  CHECK_THROWS_AS(restriction_code(full, 3), std::invalid_argument);
}

TEST_CASE("two-term codes from a polynomial: verified and unverified branches") {
  auto tw = Tower::make_q(2, 1, {1, 2, 4});

  // Scattered graph: full data established.
  LinearizedPoly fq1 = LinearizedPoly::monomial(tw, 4, 1, tw->one());
  RankCode good = sheekey_code(fq1, 2);
  CHECK(good.m == 4);
  CHECK(good.n == 2);
  CHECK(good.dim == 8);
  CHECK(good.status == VerifStatus::theorem);
  REQUIRE(good.d_min.has_value());
  CHECK(*good.d_min == 1);
  CHECK(good.provenance == Provenance::sheekey);
  CHECK(is_mrd(good));

  // Non-scattered graph: the span is still built, nothing is claimed.
  LinearizedPoly fq2 = LinearizedPoly::monomial(tw, 4, 2, tw->one());
  RankCode shaky = sheekey_code(fq2, 4);
  CHECK(shaky.dim == 8);
  CHECK(shaky.status == VerifStatus::unverified);
  CHECK(!shaky.d_min.has_value());
  CHECK_THROWS_AS(is_mrd(shaky), std::invalid_argument);
  DistanceReport rep = min_rank_distance(shaky, ScanMode::exhaustive_mode());
  CHECK(rep.d == 2);
  cache_distance(shaky, rep);
  CHECK(shaky.status == VerifStatus::exhaustive);
  CHECK(!is_mrd(shaky));

  CHECK_THROWS_AS(sheekey_code(fq1, 1), std::invalid_argument);
  CHECK_THROWS_AS(sheekey_code(fq1, 3), std::invalid_argument);
}

TEST_CASE("the two ten-dimensional codes over F_32 coincide") {
  auto tw = Tower::make_q(2, 1, {1, 2, 5, 10});
  LinearizedPoly f = LinearizedPoly::monomial(tw, 10, 1, tw->one());
  RankCode sf = sheekey_code(f, 5);
  CHECK(sf.m == 10);
  CHECK(sf.n == 5);
  CHECK(sf.dim == 20);
  CHECK(sf.status == VerifStatus::theorem);
  REQUIRE(sf.d_min.has_value());
  CHECK(*sf.d_min == 4);
  CHECK(is_mrd(sf));

  WExampleBuild wb = build_w_example(QParams{2, 1}, 5, 2);
  RankCode sg = sheekey_code(wb.g, 5);
  CHECK(sg.dim == 20);
  CHECK(sg.status == VerifStatus::theorem);
  REQUIRE(sg.d_min.has_value());
  CHECK(*sg.d_min == 4);

  // Same code from two different generating polynomials.
  CHECK(codes_equal(sf, sg));

  // A seeded sample never falls below the proven distance, and the sampled
  // bound does not overwrite the proof.
  DistanceReport rep = min_rank_distance(sf, ScanMode::sample_mode(2000, 7));
  CHECK(!rep.exact);
  CHECK(rep.scanned == 2000);
  CHECK(rep.d >= 4);
  CHECK(rep.d <= 5);
  cache_distance(sf, rep);
  CHECK(sf.status == VerifStatus::theorem);
  CHECK(*sf.d_min == 4);
}

TEST_CASE("one-generator twisted families across parameters") {
  RankCode g21 = gabidulin_code(QParams{2, 1}, 4, 2, 1);
  CHECK(g21.m == 4);
  CHECK(g21.n == 4);
  CHECK(g21.dim == 8);
  REQUIRE(g21.d_min.has_value());
  CHECK(*g21.d_min == 3);
  CHECK(g21.provenance == Provenance::gabidulin);
  CHECK(is_mrd(g21));
  DistanceReport rep = min_rank_distance(g21, ScanMode::exhaustive_mode());
  CHECK(rep.d == 3);
  cache_distance(g21, rep);
  CHECK(is_mrd(g21));

  // k = 1: every nonzero codeword is invertible.
  RankCode g11 = gabidulin_code(QParams{2, 1}, 4, 1, 1);
  CHECK(g11.dim == 4);
  CHECK(*g11.d_min == 4);
  CHECK(is_mrd(g11));
  DistanceReport rep1 = min_rank_distance(g11, ScanMode::exhaustive_mode());
  CHECK(rep1.d == 4);
  CHECK(rep1.scanned == 15);

  // k = 3 and a second size.
  RankCode g31 = gabidulin_code(QParams{2, 1}, 4, 3, 1);
  CHECK(g31.dim == 12);
  CHECK(*g31.d_min == 2);
  CHECK(min_rank_distance(g31, ScanMode::exhaustive_mode()).d == 2);
  RankCode g52 = gabidulin_code(QParams{2, 1}, 5, 2, 2);
  CHECK(g52.dim == 10);
  CHECK(*g52.d_min == 4);
  CHECK(min_rank_distance(g52, ScanMode::exhaustive_mode()).d == 4);
  CHECK(is_mrd(g52));

  // Different twists give different spans of the same parameters.
  RankCode g23 = gabidulin_code(QParams{2, 1}, 4, 2, 3);
  CHECK(g23.dim == 8);
  CHECK(!codes_equal(g21, g23));

  // A non-prime base field.
  RankCode gq4 = gabidulin_code(QParams{2, 2}, 3, 1, 1);
  CHECK(gq4.dim == 3);
  CHECK(*gq4.d_min == 3);
  DistanceReport rep4 = min_rank_distance(gq4, ScanMode::exhaustive_mode());
  CHECK(rep4.d == 3);
  CHECK(rep4.scanned == 63);
  CHECK(is_mrd(gq4));

  CHECK_THROWS_AS(gabidulin_code(QParams{2, 1}, 4, 0, 1), std::invalid_argument);
  CHECK_THROWS_AS(gabidulin_code(QParams{2, 1}, 4, 4, 1), std::invalid_argument);
  CHECK_THROWS_AS(gabidulin_code(QParams{2, 1}, 4, 2, 2), std::invalid_argument);
  CHECK_THROWS_AS(gabidulin_code(QParams{2, 1}, 3, 1, 0), std::invalid_argument);
}

TEST_CASE("explicit two-variable code of the plane family") {
  PlaneBuild pb = build_scattered_plane(QParams{2, 1}, 2);
  RankCode c = explicit_fv_code(pb.params);
  CHECK(c.m == 4);
  CHECK(c.n == 6);
  CHECK(c.dim == 12);
  CHECK(c.provenance == Provenance::explicit_fv);
  REQUIRE(c.d_min.has_value());
  CHECK(*c.d_min == 3);
  CHECK(c.status == VerifStatus::theorem);
  CHECK(is_mrd(c));
  CHECK(singleton_holds(code_params(c)));

  DistanceReport rep = min_rank_distance(c, ScanMode::exhaustive_mode());
  CHECK(rep.d == 3);
  CHECK(rep.scanned == 4095);
  CHECK(fq_rank(rep.witness) == 3);

  // Independent assembly through the generic composition G o tau_v on the
  // build's own field instance.
  auto tw = pb.U.ambient().tw;
  const int t = pb.params.t;
  const Element a = pb.params.a;
  const Element b = pb.params.b;
  const int i = pb.params.i;
  const FMap f = [&, a, b, i](const Element& x) {
    return tw->add(tw->mul(a, tw->frobenius(x, i)),
                   tw->mul(b, tw->frobenius(x, 2 * t + i)));
  };
  std::vector<FqMat> oracle;
  for (const Element& e : pow_basis(tw, 3 * t)) {
    oracle.push_back(fv_oracle(tw, t, 3, pb.params.omega, f, e, tw->zero()));
    oracle.push_back(fv_oracle(tw, t, 3, pb.params.omega, f, tw->zero(), e));
  }
  RankCode oc = make_rank_code(tw, 2 * t, 3 * t, oracle, Provenance::derived);
  CHECK(codes_equal(oc, c));

  // The same code through the half-dimension subspace pipeline: transpose
  // to domain-rows, then change the domain basis from powers to the
  // product basis.
  RankCode csub = code_from_subspace(pb.U, conj_kernel(tw, 3 * t, pb.params.omega, f));
  CHECK(csub.m == 6);
  CHECK(csub.n == 4);
  CHECK(csub.dim == 12);
  CHECK(*csub.d_min == 3);
  RankCode ct = transpose_code(csub);
  FqMat tchg = product_to_power(tw, t, pb.params.omega);
  REQUIRE(fq_rank(tchg) == 2 * t);
  std::vector<FqMat> mapped;
  for (const FqMat& gmat : ct.generators) mapped.push_back(fq_mul(tchg, gmat));
  RankCode remapped = make_rank_code(tw, 2 * t, 3 * t, mapped, Provenance::derived);
  CHECK(codes_equal(remapped, c));

  // Oracle self-check: codewords are additive in v.
  const Element v0 = tw->pow(tw->subfield_generator(3 * t), 2);
  const Element v1 = tw->add(tw->subfield_generator(3 * t), tw->one());
  FqMat sum = fq_add(fv_oracle(tw, t, 3, pb.params.omega, f, v0, tw->zero()),
                     fv_oracle(tw, t, 3, pb.params.omega, f, tw->zero(), v1));
  CHECK(sum == fv_oracle(tw, t, 3, pb.params.omega, f, v0, v1));
  CHECK(in_span(c, sum));

  // Broken parameters are rejected.
  PlaneConstructionParams bad = pb.params;
  bad.t = 1;
  CHECK_THROWS_AS(explicit_fv_code(bad), std::invalid_argument);
  bad = pb.params;
  bad.i = 2;
  CHECK_THROWS_AS(explicit_fv_code(bad), std::invalid_argument);
  bad = pb.params;
  bad.b = tw->zero();
  CHECK_THROWS_AS(explicit_fv_code(bad), std::invalid_argument);
  bad = pb.params;
  bad.A0 = pb.params.omega;  // not in F_{q^t}
  CHECK_THROWS_AS(explicit_fv_code(bad), std::invalid_argument);
}

TEST_CASE("explicit two-variable codes of the monomial families") {
  MonomialBuild mb = build_monomial_family(QParams{2, 1}, 2, 3, std::nullopt,
                                           MonomialVariant::r_linear);
  REQUIRE(mb.params.i == 3);
  RankCode c = explicit_fv_code(mb.params);
  CHECK(c.m == 4);
  CHECK(c.n == 6);
  CHECK(c.dim == 12);
  REQUIRE(c.d_min.has_value());
  CHECK(*c.d_min == 3);
  CHECK(is_mrd(c));
  DistanceReport rep = min_rank_distance(c, ScanMode::exhaustive_mode());
  CHECK(rep.d == 3);

  // Oracle assembly and the subspace pipeline, as for the plane family.
  auto tw = mb.U.ambient().tw;
  const int t = mb.params.t;
  const int r = mb.params.r;
  const int rt = r * t;
  const Element a = mb.params.a;
  const int i = mb.params.i;
  const FMap f = [&, a, i](const Element& x) {
    return tw->mul(a, tw->frobenius(x, i));
  };
  std::vector<FqMat> oracle;
  for (const Element& e : pow_basis(tw, rt)) {
    oracle.push_back(fv_oracle(tw, t, r, mb.params.omega, f, e, tw->zero()));
    oracle.push_back(fv_oracle(tw, t, r, mb.params.omega, f, tw->zero(), e));
  }
  CHECK(codes_equal(make_rank_code(tw, 2 * t, rt, oracle, Provenance::derived), c));

  RankCode csub = code_from_subspace(mb.U, conj_kernel(tw, rt, mb.params.omega, f));
  CHECK(csub.dim == 2 * rt);
  CHECK(*csub.d_min == 2 * t - 1);
  FqMat tchg = product_to_power(tw, t, mb.params.omega);
  std::vector<FqMat> mapped;
  for (const FqMat& gmat : transpose_code(csub).generators)
    mapped.push_back(fq_mul(tchg, gmat));
  CHECK(codes_equal(make_rank_code(tw, 2 * t, rt, mapped, Provenance::derived), c));

  // The variant's defining linearity: mu F_v = F_{mu v} for mu in F_{q^r},
  // i.e. post-multiplying by the multiplication matrix matches re-indexing.
  const Element v0 = tw->pow(tw->subfield_generator(rt), 2);
  const Element v1 = tw->add(tw->pow(tw->subfield_generator(rt), 5), tw->one());
  for (const Element& mu :
       {tw->subfield_generator(r),
        tw->add(tw->subfield_generator(r), tw->one())}) {
    FqMat lhs = fv_oracle(tw, t, r, mb.params.omega, f, tw->mul(mu, v0),
                          tw->mul(mu, v1));
    FqMat rhs = fq_mul(fv_oracle(tw, t, r, mb.params.omega, f, v0, v1),
                       fq_transpose(mult_matrix(tw, rt, mu)));
    CHECK(lhs == rhs);
    CHECK(in_span(c, lhs));
  }
  // ... and it genuinely fails outside F_{q^r}.
  {
    const Element mu = tw->subfield_generator(rt);
    FqMat lhs = fv_oracle(tw, t, r, mb.params.omega, f, tw->mul(mu, v0),
                          tw->mul(mu, v1));
    FqMat rhs = fq_mul(fv_oracle(tw, t, r, mb.params.omega, f, v0, v1),
                       fq_transpose(mult_matrix(tw, rt, mu)));
    CHECK(lhs != rhs);
  }

  // The coprime variant over q = 4: theorem data plus a sampled cross-check
  // (the full scan is beyond the default budget).
  MonomialBuild cb = build_monomial_family(QParams{2, 2}, 2, 3, std::nullopt,
                                           MonomialVariant::coprime);
  REQUIRE(cb.params.i == 1);
  RankCode cc = explicit_fv_code(cb.params);
  CHECK(cc.m == 4);
  CHECK(cc.n == 6);
  CHECK(cc.dim == 12);
  CHECK(*cc.d_min == 3);
  CHECK(is_mrd(cc));
  CHECK(singleton_holds(code_params(cc)));
  DistanceReport crep = min_rank_distance(cc, ScanMode::sample_mode(2000, 11));
  CHECK(!crep.exact);
  CHECK(crep.d >= 3);
  cache_distance(cc, crep);
  CHECK(cc.status == VerifStatus::theorem);

  // Broken parameters are rejected.
  MonomialParams badm = mb.params;
  badm.i = 1;  // gcd(i, rt) = 1 != r for this variant
  CHECK_THROWS_AS(explicit_fv_code(badm), std::invalid_argument);
  badm = mb.params;
  badm.r = 4;
  CHECK_THROWS_AS(explicit_fv_code(badm), std::invalid_argument);
  badm = mb.params;
  badm.a = tw->zero();
  CHECK_THROWS_AS(explicit_fv_code(badm), std::invalid_argument);
  MonomialParams badc = cb.params;
  badc.variant = MonomialVariant::r_linear;  // wrong gcd profile for i = 1
  CHECK_THROWS_AS(explicit_fv_code(badc), std::invalid_argument);
}

TEST_CASE("distance scans: partitioning, sampling, and caching") {
  PlaneBuild pb = build_scattered_plane(QParams{2, 1}, 2);
  RankCode c = explicit_fv_code(pb.params);

  DistanceReport one = min_rank_distance(c, ScanMode::exhaustive_mode());
  DistanceReport again = min_rank_distance(c, ScanMode::exhaustive_mode());
  CHECK(one.d == again.d);
  CHECK(one.witness_index == again.witness_index);
  CHECK(one.witness == again.witness);

  // The partition into worker ranges never changes the result.
  setenv("SCATMRD_WORKERS", "3", 1);
  DistanceReport split = min_rank_distance(c, ScanMode::exhaustive_mode());
  unsetenv("SCATMRD_WORKERS");
  CHECK(split.d == one.d);
  CHECK(split.witness_index == one.witness_index);
  CHECK(split.witness == one.witness);

  // Seeded sampling is reproducible and upper-bounds the true distance.
  DistanceReport s1 = min_rank_distance(c, ScanMode::sample_mode(500, 42));
  DistanceReport s2 = min_rank_distance(c, ScanMode::sample_mode(500, 42));
  CHECK(s1.d == s2.d);
  CHECK(s1.witness_index == s2.witness_index);
  CHECK(s1.d >= one.d);
  CHECK(!s1.exact);
  CHECK(fq_rank(s1.witness) == s1.d);

  CHECK_THROWS_AS(min_rank_distance(c, ScanMode::sample_mode(0, 1)),
                  std::invalid_argument);

  // Caching: contradictions are refused in both directions.
  RankCode fake = c;
  fake.d_min = 2;  // wrong on purpose
  CHECK_THROWS_AS(cache_distance(fake, one), std::logic_error);
  RankCode high = c;
  high.d_min = 5;  // higher than a sampled codeword's rank
  DistanceReport slow = min_rank_distance(c, ScanMode::sample_mode(200, 3));
  if (slow.d < 5) CHECK_THROWS_AS(cache_distance(high, slow), std::logic_error);

  // A sampled report never upgrades the label.
  RankCode fresh = make_rank_code(c.tw, c.m, c.n, c.generators, c.provenance);
  CHECK(fresh.status == VerifStatus::unverified);
  cache_distance(fresh, s1);
  CHECK(fresh.status == VerifStatus::unverified);
  CHECK(!fresh.d_min.has_value());
  cache_distance(fresh, one);
  CHECK(fresh.status == VerifStatus::exhaustive);
  CHECK(fresh.d_min == one.d);
}

TEST_CASE("transposition preserves the metric structure") {
  PlaneBuild pb = build_scattered_plane(QParams{2, 1}, 2);
  RankCode c = explicit_fv_code(pb.params);
  RankCode t = transpose_code(c);
  CHECK(t.m == c.n);
  CHECK(t.n == c.m);
  CHECK(t.dim == c.dim);
  CHECK(t.d_min == c.d_min);
  CHECK(t.status == c.status);
  CHECK(t.provenance == Provenance::derived);

  DistanceReport rc = min_rank_distance(c, ScanMode::exhaustive_mode());
  DistanceReport rt = min_rank_distance(t, ScanMode::exhaustive_mode());
  CHECK(rc.d == rt.d);

  RankCode back = transpose_code(t);
  CHECK(codes_equal(back, c));
  CHECK(back.d_min == c.d_min);
}

TEST_CASE("code equality is a congruence on spans") {
  RankCode g = gabidulin_code(QParams{2, 1}, 4, 2, 1);

  // Permuted and rescaled generating sets span the same code.
  std::vector<FqMat> shuffled(g.generators.rbegin(), g.generators.rend());
  shuffled[0] = fq_add(shuffled[0], shuffled[1]);
  RankCode h = make_rank_code(g.tw, 4, 4, shuffled, Provenance::derived);
  CHECK(codes_equal(g, h));
  CHECK(codes_equal(h, g));
  CHECK(codes_equal(g, g));

  // A proper subcode is not equal.
  RankCode sub = make_rank_code(
      g.tw, 4, 4,
      std::vector<FqMat>(g.generators.begin(), g.generators.begin() + 4),
      Provenance::derived);
  CHECK(!codes_equal(g, sub));

  // Shape mismatches are errors, not inequality.
  RankCode g5 = gabidulin_code(QParams{2, 1}, 5, 2, 1);
  CHECK_THROWS_AS(codes_equal(g, g5), std::invalid_argument);
  RankCode gq4 = gabidulin_code(QParams{2, 2}, 4, 2, 1);
  CHECK_THROWS_AS(codes_equal(g, gq4), std::invalid_argument);
}

TEST_CASE("every constructed code obeys the size bound") {
  std::vector<RankCode> codes;
  codes.push_back(gabidulin_code(QParams{2, 1}, 4, 2, 1));
  codes.push_back(gabidulin_code(QParams{2, 1}, 5, 3, 2));
  codes.push_back(gabidulin_code(QParams{3, 1}, 3, 2, 1));
  PlaneBuild pb = build_scattered_plane(QParams{2, 1}, 2);
  codes.push_back(explicit_fv_code(pb.params));
  codes.push_back(code_from_subspace(pb.U));
  auto tw = Tower::make_q(2, 1, {1, 2, 4});
  codes.push_back(
      sheekey_code(LinearizedPoly::monomial(tw, 4, 1, tw->one()), 4));
  for (const RankCode& c : codes) {
    CHECK(singleton_holds(code_params(c)));
    CHECK(c.status == VerifStatus::theorem);
  }

  // The half-dimension pipeline on the plane: parameters as printed.
  const RankCode& plane_sub = codes[4];
  CHECK(plane_sub.m == 6);
  CHECK(plane_sub.n == 4);
  CHECK(plane_sub.dim == 12);
  CHECK(*plane_sub.d_min == 3);
  CHECK(is_mrd(plane_sub));
}
