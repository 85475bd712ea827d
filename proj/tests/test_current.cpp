#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "ahlfors/current.hpp"

using namespace ahlfors;

namespace {

LiftedDisc random_disc(Rng& rng, int max_degree, double radius) {
  const int deg = rng.uniform_int(1, max_degree);
  CoeffList c(deg + 1);
  for (int k = 0; k <= deg; ++k) c[k] = rng.in_disc(1.0);
  if (std::abs(c[deg]) < 0.1) c[deg] += cplx(0.5, 0.0);
  return LiftedDisc::scalar(0.0, radius, c);
}

// Independent brute-force oracle: polar midpoint rule with one Richardson
// step, sharing nothing with the production quadrature path.
struct BruteResult {
  double area;
  double numerator;
};

BruteResult brute_pass(const LiftedDisc& disc, const TestForm& form, const LatticeTorus& torus,
                       int nr, int nt) {
  const double hr = disc.radius / nr;
  const double ht = kTwoPi / nt;
  double area = 0.0, num = 0.0;
  for (int i = 0; i < nr; ++i) {
    const double rho = (i + 0.5) * hr;
    for (int j = 0; j < nt; ++j) {
      const double th = (j + 0.5) * ht;
      auto [v, d] = disc.eval_d(disc.center + std::polar(rho, th));
      const double w = rho * hr * ht;
      area += w * torus.omega_sq(d);
      num += w * form_density(form, v, d, torus);
    }
  }
  return {area, num};
}

double brute_pairing(const LiftedDisc& disc, const TestForm& form, const LatticeTorus& torus,
                     int nr, int nt) {
  BruteResult coarse = brute_pass(disc, form, torus, nr / 2, nt / 2);
  BruteResult fine = brute_pass(disc, form, torus, nr, nt);
  const double area = (4.0 * fine.area - coarse.area) / 3.0;
  const double num = (4.0 * fine.numerator - coarse.numerator) / 3.0;
  return num / area;
}

}  // namespace

TEST_CASE("metric functionals closed forms") {
  LatticeTorus t = default_square_torus();
  QuadratureGrid g;

  SECTION("identity on D_2") {
    auto d = LiftedDisc::scalar(0.0, 2.0, {{0, 0}, {1, 0}});
    auto [area, len, ratio] = metric_functionals(d, t, g);
    CHECK(area == Catch::Approx(4.0 * kPi).epsilon(1e-10));
    CHECK(len == Catch::Approx(4.0 * kPi).epsilon(1e-10));
    CHECK(ratio == Catch::Approx(1.0).epsilon(1e-10));
  }
  SECTION("cube on the unit disc") {
    auto d = LiftedDisc::scalar(0.0, 1.0, {{0, 0}, {0, 0}, {0, 0}, {1, 0}});
    auto [area, len, ratio] = metric_functionals(d, t, g);
    CHECK(area == Catch::Approx(3.0 * kPi).epsilon(1e-10));
    CHECK(len == Catch::Approx(6.0 * kPi).epsilon(1e-10));
    CHECK(ratio == Catch::Approx(2.0).epsilon(1e-10));
  }
  SECTION("ratio 2/r for the identity map") {
    for (double r : {1.0, 2.0, 4.0, 8.0}) {
      auto d = LiftedDisc::scalar(0.0, r, {{0, 0}, {1, 0}});
      auto [area, len, ratio] = metric_functionals(d, t, g);
      CHECK(area == Catch::Approx(kPi * r * r).epsilon(1e-8));
      CHECK(len == Catch::Approx(kTwoPi * r).epsilon(1e-8));
      CHECK(ratio == Catch::Approx(2.0 / r).epsilon(1e-8));
    }
  }
  SECTION("closed-form area oracle for random lifts") {
    // area of P over D(0,r) = pi * sum_k k |a_k|^2 r^{2k}
    Rng rng(11);
    for (int rep = 0; rep < 5; ++rep) {
      auto d = random_disc(rng, 6, 1.5);
      double expected = 0.0;
      for (int k = 1; k < static_cast<int>(d.coeffs[0].size()); ++k)
        expected += k * std::norm(d.coeffs[0][k]) * std::pow(d.radius, 2.0 * k);
      expected *= kPi;
      auto [area, len, ratio] = metric_functionals(d, t, g);
      (void)len;
      (void)ratio;
      CHECK(area == Catch::Approx(expected).epsilon(1e-9));
    }
  }
  SECTION("constant maps are degenerate") {
    auto d = LiftedDisc::scalar(0.0, 1.0, {{3.0, 0.0}}, true);
    CHECK_THROWS_AS(metric_functionals(d, t, QuadratureGrid{}), DegenerateDisc);
  }
}

TEST_CASE("mass normalization") {
  LatticeTorus t = default_square_torus();
  QuadratureGrid g;
  TestForm omega = test_form_by_index(0, t);
  Rng rng(101);
  for (int rep = 0; rep < 10; ++rep) {
    auto d = random_disc(rng, 6, rng.uniform(0.5, 2.0));
    CHECK(pair_with_form(d, omega, t, g) == Catch::Approx(1.0).margin(1e-10));
  }
}

TEST_CASE("Bessel pairing oracle") {
  LatticeTorus t = default_square_torus();
  QuadratureGrid g;
  TestForm form = test_form_by_index(0, t);
  form.mode = {1, 0};
  form.sin_branch = false;
  form.index = -1;

  for (double r : {1.0, 2.0}) {
    auto d = LiftedDisc::scalar(0.0, r, {{0, 0}, {1, 0}});
    const double impl = pair_with_form(d, form, t, g);
    const double brute = brute_pairing(d, form, t, 1000, 1000);
    const double bessel = std::cyl_bessel_j(1, kTwoPi * r) / (kPi * r);
    CHECK(impl == Catch::Approx(brute).margin(1e-6));
    CHECK(impl == Catch::Approx(bessel).margin(1e-8));
  }
  SECTION("large radius decay") {
    auto d = LiftedDisc::scalar(0.0, 10.0, {{0, 0}, {1, 0}});
    CHECK(std::abs(pair_with_form(d, form, t, g)) < 0.02);
  }
}

TEST_CASE("quadrature oracle equivalence on random discs") {
  LatticeTorus t = default_square_torus();
  QuadratureGrid g;
  Rng rng(55);
  for (int rep = 0; rep < 5; ++rep) {
    auto d = random_disc(rng, 6, rng.uniform(0.6, 1.4));
    TestForm f = test_form_by_index(rng.uniform_int(1, 8), t);
    const double impl = pair_with_form(d, f, t, g);
    const double brute = brute_pairing(d, f, t, 1000, 1000);
    CHECK(impl == Catch::Approx(brute).margin(1e-5));
  }
}

TEST_CASE("reparametrization invariance of the current evaluation") {
  LatticeTorus t = default_square_torus();
  QuadratureGrid g;
  auto forms = first_test_forms(8, t);
  Rng rng(77);

  SECTION("rescale to unit preserves everything") {
    for (int rep = 0; rep < 5; ++rep) {
      auto d = random_disc(rng, 5, rng.uniform(0.5, 3.0));
      auto u = reparametrize(d, ReparamMode::rescale_to_unit);
      auto ed = current_evaluation(d, forms, t, g);
      auto eu = current_evaluation(u, forms, t, g);
      CHECK(eu.ratio == Catch::Approx(ed.ratio).margin(1e-9));
      CHECK(eu.area == Catch::Approx(ed.area).margin(1e-9 * std::max(1.0, ed.area)));
      for (std::size_t j = 0; j < forms.size(); ++j)
        CHECK(eu.pairings[j] == Catch::Approx(ed.pairings[j]).margin(1e-10));
    }
  }

  SECTION("k-fold covering invariance for k = 1..8") {
    auto forms16 = first_test_forms(16, t);
    auto base = LiftedDisc::scalar(0.0, 1.0, {{0.1, 0.2}, {0.9, 0.0}, {0.0, 0.3}});
    auto base_eval = current_evaluation(base, forms16, t, g);
    for (int k = 1; k <= 8; ++k) {
      ReparamParams p;
      p.k = k;
      p.target_c = cplx(5.0, 0.0);
      auto folded = reparametrize(base, ReparamMode::k_fold, p);
      auto ev = current_evaluation(folded, forms16, t, g);
      CHECK(ev.ratio == Catch::Approx(base_eval.ratio).margin(1e-8));
      CHECK(ev.area == Catch::Approx(k * base_eval.area).epsilon(1e-8));
      for (std::size_t j = 0; j < forms16.size(); ++j)
        CHECK(ev.pairings[j] == Catch::Approx(base_eval.pairings[j]).margin(1e-8));
    }
  }
}

TEST_CASE("admissible set functionals") {
  LatticeTorus t = default_square_torus();
  QuadratureGrid g;
  auto forms = first_test_forms(4, t);

  SECTION("single disc reduces to the plain evaluation") {
    AdmissibleSetGeometry geo;
    geo.discs.push_back({cplx(0.0, 0.0), 1.5});
    auto d = LiftedDisc::scalar(0.0, 1.5, {{0, 0}, {1, 0}});
    SetPieces pieces;
    pieces.disc_maps.push_back(map_of(d));
    auto ev = admissible_set_functionals(pieces, geo, forms, t, g);
    auto direct = current_evaluation(d, forms, t, g);
    CHECK(ev.area == Catch::Approx(direct.area).epsilon(1e-10));
    CHECK(ev.length == Catch::Approx(direct.length).epsilon(1e-10));
    CHECK(ev.ratio == Catch::Approx(direct.ratio).epsilon(1e-10));
  }

  SECTION("two discs with a zero-width bridge: segment counted twice") {
    AdmissibleSetGeometry geo;
    geo.discs.push_back({cplx(0.0, 0.0), 1.0});
    geo.discs.push_back({cplx(3.0, 0.0), 1.0});
    geo.segments.push_back({cplx(1.0, 0.0), cplx(2.0, 0.0), 0, 1});

    auto left = LiftedDisc::scalar(0.0, 1.0, {{0, 0}, {1, 0}});
    // right disc maps z -> (z - 3) + 1.3 so the bridge spans 1 -> 1.3
    auto right = LiftedDisc::make(cplx(3.0, 0.0), 1.0, {{{1.3, 0.0}, {1.0, 0.0}}});
    SetPieces pieces;
    pieces.disc_maps.push_back(map_of(left));
    pieces.disc_maps.push_back(map_of(right));
    const cplx a(1.0, 0.0), b(1.3, 0.0);
    pieces.segment_maps.push_back([a, b](double s) {
      return CurveJet{CVec{a + s * (b - a)}, CVec{b - a}};
    });

    auto ev = admissible_set_functionals(pieces, geo, forms, t, g);
    const double lb = 0.3;
    CHECK(ev.area == Catch::Approx(2.0 * kPi).epsilon(1e-9));
    CHECK(ev.length == Catch::Approx(2.0 * kTwoPi + 2.0 * lb).epsilon(1e-9));
    CHECK(ev.ratio == Catch::Approx((2.0 * kTwoPi + 2.0 * lb) / (2.0 * kPi)).epsilon(1e-9));

    // oracle: direct summation of the two disc evaluations plus the bridge
    auto el = current_evaluation(left, forms, t, g);
    auto er = current_evaluation(right, forms, t, g);
    const double oracle_ratio =
        (el.length + er.length + 2.0 * lb) / (el.area + er.area);
    CHECK(ev.ratio == Catch::Approx(oracle_ratio).epsilon(1e-9));
  }

  SECTION("missing pieces are rejected") {
    AdmissibleSetGeometry geo;
    geo.discs.push_back({cplx(0.0, 0.0), 1.0});
    SetPieces pieces;
    CHECK_THROWS_AS(admissible_set_functionals(pieces, geo, forms, t, g), InconsistentPieces);
  }
}

TEST_CASE("ahlfors radii selection") {
  LatticeTorus t = default_square_torus();
  QuadratureGrid g;
  const std::vector<double> grid{1, 2, 4, 8, 16, 32, 64};

  SECTION("identity lift at threshold 0.1") {
    auto d = LiftedDisc::scalar(0.0, 64.0, {{0, 0}, {1, 0}});
    auto radii = select_ahlfors_radii(d, grid, 0.1, t, g);
    CHECK(radii == std::vector<double>{32, 64});
  }
  SECTION("threshold 10 keeps the whole grid") {
    auto d = LiftedDisc::scalar(0.0, 64.0, {{0, 0}, {1, 0}});
    auto radii = select_ahlfors_radii(d, grid, 10.0, t, g);
    CHECK(radii == grid);
  }
  SECTION("cube lift against the metric sweep oracle") {
    auto d = LiftedDisc::scalar(0.0, 64.0, {{0, 0}, {0, 0}, {0, 0}, {1, 0}});
    auto radii = select_ahlfors_radii(d, grid, 0.1, t, g);
    std::vector<double> oracle;
    for (double r : grid) {
      auto [area, len, ratio] = metric_functionals(d.restricted(r), t, g);
      (void)area;
      (void)len;
      if (ratio < 0.1) oracle.push_back(r);
    }
    CHECK(radii == oracle);
  }
}
