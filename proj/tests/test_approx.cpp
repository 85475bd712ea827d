#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "ahlfors/approx.hpp"

using namespace ahlfors;

namespace {

MapFn rational_target() {
  // f(z) = 1/(z-2), holomorphic on a neighborhood of the closed unit disc
  return [](cplx z) {
    const cplx den = z - cplx(2.0, 0.0);
    return MapJet{CVec{1.0 / den}, CVec{-1.0 / (den * den)}};
  };
}

}  // namespace

TEST_CASE("runge polyfit") {
  SECTION("1/(z-2) at degree 10 meets the Taylor remainder bound") {
    auto [fit, report] = runge_polyfit(rational_target(), 0.0, 1.0, 10, std::pow(2.0, -11.0), 10);
    CHECK(report.degree == 10);
    CHECK(report.c0_error <= std::pow(2.0, -11.0));
    // dense-grid oracle
    double worst = 0.0;
    for (int j = 0; j < 4096; ++j) {
      const cplx z = std::polar(1.0, kTwoPi * j / 4096.0);
      worst = std::max(worst, std::abs(fit.eval(z)[0] - 1.0 / (z - cplx(2.0, 0.0))));
    }
    CHECK(worst <= std::pow(2.0, -11.0));
  }
  SECTION("polynomial targets are reproduced exactly") {
    auto poly = LiftedDisc::scalar(0.0, 1.0, {{0.3, 0.1}, {1.0, 0.0}, {0.0, -0.7}, {0.2, 0.0}});
    auto [fit, report] = runge_polyfit(map_of(poly), 0.0, 1.0, 8, 1e-12, 8);
    CHECK(report.c0_error <= 1e-12);
    (void)fit;
  }
  SECTION("constant target") {
    MapFn c7 = [](cplx) { return MapJet{CVec{cplx(7.0, 0.0)}, CVec{cplx(0.0, 0.0)}}; };
    auto [fit, report] = runge_polyfit(c7, 0.0, 1.0, 4, 1e-12, 2);
    CHECK(report.c0_error <= 1e-12);
    CHECK(std::abs(fit.eval(cplx(0.3, 0.2))[0] - cplx(7.0, 0.0)) <= 1e-12);
  }
  SECTION("degree cap exceeded carries the best report") {
    bool threw = false;
    try {
      runge_polyfit(rational_target(), 0.0, 1.0, 4, 1e-12, 2);
    } catch (const DegreeCapExceeded& e) {
      threw = true;
      CHECK(e.best.degree > 0);
      CHECK(e.best.c0_error < 1.0);
      CHECK_FALSE(e.best.residual_history.empty());
    }
    CHECK(threw);
  }
  SECTION("validation grid never exceeds the reported error") {
    auto [fit, report] = runge_polyfit(rational_target(), 0.0, 1.0, 32, 1e-6, 8);
    auto validation = sample_disc(rational_target(), 0.0, 1.0, report.degree, 6.0, false);
    for (const auto& s : validation)
      CHECK(std::abs(fit.eval(s.z)[0] - s.value[0]) <= report.c0_error + 1e-12);
  }
}

TEST_CASE("bridges") {
  LatticeTorus t = default_square_torus();

  SECTION("equal constant pieces give a null bridge") {
    auto a = LiftedDisc::scalar(0.0, 1.0, {{0.25, 0.0}}, true);
    auto b = LiftedDisc::make(cplx(3.0, 0.0), 1.0, {{{0.25, 0.0}}}, true);
    BridgeMap bridge = build_bridge(a, b, cplx(1.0, 0.0), cplx(2.0, 0.0), t);
    CHECK(bridge.arclength_omega <= 1e-12);
  }

  SECTION("lattice renormalization forces a short chord") {
    auto a = LiftedDisc::scalar(0.0, 1.0, {{0.0, 0.0}}, true);
    auto b = LiftedDisc::make(cplx(3.0, 0.0), 1.0, {{{7.5, 0.0}}}, true);
    BridgeMap bridge = build_bridge(a, b, cplx(1.0, 0.0), cplx(2.0, 0.0), t);
    // nearest translate of 7.5 ties between 7 and 8; lexicographic rule gives 7
    CHECK(bridge.lambda[0].real() == Catch::Approx(7.0));
    CHECK(bridge.arclength_omega == Catch::Approx(0.5).margin(1e-9));
    CHECK(bridge.arclength_omega <= std::sqrt(2.0) / 2.0 + 0.5);
  }

  SECTION("junction C1 residuals and arclength bound on random data") {
    Rng rng(31337);
    for (int rep = 0; rep < 12; ++rep) {
      CoeffList ca(4), cb(3);
      for (auto& c : ca) c = rng.in_disc(0.8);
      for (auto& c : cb) c = rng.in_disc(0.8);
      ca[1] += cplx(0.3, 0.0);
      cb[1] += cplx(0.3, 0.0);
      auto a = LiftedDisc::scalar(0.0, 1.0, ca);
      auto b = LiftedDisc::make(cplx(3.0, 0.0), 1.0, {cb});
      const cplx q(1.0, 0.0), p(2.0, 0.0);
      BridgeMap bridge = build_bridge(a, b, q, p, t);

      auto [av, ad] = a.eval_d(q);
      auto [bv, bd] = b.eval_d(p);
      CurveJet j0 = bridge.at(0.0);
      CurveJet j1 = bridge.at(1.0);
      CHECK(std::abs(j0.value[0] - av[0]) < 1e-12);
      CHECK(std::abs(j0.deriv[0] - ad[0] * (p - q)) < 1e-12);
      CHECK(std::abs(j1.value[0] - (bv[0] - bridge.lambda[0])) < 1e-12);
      CHECK(std::abs(j1.deriv[0] - bd[0] * (p - q)) < 1e-12);

      // independent arclength oracle at 10^4 samples (trapezoid)
      double oracle = 0.0;
      CVec prev = bridge.at(0.0).value;
      for (int i = 1; i <= 10000; ++i) {
        CVec cur = bridge.at(double(i) / 10000.0).value;
        oracle += std::abs(cur[0] - prev[0]);
        prev = cur;
      }
      CHECK(bridge.arclength_omega == Catch::Approx(oracle).margin(2e-4));
      const double dist = torus_distance(CVec{av}, CVec{bv}, t);
      CHECK(bridge.arclength_omega <= dist + 0.5);
    }
  }
}

TEST_CASE("mergelyan C1 fit") {
  AdmissibleSetGeometry geo;
  geo.discs.push_back({cplx(0.0, 0.0), 1.0});
  geo.discs.push_back({cplx(4.0, 0.0), 1.0});
  geo.segments.push_back({cplx(1.0, 0.0), cplx(3.0, 0.0), 0, 1});

  SECTION("restrictions of one polynomial come back exactly") {
    auto global = LiftedDisc::scalar(0.0, 8.0, {{0.1, 0.0}, {0.25, 0.05}, {0.0, 0.01}});
    MergelyanPieces pieces;
    pieces.piece1 = map_of(global);
    pieces.piece2 = map_of(global);
    const cplx q(1.0, 0.0), p(3.0, 0.0);
    pieces.bridge = [global, q, p](double s) {
      const cplx z = q + s * (p - q);
      auto [v, d] = global.eval_d(z);
      CurveJet jet;
      jet.value = v;
      jet.deriv = CVec{d[0] * (p - q)};
      return jet;
    };
    auto [fit, report] = mergelyan_c1_fit(geo, pieces, 1e-10, 64, 8);
    CHECK(report.c1_error <= 1e-10);
    CHECK(std::abs(fit.eval(cplx(4.3, 0.1))[0] - global.eval(cplx(4.3, 0.1))[0]) < 1e-9);
  }

  SECTION("constant pieces 0 and 0.5 joined by a bridge") {
    LatticeTorus t = default_square_torus();
    auto a = LiftedDisc::scalar(0.0, 1.0, {{0.0, 0.0}}, true);
    auto b = LiftedDisc::make(cplx(4.0, 0.0), 1.0, {{{0.5, 0.0}}}, true);
    BridgeMap bridge = build_bridge(a, b, cplx(1.0, 0.0), cplx(3.0, 0.0), t);
    MergelyanPieces pieces{map_of(a), map_of(b.translated_by(bridge.lambda)), bridge.curve()};
    auto [fit, report] = mergelyan_c1_fit(geo, pieces, 1e-3, 120, 16);
    CHECK(report.c1_error < 1e-3);
    CHECK(report.degree <= 120);
    (void)fit;
  }

  SECTION("cubic against identity reaches 1e-3 by degree 200") {
    LatticeTorus t = default_square_torus();
    auto a = LiftedDisc::scalar(0.0, 1.0, {{0.0, 0.0}, {1.0, 0.0}});
    auto b = LiftedDisc::make(cplx(4.0, 0.0), 1.0,
                              {{{0.2, 0.0}, {0.0, 0.0}, {0.0, 0.0}, {1.0, 0.0}}});
    BridgeMap bridge = build_bridge(a, b, cplx(1.0, 0.0), cplx(3.0, 0.0), t);
    MergelyanPieces pieces{map_of(a), map_of(b.translated_by(bridge.lambda)), bridge.curve()};
    auto [fit, report] = mergelyan_c1_fit(geo, pieces, 1e-3, 200, 25);
    CHECK(report.c1_error < 1e-3);
    CHECK(report.degree <= 200);
    (void)fit;
  }
}

TEST_CASE("extend doubling") {
  SECTION("polynomial input is already entire") {
    auto d = LiftedDisc::scalar(0.0, 1.0, {{0, 0}, {1, 0}});
    auto rep = extend_doubling(d, 0.25, 4);
    CHECK(rep.total_error == 0.0);
    CHECK(rep.lift.radius == Catch::Approx(16.0));
    CHECK(rep.lift.coeffs == d.coeffs);
  }
  SECTION("truncated exponential series is returned unchanged") {
    CoeffList c(13);
    double fact = 1.0;
    for (int k = 0; k <= 12; ++k) {
      if (k > 0) fact *= k;
      c[k] = cplx(1.0 / fact, 0.0);
    }
    auto d = LiftedDisc::scalar(0.0, 1.0, c);
    auto rep = extend_doubling(d, 0.1, 3);
    CHECK(rep.lift.coeffs == d.coeffs);
    CHECK(rep.total_error == 0.0);
  }
  SECTION("geometric budget sum") {
    auto d = LiftedDisc::scalar(0.0, 1.0, {{0, 0}, {1, 0}});
    auto rep = extend_doubling(d, 0.1, 5);
    CHECK(rep.total_budget == Catch::Approx(0.096875).margin(1e-15));
  }
}
