#pragma once

// Ahlfors-type current functionals: normalized pairings with test forms,
// areas, boundary lengths and length-area ratios for discs and admissible
// sets, plus the Ahlfors radii selection sweep.

#include <functional>
#include <optional>
#include <tuple>
#include <vector>

#include "ahlfors/disc.hpp"
#include "ahlfors/quadrature.hpp"
#include "ahlfors/torus.hpp"

namespace ahlfors {

struct MapJet {
  CVec value;
  CVec deriv;  // complex derivative of the lift
};
using MapFn = std::function<MapJet(cplx)>;

inline MapFn map_of(const LiftedDisc& disc) {
  return [disc](cplx z) {
    auto [v, d] = disc.eval_d(z);
    return MapJet{std::move(v), std::move(d)};
  };
}

// Curve along a segment, parametrized by t in [0,1]; deriv is d/dt.
struct CurveJet {
  CVec value;
  CVec deriv;
};
using CurveFn = std::function<CurveJet(double)>;

struct CurrentEvaluation {
  std::vector<double> pairings;  // A_f(eta_j), mass-normalized
  std::vector<double> pairing_err;
  double area = 0.0, area_err = 0.0;
  double length = 0.0, length_err = 0.0;
  double ratio = 0.0, ratio_err = 0.0;
};

// Unnormalized building block: area, form numerators, boundary length.
struct RawFunctionals {
  double area = 0.0, area_err = 0.0;
  std::vector<double> numerators;  // integral of f* eta_j (unnormalized)
  std::vector<double> numer_err;
  double boundary = 0.0, boundary_err = 0.0;

  RawFunctionals() = default;
  explicit RawFunctionals(std::size_t nforms)
      : numerators(nforms, 0.0), numer_err(nforms, 0.0) {}

  void add(const RawFunctionals& o) {
    area += o.area;
    area_err += o.area_err;
    boundary += o.boundary;
    boundary_err += o.boundary_err;
    for (std::size_t j = 0; j < numerators.size(); ++j) {
      numerators[j] += o.numerators[j];
      numer_err[j] += o.numer_err[j];
    }
  }
};

inline CurrentEvaluation normalize_functionals(const RawFunctionals& raw) {
  if (raw.area < 1e-14) throw DegenerateDisc("area below the degeneracy cutoff");
  CurrentEvaluation ev;
  ev.area = raw.area;
  ev.area_err = raw.area_err;
  ev.length = raw.boundary;
  ev.length_err = raw.boundary_err;
  ev.ratio = raw.boundary / raw.area;
  ev.ratio_err = (raw.boundary_err + ev.ratio * raw.area_err) / raw.area;
  ev.pairings.resize(raw.numerators.size());
  ev.pairing_err.resize(raw.numerators.size());
  for (std::size_t j = 0; j < raw.numerators.size(); ++j) {
    ev.pairings[j] = raw.numerators[j] / raw.area;
    ev.pairing_err[j] =
        (raw.numer_err[j] + std::abs(ev.pairings[j]) * raw.area_err) / raw.area;
  }
  return ev;
}

namespace detail {

// Interior densities: [omega-density, form_0 density, ..., form_{J-1} density].
inline void interior_densities(const MapJet& jet, const std::vector<TestForm>& forms,
                               const LatticeTorus& torus, std::vector<double>& out) {
  out[0] = torus.omega_sq(jet.deriv);
  for (std::size_t j = 0; j < forms.size(); ++j)
    out[j + 1] = form_density(forms[j], jet.value, jet.deriv, torus);
}

}  // namespace detail

// Raw functionals of a generic holomorphic map piece over a round disc.
inline RawFunctionals disc_raw_functionals(const MapFn& map, cplx center, double radius,
                                           const std::vector<TestForm>& forms,
                                           const LatticeTorus& torus,
                                           const QuadratureGrid& grid) {
  const int n_out = static_cast<int>(forms.size()) + 1;
  double ierr = 0.0, berr = 0.0;
  auto evaluate = [&](cplx z, std::vector<double>& out) {
    detail::interior_densities(map(z), forms, torus, out);
  };
  std::vector<double> interior =
      disc_integrate_multi(evaluate, n_out, center, radius, grid, ierr);
  auto boundary_eval = [&](cplx z, std::vector<double>& out) {
    out[0] = torus.omega_norm(map(z).deriv);
  };
  std::vector<double> boundary =
      circle_integrate_multi(boundary_eval, 1, center, radius, grid, berr);

  RawFunctionals raw(forms.size());
  raw.area = interior[0];
  raw.area_err = ierr * std::max(1.0, std::abs(interior[0]));
  for (std::size_t j = 0; j < forms.size(); ++j) {
    raw.numerators[j] = interior[j + 1];
    raw.numer_err[j] = ierr * std::max(1.0, std::abs(interior[j + 1]));
  }
  raw.boundary = boundary[0];
  raw.boundary_err = berr * std::max(1.0, boundary[0]);
  return raw;
}

inline RawFunctionals disc_raw_functionals(const LiftedDisc& disc,
                                           const std::vector<TestForm>& forms,
                                           const LatticeTorus& torus,
                                           const QuadratureGrid& grid) {
  return disc_raw_functionals(map_of(disc), disc.center, disc.radius, forms, torus, grid);
}

// Area, boundary length and length-area ratio of a disc.
inline std::tuple<double, double, double> metric_functionals(const LiftedDisc& disc,
                                                             const LatticeTorus& torus,
                                                             const QuadratureGrid& grid) {
  if (disc.constant_flag) throw DegenerateDisc("metric functionals of a constant disc");
  RawFunctionals raw = disc_raw_functionals(disc, {}, torus, grid);
  if (raw.area < 1e-14) throw DegenerateDisc("area below the degeneracy cutoff");
  return {raw.area, raw.boundary, raw.boundary / raw.area};
}

// Normalized pairing (1/Area) int f* eta.
inline double pair_with_form(const LiftedDisc& disc, const TestForm& form,
                             const LatticeTorus& torus, const QuadratureGrid& grid) {
  if (disc.constant_flag) throw DegenerateDisc("pairing of a constant disc");
  RawFunctionals raw = disc_raw_functionals(disc, {form}, torus, grid);
  if (raw.area < 1e-14) throw DegenerateDisc("area below the degeneracy cutoff");
  return raw.numerators[0] / raw.area;
}

inline CurrentEvaluation current_evaluation(const LiftedDisc& disc,
                                            const std::vector<TestForm>& forms,
                                            const LatticeTorus& torus,
                                            const QuadratureGrid& grid) {
  return normalize_functionals(disc_raw_functionals(disc, forms, torus, grid));
}

// ---------------------------------------------------------------------------
// Admissible sets: disjoint closed discs joined by transversally attached
// segments, with an optional thickened neck of half-width w.
// ---------------------------------------------------------------------------

struct DiscSpec {
  cplx center{0.0, 0.0};
  double radius = 1.0;
};

struct SegmentSpec {
  cplx q{0.0, 0.0};  // endpoint on the first disc's boundary
  cplx p{0.0, 0.0};  // endpoint on the second disc's boundary
  int disc_a = 0;    // indices into the disc list
  int disc_b = 1;
};

struct AdmissibleSetGeometry {
  std::vector<DiscSpec> discs;
  std::vector<SegmentSpec> segments;
  double neck_half_width = 0.0;

  void validate() const {
    for (std::size_t i = 0; i < discs.size(); ++i)
      for (std::size_t j = i + 1; j < discs.size(); ++j) {
        const double gap = std::abs(discs[i].center - discs[j].center) -
                           (discs[i].radius + discs[j].radius);
        if (gap <= 0.0) throw InconsistentPieces("admissible set discs must be disjoint");
      }
    const double min_radial = std::sin(10.0 * kPi / 180.0);
    for (const auto& s : segments) {
      const auto& A = discs.at(s.disc_a);
      const auto& B = discs.at(s.disc_b);
      if (std::abs(std::abs(s.q - A.center) - A.radius) > 1e-9 ||
          std::abs(std::abs(s.p - B.center) - B.radius) > 1e-9)
        throw InconsistentPieces("segment endpoints must lie on the disc boundaries");
      const cplx dir = (s.p - s.q) / std::abs(s.p - s.q);
      const cplx ra = (s.q - A.center) / std::abs(s.q - A.center);
      const cplx rb = (s.p - B.center) / std::abs(s.p - B.center);
      if (std::abs((dir * std::conj(ra)).real()) < min_radial ||
          std::abs((dir * std::conj(rb)).real()) < min_radial)
        throw InconsistentPieces("segment does not meet the disc boundary transversally");
    }
  }
};

struct SetPieces {
  std::vector<MapFn> disc_maps;     // one per geometry disc
  std::vector<CurveFn> segment_maps;  // one per segment (w = 0 bridges)
  std::optional<MapFn> neck_map;    // required when neck_half_width > 0
};

inline double curve_length_omega(const CurveFn& curve, const LatticeTorus& torus,
                                 int panels = 16, int order = 16) {
  return integrate_segment(
      [&](double t) { return torus.omega_norm(curve(t).deriv); }, 0.0, 1.0, panels, order);
}

namespace detail {

// Angle on circle (c, r) of the point z.
inline double circle_angle(cplx z, cplx c) { return std::arg(z - c); }

// Signed transverse offset of z from the segment line through q with unit
// direction dir.
inline double transverse_offset(cplx z, cplx q, cplx dir) {
  return ((z - q) * std::conj(dir)).imag();
}

// Find the angular half-widths around the attachment point where the disc
// boundary lies inside the strip |offset| <= w (toward the other disc).
inline std::pair<double, double> neck_arc_window(const DiscSpec& disc, cplx attach, cplx dir,
                                                 double w) {
  const double th0 = circle_angle(attach, disc.center);
  auto offset_at = [&](double th) {
    return transverse_offset(disc.center + std::polar(disc.radius, th), attach, dir);
  };
  // Search on both sides of th0 for |offset| = w by bisection.
  auto solve = [&](double sign) {
    double lo = 0.0, hi = 0.0;
    double step = w / std::max(disc.radius, 1e-9);
    for (int it = 0; it < 200; ++it) {
      hi = lo + step;
      if (std::abs(offset_at(th0 + sign * hi)) >= w) break;
      lo = hi;
      step *= 1.5;
      if (hi > kPi / 2) break;
    }
    double a = lo, b = hi;
    for (int it = 0; it < 80; ++it) {
      const double m = 0.5 * (a + b);
      if (std::abs(offset_at(th0 + sign * m)) < w)
        a = m;
      else
        b = m;
    }
    return 0.5 * (a + b);
  };
  return {solve(-1.0), solve(+1.0)};
}

}  // namespace detail

// Functionals of a map defined piecewise over an admissible set. For
// neck_half_width == 0 the boundary counts every segment image twice; for
// w > 0 the neck region is integrated with the supplied neck map and the
// boundary follows the actual thickened-dumbbell boundary.
inline RawFunctionals admissible_set_raw(const SetPieces& pieces,
                                         const AdmissibleSetGeometry& geometry,
                                         const std::vector<TestForm>& forms,
                                         const LatticeTorus& torus, const QuadratureGrid& grid) {
  geometry.validate();
  if (pieces.disc_maps.size() != geometry.discs.size())
    throw InconsistentPieces("every disc needs a map piece");
  if (geometry.neck_half_width == 0.0 && pieces.segment_maps.size() != geometry.segments.size())
    throw InconsistentPieces("every segment needs a curve piece");
  if (geometry.neck_half_width > 0.0 && !geometry.segments.empty() && !pieces.neck_map)
    throw InconsistentPieces("thickened necks need a neck map");

  const double w = geometry.neck_half_width;
  RawFunctionals total(forms.size());
  const int n_out = static_cast<int>(forms.size()) + 1;

  // Disc interiors always contribute in full.
  for (std::size_t i = 0; i < geometry.discs.size(); ++i) {
    RawFunctionals raw = disc_raw_functionals(pieces.disc_maps[i], geometry.discs[i].center,
                                              geometry.discs[i].radius, forms, torus, grid);
    if (w > 0.0) raw.boundary = raw.boundary_err = 0.0;  // recomputed as arcs below
    total.add(raw);
  }

  if (w == 0.0) {
    for (std::size_t s = 0; s < geometry.segments.size(); ++s) {
      const double len = curve_length_omega(pieces.segment_maps[s], torus);
      total.boundary += 2.0 * len;  // the zero-width neck is counted twice
    }
    return total;
  }

  // Thickened neck: interior strip between the two circles, plus the two
  // straight edges; disc boundaries contribute only outside the strip.
  std::vector<std::vector<std::pair<double, double>>> excluded(geometry.discs.size());
  for (const auto& s : geometry.segments) {
    const auto& A = geometry.discs.at(s.disc_a);
    const auto& B = geometry.discs.at(s.disc_b);
    const cplx dir = (s.p - s.q) / std::abs(s.p - s.q);
    const double seg_len = std::abs(s.p - s.q);

    auto window_a = detail::neck_arc_window(A, s.q, dir, w);
    auto window_b = detail::neck_arc_window(B, s.p, dir, w);
    excluded[s.disc_a].push_back({detail::circle_angle(s.q, A.center) - window_a.first,
                                  detail::circle_angle(s.q, A.center) + window_a.second});
    excluded[s.disc_b].push_back({detail::circle_angle(s.p, B.center) - window_b.first,
                                  detail::circle_angle(s.p, B.center) + window_b.second});

    const MapFn& neck = *pieces.neck_map;
    // Strip interior: transverse GL x longitudinal GL with circle-trimmed
    // t-limits per transverse offset.
    std::vector<double> sx, sw;
    gauss_legendre_ab(32, -w, w, sx, sw);
    std::vector<double> tmp(n_out, 0.0);
    auto trim = [&](const DiscSpec& D, cplx base, double off, bool exit_side) {
      // Line z(t) = base + i*dir*off + t*dir; solve |z - c| = r for t.
      const cplx z0 = base + cplx(0.0, 1.0) * dir * off - D.center;
      const double b = (z0 * std::conj(dir)).real();
      const double c2 = std::norm(z0) - D.radius * D.radius;
      const double disc_q = b * b - c2;
      if (disc_q < 0.0) return exit_side ? 0.0 : seg_len;
      const double sq = std::sqrt(disc_q);
      return exit_side ? (-b + sq) : (-b - sq);
    };
    for (int si = 0; si < 32; ++si) {
      const double off = sx[si];
      const double ta = trim(A, s.q, off, true);   // exit from the first disc
      const double tb = trim(B, s.q, off, false);  // entry into the second disc
      if (tb <= ta) continue;
      std::vector<double> tx, tw;
      gauss_legendre_ab(48, ta, tb, tx, tw);
      for (std::size_t ti = 0; ti < tx.size(); ++ti) {
        const cplx z = s.q + cplx(0.0, 1.0) * dir * off + tx[ti] * dir;
        detail::interior_densities(neck(z), forms, torus, tmp);
        total.area += sw[si] * tw[ti] * tmp[0];
        for (std::size_t j = 0; j < forms.size(); ++j)
          total.numerators[j] += sw[si] * tw[ti] * tmp[j + 1];
      }
    }
    // Two straight edges at offsets +-w.
    for (double off : {w, -w}) {
      const double ta = trim(A, s.q, off, true);
      const double tb = trim(B, s.q, off, false);
      if (tb <= ta) continue;
      total.boundary += integrate_segment(
          [&](double t) {
            const cplx z = s.q + cplx(0.0, 1.0) * dir * off + t * dir;
            return torus.omega_norm(neck(z).deriv);
          },
          ta, tb, 8, 16);
    }
  }

  // Disc boundary arcs outside the excluded windows.
  for (std::size_t i = 0; i < geometry.discs.size(); ++i) {
    const auto& D = geometry.discs[i];
    std::vector<std::pair<double, double>> gaps = excluded[i];
    auto arc_integral = [&](double a, double b) {
      return integrate_segment(
          [&](double th) {
            const cplx z = D.center + std::polar(D.radius, th);
            return torus.omega_norm(pieces.disc_maps[i](z).deriv) * D.radius;
          },
          a, b, 12, 16);
    };
    if (gaps.empty()) {
      total.boundary += arc_integral(0.0, kTwoPi);
      continue;
    }
    std::sort(gaps.begin(), gaps.end());
    double cursor = gaps.back().second - kTwoPi;  // start after the last gap, wrapped
    for (const auto& g : gaps) {
      if (g.first > cursor) total.boundary += arc_integral(cursor, g.first);
      cursor = g.second;
    }
  }
  return total;
}

inline CurrentEvaluation admissible_set_functionals(const SetPieces& pieces,
                                                    const AdmissibleSetGeometry& geometry,
                                                    const std::vector<TestForm>& forms,
                                                    const LatticeTorus& torus,
                                                    const QuadratureGrid& grid) {
  return normalize_functionals(admissible_set_raw(pieces, geometry, forms, torus, grid));
}

// Grid radii whose concentric restriction satisfies the length-area
// threshold, in increasing order.
inline std::vector<double> select_ahlfors_radii(const LiftedDisc& lift,
                                                const std::vector<double>& radius_grid,
                                                double threshold, const LatticeTorus& torus,
                                                const QuadratureGrid& grid) {
  if (threshold <= 0.0) throw std::invalid_argument("threshold must be positive");
  for (std::size_t i = 1; i < radius_grid.size(); ++i)
    if (radius_grid[i] <= radius_grid[i - 1])
      throw std::invalid_argument("radius grid must be increasing");
  std::vector<double> out;
  for (double r : radius_grid) {
    auto [area, len, ratio] = metric_functionals(lift.restricted(r), torus, grid);
    (void)area;
    (void)len;
    if (ratio < threshold) out.push_back(r);
  }
  return out;
}

}  // namespace ahlfors
