#pragma once

// Holomorphic discs into the torus, represented by polynomial lifts to C^d.
// Coefficients are stored in powers of (z - center) so that the k-fold
// reparametrization stays sparse and exact.

#include <utility>
#include <vector>

#include "ahlfors/complex_poly.hpp"
#include "ahlfors/torus.hpp"
#include "ahlfors/util.hpp"

namespace ahlfors {

struct LiftedDisc {
  cplx center{0.0, 0.0};
  double radius = 1.0;
  std::vector<CoeffList> coeffs;  // one list per target coordinate
  bool constant_flag = false;

  int dim() const { return static_cast<int>(coeffs.size()); }
  int degree() const {
    int deg = 0;
    for (const auto& c : coeffs) deg = std::max(deg, poly_degree(c));
    return deg;
  }

  static LiftedDisc make(cplx center, double radius, std::vector<CoeffList> lift,
                         bool allow_constant = false) {
    if (radius <= 0.0) throw std::invalid_argument("disc radius must be positive");
    LiftedDisc d;
    d.center = center;
    d.radius = radius;
    d.coeffs = std::move(lift);
    if (d.coeffs.empty()) throw std::invalid_argument("lift needs at least one coordinate");
    bool nonconstant = false;
    for (const auto& c : d.coeffs)
      if (poly_degree(c) >= 1) nonconstant = true;
    d.constant_flag = !nonconstant;
    if (d.constant_flag && !allow_constant)
      throw DegenerateDisc("constant lift where a nonconstant disc is required");
    return d;
  }

  // One-coordinate convenience (d = 1).
  static LiftedDisc scalar(cplx center, double radius, CoeffList lift,
                           bool allow_constant = false) {
    return make(center, radius, {std::move(lift)}, allow_constant);
  }

  CVec eval(cplx z) const {
    CVec v(coeffs.size());
    const cplx u = z - center;
    for (std::size_t a = 0; a < coeffs.size(); ++a) v[a] = poly_eval(coeffs[a], u);
    return v;
  }

  // Value and complex derivative of the lift at z.
  std::pair<CVec, CVec> eval_d(cplx z) const {
    CVec v(coeffs.size()), d(coeffs.size());
    const cplx u = z - center;
    for (std::size_t a = 0; a < coeffs.size(); ++a) poly_eval_d(coeffs[a], u, v[a], d[a]);
    return {v, d};
  }

  // Value, first and second derivative.
  std::tuple<CVec, CVec, CVec> eval_d2(cplx z) const {
    CVec v(coeffs.size()), d(coeffs.size()), d2(coeffs.size());
    const cplx u = z - center;
    for (std::size_t a = 0; a < coeffs.size(); ++a) poly_eval_d2(coeffs[a], u, v[a], d[a], d2[a]);
    return {v, d, d2};
  }

  LiftedDisc restricted(double r) const {
    LiftedDisc d = *this;
    d.radius = r;
    return d;
  }

  // Lift translated by a constant vector (projects to the same torus map
  // when the shift is a lattice vector).
  LiftedDisc translated_by(const CVec& shift) const {
    LiftedDisc d = *this;
    for (std::size_t a = 0; a < d.coeffs.size(); ++a) d.coeffs[a][0] -= shift[a];
    return d;
  }
};

inline std::vector<std::pair<CVec, CVec>> eval_with_derivative(const LiftedDisc& disc,
                                                               const std::vector<cplx>& points) {
  std::vector<std::pair<CVec, CVec>> out;
  out.reserve(points.size());
  for (cplx z : points) out.push_back(disc.eval_d(z));
  return out;
}

enum class ReparamMode { rescale_to_unit, k_fold, dilate };

struct ReparamParams {
  int k = 1;         // k_fold
  cplx target_c{0.0, 0.0};
  double delta = 0.0;  // dilate
  int degree_cap = 4096;
};

// The three reparametrizations used by the gluing tricks:
//   rescale_to_unit: P on D(0,R)      ->  P(R w) on the unit disc
//   k_fold:          P on D(0,1)      ->  P((z - c)^k) on D(c,1)
//   dilate:          P on D(0,r)      ->  P((1-delta) z) on D(0,r)
inline LiftedDisc reparametrize(const LiftedDisc& disc, ReparamMode mode,
                                const ReparamParams& params = {}) {
  switch (mode) {
    case ReparamMode::rescale_to_unit: {
      if (std::abs(disc.center) != 0.0)
        throw std::invalid_argument("rescale_to_unit requires a disc centered at 0");
      std::vector<CoeffList> lift;
      lift.reserve(disc.coeffs.size());
      for (const auto& c : disc.coeffs) lift.push_back(poly_scale_arg(c, cplx(disc.radius, 0.0)));
      return LiftedDisc::make(cplx(0.0, 0.0), 1.0, std::move(lift), disc.constant_flag);
    }
    case ReparamMode::k_fold: {
      if (params.k < 1) throw std::invalid_argument("k_fold requires k >= 1");
      if (std::abs(disc.center) != 0.0 || disc.radius != 1.0)
        throw std::invalid_argument("k_fold requires the unit disc at 0 as input");
      if (disc.degree() * params.k > params.degree_cap)
        throw std::invalid_argument("k_fold would exceed the configured degree cap");
      std::vector<CoeffList> lift;
      lift.reserve(disc.coeffs.size());
      for (const auto& c : disc.coeffs) lift.push_back(poly_power_arg(c, params.k));
      return LiftedDisc::make(params.target_c, 1.0, std::move(lift), disc.constant_flag);
    }
    case ReparamMode::dilate: {
      if (!(params.delta > 0.0 && params.delta < 1.0))
        throw std::invalid_argument("dilate requires 0 < delta < 1");
      if (std::abs(disc.center) != 0.0)
        throw std::invalid_argument("dilate requires a disc centered at 0");
      std::vector<CoeffList> lift;
      lift.reserve(disc.coeffs.size());
      for (const auto& c : disc.coeffs)
        lift.push_back(poly_scale_arg(c, cplx(1.0 - params.delta, 0.0)));
      return LiftedDisc::make(disc.center, disc.radius, std::move(lift), disc.constant_flag);
    }
  }
  throw std::invalid_argument("unknown reparametrization mode");
}

}  // namespace ahlfors
