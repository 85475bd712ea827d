#pragma once

// Constructive approximation machinery: least-squares polynomial fits on
// discs and admissible sets (the Runge / Mergelyan workhorses), almost
// geodesic bridges between disc boundaries, and the doubling extension.

#include <Eigen/Dense>
#include <functional>
#include <limits>
#include <optional>
#include <utility>
#include <variant>

#include "ahlfors/current.hpp"
#include "ahlfors/disc.hpp"
#include "ahlfors/torus.hpp"

namespace ahlfors {

struct FitReport {
  double c0_error = std::numeric_limits<double>::infinity();
  double c1_error = std::numeric_limits<double>::infinity();
  int degree = 0;
  std::vector<std::pair<int, double>> residual_history;  // (degree, achieved error)
};

struct DegreeCapExceeded : std::runtime_error {
  FitReport best;
  explicit DegreeCapExceeded(const FitReport& report)
      : std::runtime_error("degree cap exceeded before reaching the fit tolerance"),
        best(report) {}
};

struct FitSample {
  cplx z;
  CVec value;
  CVec deriv;        // complex derivative of the target lift at z
  bool constrain_deriv = false;
  cplx deriv_dir{1.0, 0.0};  // derivative row constrains p'(z) * deriv_dir
};

namespace detail {

struct FitFrame {
  cplx center;
  double scale;
};

inline FitFrame frame_of(const std::vector<FitSample>& samples) {
  cplx c(0.0, 0.0);
  for (const auto& s : samples) c += s.z;
  c /= double(samples.size());
  double scale = 0.0;
  for (const auto& s : samples) scale = std::max(scale, std::abs(s.z - c));
  return {c, std::max(scale, 1e-9)};
}

// Weighted least squares in the scaled-shifted basis ((z - z0)/s)^k with
// per-column normalization and a rank-revealing solve; returns a lift
// stored as a centered polynomial.
inline LiftedDisc lsq_fit(const std::vector<FitSample>& samples, int degree,
                          const FitFrame& frame, int dim_target, double deriv_weight) {
  const int cols = degree + 1;
  int rows = 0;
  for (const auto& s : samples) rows += s.constrain_deriv ? 2 : 1;
  Eigen::MatrixXcd A(rows, cols);
  Eigen::MatrixXcd B(rows, dim_target);

  int r = 0;
  std::vector<cplx> pw(cols);
  for (const auto& s : samples) {
    const cplx w = (s.z - frame.center) / frame.scale;
    pw[0] = cplx(1.0, 0.0);
    for (int k = 1; k < cols; ++k) pw[k] = pw[k - 1] * w;
    for (int k = 0; k < cols; ++k) A(r, k) = pw[k];
    for (int a = 0; a < dim_target; ++a) B(r, a) = s.value[a];
    ++r;
    if (s.constrain_deriv) {
      // row: s * p'(z) * dir = s * f'(z) * dir, keeping magnitudes comparable
      A(r, 0) = cplx(0.0, 0.0);
      for (int k = 1; k < cols; ++k) A(r, k) = double(k) * pw[k - 1] * s.deriv_dir * deriv_weight;
      for (int a = 0; a < dim_target; ++a)
        B(r, a) = frame.scale * s.deriv[a] * s.deriv_dir * deriv_weight;
      ++r;
    }
  }

  Eigen::VectorXd colnorm(cols);
  for (int k = 0; k < cols; ++k) {
    colnorm(k) = std::max(A.col(k).norm(), 1e-300);
    A.col(k) /= colnorm(k);
  }
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXcd> cod(A);
  Eigen::MatrixXcd X = cod.solve(B);
  for (int k = 0; k < cols; ++k) X.row(k) /= colnorm(k);

  std::vector<CoeffList> lift(dim_target, CoeffList(cols));
  for (int a = 0; a < dim_target; ++a) {
    double sk = 1.0;
    for (int k = 0; k < cols; ++k) {
      lift[a][k] = X(k, a) / sk;
      sk *= frame.scale;
    }
  }
  double radius = frame.scale;
  return LiftedDisc::make(frame.center, radius, std::move(lift), true);
}

inline double sample_error(const LiftedDisc& fit, const std::vector<FitSample>& validation,
                           bool c1, double* c0_out = nullptr) {
  double e0 = 0.0, e1 = 0.0;
  for (const auto& s : validation) {
    auto [v, d] = fit.eval_d(s.z);
    double ev = 0.0, ed = 0.0;
    for (std::size_t a = 0; a < v.size(); ++a) {
      ev = std::max(ev, std::abs(v[a] - s.value[a]));
      if (c1 && s.constrain_deriv) ed = std::max(ed, std::abs(d[a] - s.deriv[a]));
    }
    e0 = std::max(e0, ev);
    e1 = std::max(e1, ed);
  }
  if (c0_out) *c0_out = e0;
  return c1 ? e0 + e1 : e0;
}

}  // namespace detail

// Sample generators. density multiplies the per-degree point counts; the
// validation grid uses 4x the fit density.
inline std::vector<FitSample> sample_disc(const MapFn& target, cplx center, double radius,
                                          int degree, double density, bool with_deriv) {
  std::vector<FitSample> out;
  const int nb = std::max(48, int(density * 2 * (degree + 1)));
  for (int j = 0; j < nb; ++j) {
    const cplx z = center + std::polar(radius, kTwoPi * (j + 0.13) / nb);
    MapJet jet = target(z);
    out.push_back({z, jet.value, jet.deriv, with_deriv, cplx(1.0, 0.0)});
  }
  // Interior rings totalling about one boundary's worth of points; for a
  // holomorphic target the boundary carries the information, the interior
  // just stabilizes the fit.
  const int rings = std::min(16, std::max(4, degree / 8));
  for (int i = 1; i <= rings; ++i) {
    const double r = radius * std::sqrt(double(i) / (rings + 1));
    const int nj = std::max(12, 2 * nb * i / (rings * (rings + 1)));
    for (int j = 0; j < nj; ++j) {
      const cplx z = center + std::polar(r, kTwoPi * (j + 0.41 * i) / nj);
      MapJet jet = target(z);
      out.push_back({z, jet.value, jet.deriv, with_deriv, cplx(1.0, 0.0)});
    }
  }
  return out;
}

inline std::vector<FitSample> sample_segment(const CurveFn& curve, cplx q, cplx p, int degree,
                                             double density, bool with_deriv) {
  std::vector<FitSample> out;
  const int n = std::max(32, int(density * 2 * (degree + 1)));
  const cplx dirc = p - q;
  for (int j = 0; j <= n; ++j) {
    const double t = double(j) / n;
    CurveJet jet = curve(t);
    CVec dz(jet.deriv.size());
    // curve is parametrized over [0,1]; convert d/dt to d/dz along the segment
    for (std::size_t a = 0; a < dz.size(); ++a) dz[a] = jet.deriv[a] / dirc;
    out.push_back({q + t * dirc, jet.value, dz, with_deriv, cplx(1.0, 0.0)});
  }
  return out;
}

// Runge-type polynomial approximation of a holomorphic target on a closed
// disc by least squares with degree escalation.
inline std::pair<LiftedDisc, FitReport> runge_polyfit(const MapFn& target, cplx center,
                                                      double radius, int degree_cap, double tol,
                                                      int start_degree = 8,
                                                      double density = 1.5) {
  FitReport best;
  int degree = std::min(start_degree, degree_cap);
  std::optional<LiftedDisc> best_fit;
  while (true) {
    auto fit_samples = sample_disc(target, center, radius, degree, density, false);
    auto validation = sample_disc(target, center, radius, degree, 4.0 * density, false);
    detail::FitFrame frame = detail::frame_of(fit_samples);
    LiftedDisc fit = detail::lsq_fit(fit_samples, degree, frame, target(center).value.size(), 1.0);
    double c0 = 0.0;
    const double err = detail::sample_error(fit, validation, false, &c0);
    best.residual_history.push_back({degree, err});
    if (err < best.c0_error) {
      best.c0_error = err;
      best.c1_error = err;
      best.degree = degree;
      best_fit = fit;
    }
    if (err <= tol) {
      FitReport report = best;
      report.c0_error = err;
      report.degree = degree;
      return {fit, report};
    }
    if (degree >= degree_cap) throw DegreeCapExceeded(best);
    degree = std::min(degree * 2, degree_cap);
  }
}

// ---------------------------------------------------------------------------
// Bridges: almost geodesic connecting curves matching C^1 data at both disc
// attachment points. The geometric shape is a quintic Hermite curve Q; it is
// traversed through a monotone reparametrization whose end slopes absorb
// large endpoint derivatives, keeping the image length near the chord.
// ---------------------------------------------------------------------------

struct BridgeMap {
  cplx q, p;                       // segment endpoints in the domain
  std::vector<CoeffList> quintic;  // quintic Hermite data per coordinate (monomial in sigma)
  std::vector<long long> lambda_coords;  // integer coords of the lattice shift
  CVec lambda;                     // shift applied to the second lift (subtracted)
  double alpha0 = 1.0, alpha1 = 1.0, beta0 = 10.0, beta1 = 10.0;
  double arclength_omega = 0.0;

  // Entire crossover between the endpoint jet models. erf is nearly flat at
  // the junctions and analytic, so polynomial fits of the bridge converge
  // geometrically; the residual erf tails are cancelled exactly by a small
  // cubic correction computed in build_bridge.
  static constexpr double kBlendSharpness = 6.0;
  static double blend(double s, double* dblend) {
    const double x = kBlendSharpness * (s - 0.5);
    if (dblend)
      *dblend = kBlendSharpness * (2.0 / std::sqrt(kPi)) * 0.5 * std::exp(-x * x);
    return 0.5 * (1.0 + std::erf(x));
  }

  std::vector<CoeffList> correction;  // cubic end-defect cancellation per coordinate

  // Monotone time change with end slopes ~alpha, normalized multiplicatively
  // so tau(1) = 1 and tau' > 0 unconditionally; reduces to the identity when
  // both slopes are 1, so tame bridges stay plain quintics.
  double tau_norm() const {
    return 1.0 / (1.0 + ((alpha0 - 1.0) / beta0) * (1.0 - std::exp(-beta0)) +
                  ((alpha1 - 1.0) / beta1) * (1.0 - std::exp(-beta1)));
  }
  double tau(double t) const {
    const double a = ((alpha0 - 1.0) / beta0) * (1.0 - std::exp(-beta0 * t));
    const double b =
        ((alpha1 - 1.0) / beta1) * (std::exp(-beta1 * (1.0 - t)) - std::exp(-beta1));
    return tau_norm() * (t + a + b);
  }
  double tau_prime(double t) const {
    const double a = (alpha0 - 1.0) * std::exp(-beta0 * t);
    const double b = (alpha1 - 1.0) * std::exp(-beta1 * (1.0 - t));
    return tau_norm() * (1.0 + a + b);
  }

  double tau_prime2(double t) const {
    const double a = -beta0 * (alpha0 - 1.0) * std::exp(-beta0 * t);
    const double b = beta1 * (alpha1 - 1.0) * std::exp(-beta1 * (1.0 - t));
    return tau_norm() * (a + b);
  }

  // End jets in the traversal variable sigma, recovered from the stored
  // quintic Hermite data: (value, d1, d2) at sigma = 0 and sigma = 1.
  void jets(std::size_t a, cplx& A0, cplx& VA, cplx& WA, cplx& B0, cplx& VB, cplx& WB) const {
    const CoeffList& c = quintic[a];
    A0 = c[0];
    VA = c[1];
    WA = 2.0 * c[2];
    poly_eval_d2(c, cplx(1.0, 0.0), B0, VB, WB);
  }

  // Blended value and sigma-derivative before the defect correction.
  void blend_raw(std::size_t a, double sig, cplx& value, cplx& dsigma) const {
    double dS = 0.0;
    const double S = blend(sig, &dS);
    cplx A0, VA, WA, B0, VB, WB;
    jets(a, A0, VA, WA, B0, VB, WB);
    const cplx Av = A0 + VA * sig + 0.5 * WA * sig * sig;
    const cplx Ad = VA + WA * sig;
    const cplx sm1 = cplx(sig - 1.0, 0.0);
    const cplx Bv = B0 + VB * sm1 + 0.5 * WB * sm1 * sm1;
    const cplx Bd = VB + WB * sm1;
    value = (1.0 - S) * Av + S * Bv;
    dsigma = (1.0 - S) * Ad + S * Bd + dS * (Bv - Av);
  }

  // Curve over t in [0,1]; value is the lift, deriv is d/dt. The path
  // follows the first piece's 2-jet model, crosses over with the analytic
  // blend, and arrives along the second piece's 2-jet model.
  CurveJet at(double t) const {
    const double sig = tau(t), sp = tau_prime(t);
    CurveJet jet;
    jet.value.resize(quintic.size());
    jet.deriv.resize(quintic.size());
    for (std::size_t a = 0; a < quintic.size(); ++a) {
      cplx v, ds;
      blend_raw(a, sig, v, ds);
      if (!correction.empty()) {
        cplx cv, cd;
        poly_eval_d(correction[a], cplx(sig, 0.0), cv, cd);
        v -= cv;
        ds -= cd;
      }
      jet.value[a] = v;
      jet.deriv[a] = ds * sp;
    }
    return jet;
  }
  CurveFn curve() const {
    return [b = *this](double t) { return b.at(t); };
  }
};

// Build the bridge between piece1 at q and piece2 at p. The second lift is
// renormalized by the nearest lattice translate so the chord stays short.
inline BridgeMap build_bridge(const LiftedDisc& piece1, const LiftedDisc& piece2, cplx q, cplx p,
                              const LatticeTorus& torus, double slack = 0.5) {
  auto [a_val, a_der, a_der2] = piece1.eval_d2(q);
  auto [b_val, b_der, b_der2] = piece2.eval_d2(p);

  LatticePoint lp = nearest_lattice_translate(cvec_sub(b_val, a_val), torus.lattice);
  CVec b_target = cvec_sub(b_val, lp.vec);

  const cplx seg = p - q;
  const int d = piece1.dim();
  BridgeMap bridge;
  bridge.q = q;
  bridge.p = p;
  bridge.lambda = lp.vec;
  bridge.lambda_coords = lp.coords;

  // End 2-jets with respect to the [0,1] parameter.
  CVec va(d), vb(d), wa(d), wb(d);
  double mva = 0.0, mvb = 0.0, mwa = 0.0, mwb = 0.0;
  for (int a = 0; a < d; ++a) {
    va[a] = a_der[a] * seg;
    vb[a] = b_der[a] * seg;
    wa[a] = a_der2[a] * seg * seg;
    wb[a] = b_der2[a] * seg * seg;
    mva = std::max(mva, std::abs(va[a]));
    mvb = std::max(mvb, std::abs(vb[a]));
    mwa = std::max(mwa, std::abs(wa[a]));
    mwb = std::max(mwb, std::abs(wb[a]));
  }
  const double chord = torus.omega_norm(cvec_sub(b_target, a_val));

  auto assemble = [&](double v_eff) {
    bridge.alpha0 = std::max({1.0, mva / v_eff, std::sqrt(mwa / (4.0 * v_eff))});
    bridge.alpha1 = std::max({1.0, mvb / v_eff, std::sqrt(mwb / (4.0 * v_eff))});
    bridge.beta0 = std::max(12.0, 2.0 * bridge.alpha0);
    bridge.beta1 = std::max(12.0, 2.0 * bridge.alpha1);

    const double tp0 = bridge.tau_prime(0.0);
    const double tp1 = bridge.tau_prime(1.0);
    const double tpp0 = bridge.tau_prime2(0.0);
    const double tpp1 = bridge.tau_prime2(1.0);

    // Quintic Hermite storage of the end jets in the traversal variable.
    bridge.quintic.assign(d, CoeffList(6, cplx(0.0, 0.0)));
    for (int a = 0; a < d; ++a) {
      const cplx A = a_val[a];
      const cplx B = b_target[a];
      const cplx VA = va[a] / tp0;
      const cplx VB = vb[a] / tp1;
      const cplx WA = (wa[a] - VA * tpp0) / (tp0 * tp0);
      const cplx WB = (wb[a] - VB * tpp1) / (tp1 * tp1);
      CoeffList& c = bridge.quintic[a];
      c[0] = A;
      c[1] = VA;
      c[2] = 0.5 * WA;
      const cplx r0 = B - A - VA - 0.5 * WA;
      const cplx r1 = VB - VA - WA;
      const cplx r2 = WB - WA;
      c[3] = 10.0 * r0 - 4.0 * r1 + 0.5 * r2;
      c[4] = -15.0 * r0 + 7.0 * r1 - r2;
      c[5] = 6.0 * r0 - 3.0 * r1 + 0.5 * r2;
    }

    // Cancel the erf-tail end defects exactly with a cubic per coordinate.
    bridge.correction.assign(d, CoeffList(4, cplx(0.0, 0.0)));
    for (int a = 0; a < d; ++a) {
      cplx A0, VA, WA, B0, VB, WB;
      bridge.jets(a, A0, VA, WA, B0, VB, WB);
      cplx v0, d0, v1, d1;
      bridge.blend_raw(a, 0.0, v0, d0);
      bridge.blend_raw(a, 1.0, v1, d1);
      const cplx e0 = v0 - A0, e0d = d0 - VA;
      const cplx e1 = v1 - B0, e1d = d1 - VB;
      // cubic Hermite with (e0, e0d) at 0 and (e1, e1d) at 1
      CoeffList& c = bridge.correction[a];
      c[0] = e0;
      c[1] = e0d;
      c[2] = 3.0 * (e1 - e0) - 2.0 * e0d - e1d;
      c[3] = 2.0 * (e0 - e1) + e0d + e1d;
    }

    // Arc length with panels graded into the time-change end layers.
    auto speed = [&](double t) { return torus.omega_norm(bridge.at(t).deriv); };
    const double layer = 1.0 / std::max(bridge.beta0, bridge.beta1);
    std::vector<double> cuts{0.0};
    for (double e = layer; e < 0.2; e *= 2.0) cuts.push_back(e);
    cuts.push_back(0.5);
    for (std::size_t i = cuts.size() - 1; i-- > 1;) cuts.push_back(1.0 - cuts[i]);
    cuts.push_back(1.0);
    std::sort(cuts.begin(), cuts.end());
    double len = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
      len += integrate_segment(speed, cuts[i], cuts[i + 1], 2, 16);
    bridge.arclength_omega = len;
  };

  // Gentlest time change whose image length fits the budget: large v_eff
  // means plain quintic traversal, halving stiffens the end layers.
  const double budget = std::min(chord + 0.9 * slack, torus.diameter + 0.95);
  double v_eff = std::max({mva, mvb, std::sqrt(mwa), std::sqrt(mwb), 1e-9});
  const double v_floor = std::max(0.25 * chord, 0.05 * slack) * 1e-9;
  while (true) {
    assemble(v_eff);
    if (bridge.arclength_omega <= budget) break;
    v_eff *= 0.5;
    if (v_eff < v_floor) break;
  }

  if (bridge.arclength_omega > torus.diameter + 1.0)
    throw BridgeTooLong("bridge image longer than diam + 1 after lattice renormalization");
  return bridge;
}

// ---------------------------------------------------------------------------
// Mergelyan-type C^1 fit over a two-disc admissible set with a bridge.
//
// On a multi-component set the monomial coefficients of a good approximant
// exceed what double precision can cancel, so the fitted polynomial is kept
// in a basis orthonormalized over the sample set (Vandermonde with Arnoldi).
// Evaluation runs the recurrence and is stable on and near the set.
// ---------------------------------------------------------------------------

class ArnoldiPoly {
 public:
  cplx center{0.0, 0.0};
  double scale = 1.0;
  Eigen::MatrixXcd hess;   // (n+1) x n recurrence data
  Eigen::MatrixXcd coeff;  // (n+1) x d coefficients in the orthonormal basis

  int degree() const { return static_cast<int>(hess.cols()); }
  int dim() const { return static_cast<int>(coeff.cols()); }

  std::pair<CVec, CVec> eval_d(cplx z) const {
    const int n = degree();
    const cplx w = (z - center) / scale;
    Eigen::VectorXcd q(n + 1), dq(n + 1);
    q(0) = cplx(1.0, 0.0);
    dq(0) = cplx(0.0, 0.0);
    for (int k = 0; k < n; ++k) {
      cplx v = w * q(k);
      cplx dv = q(k) + w * dq(k);
      for (int j = 0; j <= k; ++j) {
        v -= hess(j, k) * q(j);
        dv -= hess(j, k) * dq(j);
      }
      q(k + 1) = v / hess(k + 1, k);
      dq(k + 1) = dv / hess(k + 1, k);
    }
    CVec value(dim()), deriv(dim());
    for (int a = 0; a < dim(); ++a) {
      cplx s(0.0, 0.0), ds(0.0, 0.0);
      for (int k = 0; k <= n; ++k) {
        s += coeff(k, a) * q(k);
        ds += coeff(k, a) * dq(k);
      }
      value[a] = s;
      deriv[a] = ds / scale;
    }
    return {value, deriv};
  }

  CVec eval(cplx z) const { return eval_d(z).first; }

  MapFn map() const {
    return [p = *this](cplx z) {
      auto [v, d] = p.eval_d(z);
      return MapJet{std::move(v), std::move(d)};
    };
  }
};

namespace detail {

inline ArnoldiPoly arnoldi_lsq_fit(const std::vector<FitSample>& samples, int degree,
                                   const FitFrame& frame, int dim_target) {
  const int m = static_cast<int>(samples.size());
  const int n = degree;
  Eigen::MatrixXcd Q(m, n + 1), dQ(m, n + 1);
  Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(n + 1, n);
  Eigen::VectorXcd w(m);
  for (int i = 0; i < m; ++i) {
    w(i) = (samples[i].z - frame.center) / frame.scale;
    Q(i, 0) = cplx(1.0, 0.0);
    dQ(i, 0) = cplx(0.0, 0.0);
  }
  const double root_m = std::sqrt(double(m));
  for (int k = 0; k < n; ++k) {
    Eigen::VectorXcd v = w.cwiseProduct(Q.col(k));
    Eigen::VectorXcd dv = Q.col(k) + w.cwiseProduct(dQ.col(k));
    for (int pass = 0; pass < 2; ++pass)  // re-orthogonalize once
      for (int j = 0; j <= k; ++j) {
        const cplx h = Q.col(j).dot(v) / double(m);
        if (pass == 0)
          H(j, k) = h;
        else
          H(j, k) += h;
        v -= h * Q.col(j);
        dv -= h * dQ.col(j);
      }
    const double nv = v.norm() / root_m;
    H(k + 1, k) = cplx(nv, 0.0);
    Q.col(k + 1) = v / nv;
    dQ.col(k + 1) = dv / nv;
  }

  int rows = 0;
  for (const auto& s : samples) rows += s.constrain_deriv ? 2 : 1;
  Eigen::MatrixXcd A(rows, n + 1);
  Eigen::MatrixXcd B(rows, dim_target);
  int r = 0;
  for (int i = 0; i < m; ++i) {
    A.row(r) = Q.row(i);
    for (int a = 0; a < dim_target; ++a) B(r, a) = samples[i].value[a];
    ++r;
    if (samples[i].constrain_deriv) {
      A.row(r) = dQ.row(i);
      for (int a = 0; a < dim_target; ++a) B(r, a) = frame.scale * samples[i].deriv[a];
      ++r;
    }
  }
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXcd> cod(A);
  ArnoldiPoly poly;
  poly.center = frame.center;
  poly.scale = frame.scale;
  poly.hess = H;
  poly.coeff = cod.solve(B);
  return poly;
}

inline double sample_error_arnoldi(const ArnoldiPoly& fit, const std::vector<FitSample>& validation,
                                   bool c1, double* c0_out = nullptr) {
  double e0 = 0.0, e1 = 0.0;
  for (const auto& s : validation) {
    auto [v, d] = fit.eval_d(s.z);
    for (std::size_t a = 0; a < v.size(); ++a) {
      e0 = std::max(e0, std::abs(v[a] - s.value[a]));
      if (c1 && s.constrain_deriv) e1 = std::max(e1, std::abs(d[a] - s.deriv[a]));
    }
  }
  if (c0_out) *c0_out = e0;
  return c1 ? e0 + e1 : e0;
}

}  // namespace detail

struct MergelyanPieces {
  MapFn piece1;
  MapFn piece2;
  CurveFn bridge;  // curve over [0,1] along the segment, e.g. BridgeMap::curve()
};

inline std::pair<ArnoldiPoly, FitReport> mergelyan_c1_fit(const AdmissibleSetGeometry& geometry,
                                                          const MergelyanPieces& pieces,
                                                          double tol, int degree_cap,
                                                          int start_degree = 16,
                                                          double density = 1.2) {
  geometry.validate();
  if (geometry.discs.size() != 2 || geometry.segments.size() != 1)
    throw InconsistentPieces("mergelyan_c1_fit expects two discs joined by one segment");

  const auto& segment = geometry.segments[0];
  auto gather = [&](int degree, double dens) {
    std::vector<FitSample> s;
    auto s1 = sample_disc(pieces.piece1, geometry.discs[0].center, geometry.discs[0].radius,
                          degree, dens, true);
    auto s2 = sample_disc(pieces.piece2, geometry.discs[1].center, geometry.discs[1].radius,
                          degree, dens, true);
    auto s3 = sample_segment(pieces.bridge, segment.q, segment.p, degree, dens, true);
    s.insert(s.end(), s1.begin(), s1.end());
    s.insert(s.end(), s2.begin(), s2.end());
    s.insert(s.end(), s3.begin(), s3.end());
    return s;
  };

  FitReport best;
  ArnoldiPoly best_fit;
  int degree = std::min(start_degree, degree_cap);
  const int dim_target = pieces.piece1(geometry.discs[0].center).value.size();
  while (true) {
    auto fit_samples = gather(degree, density);
    auto validation = gather(degree, 4.0 * density);
    detail::FitFrame frame = detail::frame_of(fit_samples);
    ArnoldiPoly fit = detail::arnoldi_lsq_fit(fit_samples, degree, frame, dim_target);
    double c0 = 0.0;
    const double err = detail::sample_error_arnoldi(fit, validation, true, &c0);
    best.residual_history.push_back({degree, err});
    if (err < best.c1_error) {
      best.c1_error = err;
      best.c0_error = c0;
      best.degree = degree;
      best_fit = fit;
    }
    if (err <= tol) {
      FitReport report = best;
      report.c1_error = err;
      report.c0_error = c0;
      report.degree = degree;
      return {fit, report};
    }
    if (degree >= degree_cap) throw DegreeCapExceeded(best);
    degree = std::min(degree * 2, degree_cap);
  }
}

// ---------------------------------------------------------------------------
// Doubling extension. Polynomial lifts are entire, so each doubling step is
// exact; the per-step error budget eps/2^{k+1} is recorded anyway.
// ---------------------------------------------------------------------------

struct ExtensionReport {
  LiftedDisc lift;
  std::vector<double> step_budgets;
  std::vector<double> step_errors;
  double total_budget = 0.0;
  double total_error = 0.0;
};

inline ExtensionReport extend_doubling(const LiftedDisc& f0, double eps, int steps = 5) {
  if (eps <= 0.0) throw std::invalid_argument("extend_doubling requires eps > 0");
  ExtensionReport rep{f0, {}, {}, 0.0, 0.0};
  rep.lift = f0;
  for (int k = 0; k < steps; ++k) {
    const double budget = eps / std::pow(2.0, k + 1);
    rep.step_budgets.push_back(budget);
    rep.step_errors.push_back(0.0);
    rep.total_budget += budget;
    rep.lift.radius *= 2.0;
  }
  rep.lift.radius = f0.radius * std::pow(2.0, steps);
  return rep;
}

}  // namespace ahlfors
