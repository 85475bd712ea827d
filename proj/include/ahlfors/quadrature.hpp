#pragma once

// Quadrature building blocks: Gauss-Legendre nodes, the refinable disc grid
// (tensor GL radial x trapezoid angular), and panel integration helpers.

#include <cmath>
#include <functional>
#include <vector>

#include "ahlfors/util.hpp"

namespace ahlfors {

// Gauss-Legendre nodes/weights on [-1, 1] by Newton iteration on P_n.
inline void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.resize(n);
  weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      if (n == 1) {
        p1 = x;
      }
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      pp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    nodes[i] = x;
    weights[i] = 2.0 / ((1.0 - x * x) * pp * pp);
  }
}

// GL rule mapped to [a, b].
inline void gauss_legendre_ab(int n, double a, double b, std::vector<double>& nodes,
                              std::vector<double>& weights) {
  gauss_legendre(n, nodes, weights);
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  for (int i = 0; i < n; ++i) {
    nodes[i] = mid + half * nodes[i];
    weights[i] *= half;
  }
}

// Integrate a smooth scalar function over [a, b] with composite GL panels.
inline double integrate_segment(const std::function<double(double)>& f, double a, double b,
                                int panels = 8, int order = 16) {
  double total = 0.0;
  std::vector<double> xs, ws;
  for (int p = 0; p < panels; ++p) {
    const double pa = a + (b - a) * p / panels;
    const double pb = a + (b - a) * (p + 1) / panels;
    gauss_legendre_ab(order, pa, pb, xs, ws);
    for (int i = 0; i < order; ++i) total += ws[i] * f(xs[i]);
  }
  return total;
}

// Refinable tensor grid on a disc: GL in radius, uniform (trapezoid) in
// angle. Refinement doubles both counts until the relative change of the
// integrals under scrutiny drops below rel_tol.
struct QuadratureGrid {
  int radial = 24;
  int angular = 64;
  int max_radial = 1536;
  double rel_tol = 1e-9;
  double fail_tol = 1e-6;

  static QuadratureGrid defaults() { return {}; }
};

// One fixed-resolution pass: sum of w * f(rho, theta) * rho over the disc
// D(c, r); f receives the physical point.
template <class F>
inline double disc_pass(const F& f, std::complex<double> c, double r, int n_r, int n_t) {
  std::vector<double> rx, rw;
  gauss_legendre_ab(n_r, 0.0, r, rx, rw);
  double total = 0.0;
  const double dt = kTwoPi / n_t;
  for (int i = 0; i < n_r; ++i) {
    double ring = 0.0;
    for (int j = 0; j < n_t; ++j) {
      const double th = dt * j;
      ring += f(c + std::polar(rx[i], th));
    }
    total += rw[i] * rx[i] * ring * dt;
  }
  return total;
}

// Vector version evaluating several integrands off one shared set of map
// evaluations; evaluate(point, out[]) fills n_out densities.
template <class Eval>
inline std::vector<double> disc_pass_multi(const Eval& evaluate, int n_out,
                                           std::complex<double> c, double r, int n_r, int n_t) {
  std::vector<double> rx, rw;
  gauss_legendre_ab(n_r, 0.0, r, rx, rw);
  std::vector<double> total(n_out, 0.0), val(n_out, 0.0), ring(n_out, 0.0);
  const double dt = kTwoPi / n_t;
  for (int i = 0; i < n_r; ++i) {
    std::fill(ring.begin(), ring.end(), 0.0);
    for (int j = 0; j < n_t; ++j) {
      const double th = dt * j;
      evaluate(c + std::polar(rx[i], th), val);
      for (int q = 0; q < n_out; ++q) ring[q] += val[q];
    }
    const double wf = rw[i] * rx[i] * dt;
    for (int q = 0; q < n_out; ++q) total[q] += wf * ring[q];
  }
  return total;
}

// Refining driver for the multi-integrand disc pass. Returns the converged
// values and writes the final estimated error into err (max relative change
// of the last doubling).
template <class Eval>
inline std::vector<double> disc_integrate_multi(const Eval& evaluate, int n_out,
                                                std::complex<double> c, double r,
                                                const QuadratureGrid& grid, double& err) {
  int n_r = grid.radial, n_t = grid.angular;
  std::vector<double> prev = disc_pass_multi(evaluate, n_out, c, r, n_r, n_t);
  err = 1.0;
  while (n_r < grid.max_radial) {
    n_r *= 2;
    n_t *= 2;
    std::vector<double> cur = disc_pass_multi(evaluate, n_out, c, r, n_r, n_t);
    double change = 0.0;
    for (int q = 0; q < n_out; ++q) {
      const double scale = std::max({1.0, std::abs(cur[q]), std::abs(prev[q])});
      change = std::max(change, std::abs(cur[q] - prev[q]) / scale);
    }
    prev = std::move(cur);
    err = change;
    if (change < grid.rel_tol) return prev;
  }
  if (err > grid.fail_tol)
    throw QuadratureNotConverged("disc quadrature failed to converge at the grid cap");
  return prev;
}

// Angular trapezoid rule on a circle |z - c| = r for several integrands.
template <class Eval>
inline std::vector<double> circle_integrate_multi(const Eval& evaluate, int n_out,
                                                  std::complex<double> c, double r,
                                                  const QuadratureGrid& grid, double& err) {
  int n_t = std::max(grid.angular, 32);
  auto pass = [&](int n) {
    std::vector<double> total(n_out, 0.0), val(n_out, 0.0);
    const double dt = kTwoPi / n;
    for (int j = 0; j < n; ++j) {
      evaluate(c + std::polar(r, dt * j), val);
      for (int q = 0; q < n_out; ++q) total[q] += val[q] * dt * r;
    }
    return total;
  };
  std::vector<double> prev = pass(n_t);
  err = 1.0;
  while (n_t < 16 * grid.max_radial) {
    n_t *= 2;
    std::vector<double> cur = pass(n_t);
    double change = 0.0;
    for (int q = 0; q < n_out; ++q) {
      const double scale = std::max({1.0, std::abs(cur[q]), std::abs(prev[q])});
      change = std::max(change, std::abs(cur[q] - prev[q]) / scale);
    }
    prev = std::move(cur);
    err = change;
    if (change < grid.rel_tol) return prev;
  }
  if (err > grid.fail_tol)
    throw QuadratureNotConverged("circle quadrature failed to converge at the grid cap");
  return prev;
}

}  // namespace ahlfors
