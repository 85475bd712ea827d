#pragma once

// Dense univariate polynomials over C, stored low-degree-first.
// These are the coefficient arrays behind every disc lift; all higher-level
// code manipulates them through the helpers here.

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "ahlfors/util.hpp"

namespace ahlfors {

using CoeffList = std::vector<cplx>;

inline void trim_leading_zeros(CoeffList& c, double tol = 0.0) {
  while (c.size() > 1 && std::abs(c.back()) <= tol) c.pop_back();
}

inline int poly_degree(const CoeffList& c) {
  for (std::size_t i = c.size(); i-- > 0;)
    if (c[i] != cplx(0.0, 0.0)) return static_cast<int>(i);
  return 0;
}

// Horner evaluation of p and p' at u.
inline void poly_eval_d(const CoeffList& c, cplx u, cplx& value, cplx& deriv) {
  cplx v(0.0, 0.0), d(0.0, 0.0);
  for (std::size_t i = c.size(); i-- > 0;) {
    d = d * u + v;
    v = v * u + c[i];
  }
  value = v;
  deriv = d;
}

inline cplx poly_eval(const CoeffList& c, cplx u) {
  cplx v(0.0, 0.0);
  for (std::size_t i = c.size(); i-- > 0;) v = v * u + c[i];
  return v;
}

// Horner evaluation of p, p' and p'' at u.
inline void poly_eval_d2(const CoeffList& c, cplx u, cplx& value, cplx& deriv, cplx& deriv2) {
  cplx v(0.0, 0.0), d(0.0, 0.0), d2(0.0, 0.0);
  for (std::size_t i = c.size(); i-- > 0;) {
    d2 = d2 * u + 2.0 * d;
    d = d * u + v;
    v = v * u + c[i];
  }
  value = v;
  deriv = d;
  deriv2 = d2;
}

inline CoeffList poly_derivative(const CoeffList& c) {
  if (c.size() <= 1) return CoeffList{cplx(0.0, 0.0)};
  CoeffList d(c.size() - 1);
  for (std::size_t k = 1; k < c.size(); ++k) d[k - 1] = double(k) * c[k];
  return d;
}

// p(s*u): coefficient k scales by s^k.
inline CoeffList poly_scale_arg(const CoeffList& c, cplx s) {
  CoeffList out(c);
  cplx f(1.0, 0.0);
  for (std::size_t k = 0; k < out.size(); ++k) {
    out[k] *= f;
    f *= s;
  }
  return out;
}

// p(u^k): spreads coefficient j to position j*k.
inline CoeffList poly_power_arg(const CoeffList& c, int k) {
  if (k < 1) throw std::invalid_argument("poly_power_arg: k must be >= 1");
  CoeffList out(static_cast<std::size_t>(poly_degree(c)) * k + 1, cplx(0.0, 0.0));
  for (std::size_t j = 0; j < c.size(); ++j)
    if (c[j] != cplx(0.0, 0.0)) out[j * k] = c[j];
  return out;
}

inline CoeffList poly_add(const CoeffList& a, const CoeffList& b) {
  CoeffList out(std::max(a.size(), b.size()), cplx(0.0, 0.0));
  for (std::size_t i = 0; i < a.size(); ++i) out[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) out[i] += b[i];
  return out;
}

inline CoeffList poly_mul(const CoeffList& a, const CoeffList& b) {
  CoeffList out(a.size() + b.size() - 1, cplx(0.0, 0.0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

// p(q(u)) by Horner in coefficient space. Degrees multiply; keep inputs small.
inline CoeffList poly_compose(const CoeffList& p, const CoeffList& q) {
  CoeffList out{cplx(0.0, 0.0)};
  for (std::size_t i = p.size(); i-- > 0;) {
    out = poly_mul(out, q);
    if (out.empty()) out.assign(1, cplx(0.0, 0.0));
    out[0] += p[i];
  }
  return out;
}

// Rebase p given in powers of (u - a) into powers of (u - b).
inline CoeffList poly_shift_center(const CoeffList& c, cplx a, cplx b) {
  // p(u) = sum c_k (u-a)^k = sum c_k (w + t)^k with w = u-b, t = b-a.
  const cplx t = b - a;
  CoeffList out(c.size(), cplx(0.0, 0.0));
  for (std::size_t i = c.size(); i-- > 0;) {
    // out := out*(w+t) + c[i]; degree stays < c.size()
    for (std::size_t k = out.size(); k-- > 1;) out[k] = out[k] * t + out[k - 1];
    out[0] = out[0] * t + c[i];
  }
  return out;
}

}  // namespace ahlfors
