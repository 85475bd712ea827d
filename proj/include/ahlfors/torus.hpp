#pragma once

// Flat complex torus C^d / Lambda with a constant Hermitian (1,1)-form,
// lattice reduction, the complete torus distance, and the countable family
// of real Fourier test forms used for current pairings.

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <vector>

#include "ahlfors/util.hpp"

namespace ahlfors {

using CVec = std::vector<std::complex<double>>;  // point/vector in C^d

inline Eigen::VectorXd real_coords(const CVec& v) {
  Eigen::VectorXd x(2 * static_cast<int>(v.size()));
  for (std::size_t a = 0; a < v.size(); ++a) {
    x(2 * a) = v[a].real();
    x(2 * a + 1) = v[a].imag();
  }
  return x;
}

inline CVec cvec_from_real(const Eigen::VectorXd& x) {
  CVec v(x.size() / 2);
  for (int a = 0; a < x.size() / 2; ++a) v[a] = {x(2 * a), x(2 * a + 1)};
  return v;
}

inline CVec cvec_sub(const CVec& a, const CVec& b) {
  CVec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

inline CVec cvec_add(const CVec& a, const CVec& b) {
  CVec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

struct Lattice {
  int dim = 1;                   // complex dimension d (1 or 2)
  std::vector<CVec> generators;  // 2d generators spanning C^d over R
  Eigen::MatrixXd basis;         // columns = generators in real coordinates
  Eigen::MatrixXd basis_inv;
  Eigen::MatrixXd red_basis;  // size-reduced copy used for searches
  Eigen::MatrixXd red_inv;
  double gram_det = 0.0;

  static Lattice make(int d, const std::vector<CVec>& gens) {
    if (d < 1 || d > 2) throw BadConfig("lattice dimension must be 1 or 2");
    if (static_cast<int>(gens.size()) != 2 * d)
      throw BadConfig("lattice needs exactly 2d generators");
    Lattice L;
    L.dim = d;
    L.generators = gens;
    const int n = 2 * d;
    L.basis.resize(n, n);
    for (int j = 0; j < n; ++j) L.basis.col(j) = real_coords(gens[j]);
    L.gram_det = std::abs((L.basis.transpose() * L.basis).determinant());
    if (L.gram_det <= 1e-12)
      throw BadConfig("lattice generators are not real-linearly independent");
    L.basis_inv = L.basis.inverse();

    // Pairwise Lagrange size reduction; enough to make the +-2 cell search
    // around the rounded solve exhaustive for d <= 2.
    L.red_basis = L.basis;
    bool changed = true;
    int sweeps = 0;
    while (changed && sweeps++ < 64) {
      changed = false;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          if (i == j) continue;
          const double nj = L.red_basis.col(j).squaredNorm();
          const double mu = L.red_basis.col(i).dot(L.red_basis.col(j)) / nj;
          const double r = std::round(mu);
          if (r != 0.0) {
            L.red_basis.col(i) -= r * L.red_basis.col(j);
            changed = true;
          }
        }
    }
    L.red_inv = L.red_basis.inverse();
    return L;
  }
};

// A lattice vector together with its integer coordinates in the original
// generator basis (the coordinates the tie-break rule is stated in).
struct LatticePoint {
  CVec vec;
  std::vector<long long> coords;
};

namespace detail {

template <class NormSq>
inline LatticePoint nearest_translate_impl(const CVec& w, const Lattice& lat, NormSq norm_sq) {
  const int n = 2 * lat.dim;
  const Eigen::VectorXd wr = real_coords(w);
  const Eigen::VectorXd y = lat.red_inv * wr;
  std::vector<long long> base(n);
  for (int i = 0; i < n; ++i) base[i] = static_cast<long long>(std::llround(y(i)));

  double best = -1.0;
  Eigen::VectorXd best_vec;
  std::vector<long long> best_orig;
  std::vector<long long> idx(n, -2);
  const double tol_rel = 1e-12;

  // Exhaustive +-2 box in reduced coordinates.
  while (true) {
    Eigen::VectorXd lam = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < n; ++i) lam += double(base[i] + idx[i]) * lat.red_basis.col(i);
    const double d2 = norm_sq(wr - lam);
    // integer coordinates w.r.t. the original basis
    const Eigen::VectorXd oc = lat.basis_inv * lam;
    std::vector<long long> oi(n);
    for (int i = 0; i < n; ++i) oi[i] = static_cast<long long>(std::llround(oc(i)));
    bool take = false;
    if (best < 0.0)
      take = true;
    else if (d2 < best * (1.0 - tol_rel) - 1e-300)
      take = true;
    else if (std::abs(d2 - best) <= tol_rel * std::max(1.0, best) && oi < best_orig)
      take = true;
    if (take) {
      best = d2;
      best_vec = lam;
      best_orig = oi;
    }
    int p = n - 1;
    while (p >= 0 && idx[p] == 2) idx[p--] = -2;
    if (p < 0) break;
    ++idx[p];
  }
  LatticePoint out;
  out.vec = cvec_from_real(best_vec);
  out.coords = best_orig;
  return out;
}

}  // namespace detail

// Lattice vector minimizing the Euclidean norm |w - lambda|; ties broken
// lexicographically on integer coordinates.
inline LatticePoint nearest_lattice_translate(const CVec& w, const Lattice& lat) {
  return detail::nearest_translate_impl(
      w, lat, [](const Eigen::VectorXd& v) { return v.squaredNorm(); });
}

struct LatticeTorus {
  Lattice lattice;
  std::vector<std::complex<double>> herm;  // d x d row-major, Hermitian positive definite
  double h_min_eig = 1.0;
  double h_max_eig = 1.0;
  double diameter = 0.0;

  int dim() const { return lattice.dim; }

  double omega_sq(const CVec& v) const {
    const int d = dim();
    std::complex<double> s(0.0, 0.0);
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) s += herm[a * d + b] * v[a] * std::conj(v[b]);
    return s.real();
  }
  double omega_norm(const CVec& v) const { return std::sqrt(std::max(0.0, omega_sq(v))); }

  // Real pairing sum h_ab v_a conj(w_b); real part is the metric pairing.
  std::complex<double> herm_pair(const CVec& v, const CVec& w) const {
    const int d = dim();
    std::complex<double> s(0.0, 0.0);
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) s += herm[a * d + b] * v[a] * std::conj(w[b]);
    return s;
  }

  static LatticeTorus make(const Lattice& lat, const std::vector<std::complex<double>>& h,
                           int diameter_grid = 0) {
    LatticeTorus t;
    t.lattice = lat;
    t.herm = h;
    const int d = lat.dim;
    if (static_cast<int>(h.size()) != d * d) throw BadConfig("hermitian matrix has wrong size");
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b)
        if (std::abs(h[a * d + b] - std::conj(h[b * d + a])) > 1e-14)
          throw BadConfig("metric matrix is not Hermitian");
    if (d == 1) {
      t.h_min_eig = t.h_max_eig = h[0].real();
    } else {
      const double tr = h[0].real() + h[3].real();
      const double det = (h[0] * h[3] - h[1] * h[2]).real();
      const double disc = std::sqrt(std::max(0.0, tr * tr / 4.0 - det));
      t.h_min_eig = tr / 2.0 - disc;
      t.h_max_eig = tr / 2.0 + disc;
    }
    if (t.h_min_eig <= 0.0) throw BadConfig("metric matrix is not positive definite");

    // Diameter: max over a fundamental-domain grid of the distance to 0,
    // padded by the half-cell Lipschitz bound so it upper-bounds the truth.
    const int n = 2 * d;
    const int g = diameter_grid > 0 ? diameter_grid : (d == 1 ? 128 : 12);
    double cell = 0.0;
    {
      Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
      for (int i = 0; i < n; ++i) diag += (0.5 / g) * lat.basis.col(i);
      cell = t.omega_norm(cvec_from_real(diag));
    }
    double mx = 0.0;
    std::vector<int> idx(n, 0);
    const CVec origin(d, {0.0, 0.0});
    while (true) {
      Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
      for (int i = 0; i < n; ++i) x += (double(idx[i]) / g) * lat.basis.col(i);
      mx = std::max(mx, torus_distance_of(t, cvec_from_real(x), origin));
      int p = n - 1;
      while (p >= 0 && idx[p] == g - 1) idx[p--] = 0;
      if (p < 0) break;
      ++idx[p];
    }
    t.diameter = mx + cell;
    return t;
  }

  static double torus_distance_of(const LatticeTorus& t, const CVec& p, const CVec& q) {
    const CVec w = cvec_sub(p, q);
    LatticePoint lp = detail::nearest_translate_impl(w, t.lattice, [&](const Eigen::VectorXd& v) {
      return t.omega_sq(cvec_from_real(v));
    });
    return t.omega_norm(cvec_sub(w, lp.vec));
  }
};

inline double torus_distance(const CVec& p, const CVec& q, const LatticeTorus& torus) {
  return LatticeTorus::torus_distance_of(torus, p, q);
}

inline double torus_distance(std::complex<double> p, std::complex<double> q,
                             const LatticeTorus& torus) {
  return torus_distance(CVec{p}, CVec{q}, torus);
}

// ---------------------------------------------------------------------------
// Test forms: real Fourier characters times Hermitian pairing matrices.
// Index 0 is the mass form omega itself (zero mode, cos branch, metric
// matrix). Enumeration is ordered by total mode degree, then mode vector
// lexicographically, then branch (cos before sin), then matrix index.
// ---------------------------------------------------------------------------

struct TestForm {
  long long index = 0;
  std::vector<int> mode;                    // length 2d, canonical representative
  bool sin_branch = false;                  // cos if false
  int matrix_index = 0;                     // 0 = metric matrix, then elementary
  std::vector<std::complex<double>> coeff;  // d x d Hermitian pairing matrix
};

namespace detail {

inline std::vector<std::vector<std::complex<double>>> pairing_matrices(const LatticeTorus& t) {
  const int d = t.dim();
  std::vector<std::vector<std::complex<double>>> out;
  out.push_back(t.herm);  // index 0: the mass form's matrix
  if (d == 1) {
    out.push_back({{1.0, 0.0}});
  } else {
    using C = std::complex<double>;
    out.push_back({C(1, 0), C(0, 0), C(0, 0), C(0, 0)});   // E00
    out.push_back({C(0, 0), C(0, 0), C(0, 0), C(1, 0)});   // E11
    out.push_back({C(0, 0), C(1, 0), C(1, 0), C(0, 0)});   // E01 + E10
    out.push_back({C(0, 0), C(0, 1), C(0, -1), C(0, 0)});  // i(E01 - E10)
  }
  return out;
}

// All canonical modes (m == 0 or first nonzero > 0) with total degree T,
// in lexicographic order.
inline void canonical_modes(int n, int T, std::vector<std::vector<int>>& out) {
  std::vector<int> cur(n, 0);
  // recursive lexicographic enumeration of vectors with sum |m_i| == T
  struct Rec {
    int n, T;
    std::vector<int>& cur;
    std::vector<std::vector<int>>& out;
    void go(int pos, int rem) {
      if (pos == n - 1) {
        if (rem == 0) {
          cur[pos] = 0;
          emit();
        } else {
          cur[pos] = -rem;
          emit();
          cur[pos] = rem;
          emit();
        }
        return;
      }
      for (int v = -rem; v <= rem; ++v) {
        cur[pos] = v;
        go(pos + 1, rem - std::abs(v));
      }
    }
    void emit() {
      for (int i = 0; i < n; ++i) {
        if (cur[i] > 0) break;
        if (cur[i] < 0) return;  // first nonzero must be positive
      }
      out.push_back(cur);
    }
  } rec{n, T, cur, out};
  rec.go(0, T);
}

}  // namespace detail

inline TestForm test_form_by_index(long long j, const LatticeTorus& torus) {
  const int n = 2 * torus.dim();
  const auto mats = detail::pairing_matrices(torus);
  long long count = 0;
  for (int T = 0;; ++T) {
    std::vector<std::vector<int>> modes;
    detail::canonical_modes(n, T, modes);
    for (const auto& m : modes) {
      const bool zero = (T == 0);
      const int branches = zero ? 1 : 2;
      for (int br = 0; br < branches; ++br)
        for (int mi = 0; mi < static_cast<int>(mats.size()); ++mi) {
          if (count == j) {
            TestForm f;
            f.index = j;
            f.mode = m;
            f.sin_branch = (br == 1);
            f.matrix_index = mi;
            f.coeff = mats[mi];
            return f;
          }
          ++count;
        }
    }
    if (T > 64) throw std::runtime_error("test form index out of enumerable range");
  }
}

inline long long test_form_index(const TestForm& f, const LatticeTorus& torus) {
  const int n = 2 * torus.dim();
  const auto mats = detail::pairing_matrices(torus);
  long long count = 0;
  int degf = 0;
  for (int x : f.mode) degf += std::abs(x);
  for (int T = 0; T <= degf; ++T) {
    std::vector<std::vector<int>> modes;
    detail::canonical_modes(n, T, modes);
    for (const auto& m : modes) {
      const bool zero = (T == 0);
      const int branches = zero ? 1 : 2;
      for (int br = 0; br < branches; ++br)
        for (int mi = 0; mi < static_cast<int>(mats.size()); ++mi) {
          if (T == degf && m == f.mode && (br == 1) == f.sin_branch && mi == f.matrix_index)
            return count;
          ++count;
        }
    }
  }
  throw std::runtime_error("test form not found in enumeration");
}

// Character value chi_m(p) = cos/sin(2 pi m . a(p)) with a(p) the basis
// coordinates of p; exactly doubly periodic.
inline double char_value(const TestForm& f, const CVec& p, const LatticeTorus& torus) {
  const Eigen::VectorXd a = torus.lattice.basis_inv * real_coords(p);
  double phase = 0.0;
  for (int i = 0; i < a.size(); ++i) phase += f.mode[i] * a(i);
  phase *= kTwoPi;
  return f.sin_branch ? std::sin(phase) : std::cos(phase);
}

// chi_m(p) times the pairing matrix.
inline std::vector<std::complex<double>> test_form_value(const TestForm& f, const CVec& p,
                                                         const LatticeTorus& torus) {
  const double c = char_value(f, p, torus);
  auto m = f.coeff;
  for (auto& e : m) e *= c;
  return m;
}

// Pullback density of the form under a map with value p and complex
// derivative v at a domain point: chi_m(p) * Re sum c_ab v_a conj(v_b).
inline double form_density(const TestForm& f, const CVec& p, const CVec& v,
                           const LatticeTorus& torus) {
  const int d = torus.dim();
  std::complex<double> s(0.0, 0.0);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) s += f.coeff[a * d + b] * v[a] * std::conj(v[b]);
  return char_value(f, p, torus) * s.real();
}

// sup |grad chi| = 2 pi |B^{-T} m|.
inline double char_gradient_bound(const TestForm& f, const LatticeTorus& torus) {
  Eigen::VectorXd m(2 * torus.dim());
  for (int i = 0; i < m.size(); ++i) m(i) = f.mode[i];
  return kTwoPi * (torus.lattice.basis_inv.transpose() * m).norm();
}

// Spectral norm of the pairing matrix (d <= 2).
inline double matrix_spectral_bound(const TestForm& f, const LatticeTorus& torus) {
  const int d = torus.dim();
  if (d == 1) return std::abs(f.coeff[0]);
  const double tr = std::abs(f.coeff[0].real()) + std::abs(f.coeff[3].real());
  const double off = std::abs(f.coeff[1]);
  return tr + 2.0 * off;  // coarse upper bound, fine for sensitivity use
}

inline std::vector<TestForm> first_test_forms(int count, const LatticeTorus& torus) {
  std::vector<TestForm> out;
  out.reserve(count);
  for (int j = 0; j < count; ++j) out.push_back(test_form_by_index(j, torus));
  return out;
}

// The default target: C / (Z + iZ) with the flat identity form.
inline LatticeTorus default_square_torus() {
  Lattice lat = Lattice::make(1, {CVec{cplx(1.0, 0.0)}, CVec{cplx(0.0, 1.0)}});
  return LatticeTorus::make(lat, {{1.0, 0.0}});
}

}  // namespace ahlfors
