#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace ahlfors {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

// Error taxonomy shared by all modules.
struct DegenerateDisc : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct QuadratureNotConverged : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct BridgeTooLong : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InconsistentPieces : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct SolverDiverged : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct PointTooCloseToBoundary : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NeckFloorReached : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DeltaFloorReached : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ProbeFailed : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct BadConfig : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Deterministic RNG wrapper; every stochastic choice in the project goes
// through one of these seeded from the run config.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}
  double uniform(double a, double b) {
    std::uniform_real_distribution<double> d(a, b);
    return d(eng_);
  }
  std::complex<double> unit_complex() {
    const double t = uniform(0.0, kTwoPi);
    return {std::cos(t), std::sin(t)};
  }
  std::complex<double> in_disc(double radius) {
    const double r = radius * std::sqrt(uniform(0.0, 1.0));
    return r * unit_complex();
  }
  int uniform_int(int a, int b) {
    std::uniform_int_distribution<int> d(a, b);
    return d(eng_);
  }

 private:
  std::mt19937_64 eng_;
};

inline bool approx_eq(double a, double b, double tol) { return std::abs(a - b) <= tol; }

}  // namespace ahlfors
