#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "epiq/linalg.hpp"

namespace epiq {

using Vec3 = Eigen::Vector3d;
using Spinor = Eigen::Vector2cd;
using SpinMatrix = Eigen::Matrix2cd;

/// Unit vector in space (norm 1 to 1e-12, else InvalidDirection).
class Direction {
public:
  explicit Direction(const Vec3& components);
  /// (cos t, sin t, 0) for an angle t in degrees.
  static Direction planar(double degrees);

  const Vec3& components() const noexcept { return v_; }
  double dot(const Direction& other) const { return v_.dot(other.v_); }
  Direction operator-() const { return Direction(-v_); }

private:
  Vec3 v_;
};

/// cos(t/2) I - i sin(t/2) (n . sigma): the 2x2 image of the rotation by t about n.
SpinMatrix spin_rotation(const Vec3& axis, double angle);

/// Bloch vector (2 Re(a* b), 2 Im(a* b), |a|^2 - |b|^2) of a spinor (a, b).
Vec3 bloch_vector(const Spinor& psi);

/// Answer s = +-1 to the question "sign of a . phi?". Bloch vector is s * a.
struct QubitState {
  Direction bloch;
  int sign;
  Spinor amplitudes;
};

/// The spinor obtained by rotating |+z> (s = +1) or |-z> (s = -1) by the
/// rotation carrying z onto a along the great circle.
QubitState qubit_state(const Direction& a, int sign);

/// |<a,s|b,t>|^2 from the explicit spinors. Signs must be +-1.
double qubit_transition(const Direction& a, int s, const Direction& b, int t);

/// E(lambda^a mu^b) = -a . b for the singlet pair.
double epr_correlation(const Direction& a, const Direction& b);

struct SampledCorrelation {
  double correlation = 0.0;
  double standard_error = 0.0;  // sqrt((1 - E^2) / n)
  std::uint64_t samples = 0;
  std::uint64_t first_plus = 0;   // draws with lambda^a = +1
  std::uint64_t second_plus = 0;  // draws with mu^b = +1
};

/// Draws (s, t) from P(s, t) = (1 - s t a.b) / 4. Samples are split into fixed
/// chunks, chunk k using stream (seed, stream_base + k).
SampledCorrelation sample_epr_correlation(const Direction& a, const Direction& b,
                                          std::uint64_t samples, std::uint64_t seed,
                                          std::uint64_t stream_base = 0);

/// Local sign model: phi uniform on the sphere, lambda = sign(a.phi),
/// mu = -sign(b.phi). Converges to -1 + 2 angle(a, b) / pi.
SampledCorrelation classical_sign_model(const Direction& a, const Direction& b,
                                        std::uint64_t samples, std::uint64_t seed,
                                        std::uint64_t stream_base = 0);

struct ChshResult {
  /// E(a,b), E(a,b'), E(a',b), E(a',b').
  std::array<double, 4> correlations{};
  std::array<double, 4> standard_errors{};
  double value = 0.0;           // |E(a,b) - E(a,b') + E(a',b) + E(a',b')|
  double standard_error = 0.0;  // zero on the analytic path
  bool violation = false;       // value > 2
};

enum class BellMode { quantum_analytic, quantum_sampled, classical };

ChshResult chsh(const Direction& a, const Direction& a2, const Direction& b,
                const Direction& b2);
/// Sampled variants; the four pairs use disjoint stream ranges.
ChshResult chsh(const Direction& a, const Direction& a2, const Direction& b,
                const Direction& b2, BellMode mode, std::uint64_t samples, std::uint64_t seed);

/// Points (r sin t cos p, r sin t sin p, z) of the Fibonacci spiral.
std::vector<Vec3> fibonacci_sphere(std::size_t n);

struct CoverageResult {
  double statistic = 0.0;  // max over the grid of the distance to the nearest sample
  std::size_t grid_points = 0;
  std::uint64_t samples = 0;
};

/// Bloch vectors of U|+z> for the given rotations, scored against a
/// 1000-point grid.
CoverageResult bloch_coverage(std::span<const SpinMatrix> rotations);

/// Haar-random rotations from normalized 4-dimensional Gaussians.
CoverageResult bloch_coverage(std::uint64_t samples, std::uint64_t seed);

/// Distance from p to the nearest of the given points.
double nearest_distance(const Vec3& p, std::span<const Vec3> points);

} // namespace epiq
