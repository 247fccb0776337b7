#include "epiq/qubit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "epiq/errors.hpp"
#include "epiq/rng.hpp"

namespace epiq {

namespace {

constexpr std::uint64_t kChunk = 1u << 14;
constexpr std::size_t kGridPoints = 1000;

void require_sign(int s) {
  if (s != 1 && s != -1) throw std::invalid_argument("sign must be +1 or -1");
}

SampledCorrelation finish(std::int64_t sum, std::uint64_t n, std::uint64_t first_plus,
                          std::uint64_t second_plus) {
  SampledCorrelation out;
  out.samples = n;
  out.correlation = static_cast<double>(sum) / static_cast<double>(n);
  out.standard_error =
      std::sqrt(std::max(0.0, 1.0 - out.correlation * out.correlation) / static_cast<double>(n));
  out.first_plus = first_plus;
  out.second_plus = second_plus;
  return out;
}

// Runs draw(rng) -> (s, t) over fixed chunks, one derived stream per chunk.
template <class Draw>
SampledCorrelation sample_pairs(std::uint64_t samples, std::uint64_t seed,
                                std::uint64_t stream_base, Draw draw) {
  if (samples < 1) throw std::invalid_argument("samples must be at least 1");
  std::int64_t sum = 0;
  std::uint64_t first_plus = 0;
  std::uint64_t second_plus = 0;
  for (std::uint64_t chunk = 0; chunk * kChunk < samples; ++chunk) {
    Rng rng = derive_stream(seed, stream_base + chunk);
    const std::uint64_t end = std::min(samples, (chunk + 1) * kChunk);
    for (std::uint64_t i = chunk * kChunk; i < end; ++i) {
      const auto [s, t] = draw(rng);
      sum += s * t;
      first_plus += s > 0;
      second_plus += t > 0;
    }
  }
  return finish(sum, samples, first_plus, second_plus);
}

Vec3 uniform_on_sphere(Rng& rng) {
  std::normal_distribution<double> normal;
  for (;;) {
    Vec3 v(normal(rng), normal(rng), normal(rng));
    const double n = v.norm();
    if (n > 1e-300) return v / n;
  }
}

// cos of an angle in degrees, reduced by symmetry to [0, 45] so that values at
// multiples of 45 degrees agree exactly across quadrants.
double cos_degrees(double degrees) {
  double r = std::fmod(degrees, 360.0);
  if (r < 0.0) r += 360.0;
  if (r > 180.0) r = 360.0 - r;
  double sign = 1.0;
  if (r > 90.0) {
    r = 180.0 - r;
    sign = -1.0;
  }
  constexpr double rad = std::numbers::pi / 180.0;
  return sign * (r > 45.0 ? std::sin((90.0 - r) * rad) : std::cos(r * rad));
}

// Streams per CHSH pair are spaced far apart so chunk ranges never overlap.
constexpr std::uint64_t kPairStreamStride = std::uint64_t{1} << 40;

} // namespace

Direction::Direction(const Vec3& components) : v_(components) {
  if (!v_.allFinite() || std::abs(v_.norm() - 1.0) > 1e-12)
    throw InvalidDirection("direction must be a unit vector");
}

Direction Direction::planar(double degrees) {
  return Direction(Vec3(cos_degrees(degrees), cos_degrees(90.0 - degrees), 0.0));
}

SpinMatrix spin_rotation(const Vec3& axis, double angle) {
  const Vec3 n = axis.normalized();
  const double c = std::cos(angle / 2.0);
  const double s = std::sin(angle / 2.0);
  const Complex i(0.0, 1.0);
  SpinMatrix m;
  m(0, 0) = c - i * s * n.z();
  m(0, 1) = -i * s * Complex(n.x(), -n.y());
  m(1, 0) = -i * s * Complex(n.x(), n.y());
  m(1, 1) = c + i * s * n.z();
  return m;
}

Vec3 bloch_vector(const Spinor& psi) {
  const Complex cross = std::conj(psi(0)) * psi(1);
  return Vec3(2.0 * cross.real(), 2.0 * cross.imag(), std::norm(psi(0)) - std::norm(psi(1)));
}

QubitState qubit_state(const Direction& a, int sign) {
  require_sign(sign);
  const Vec3 z = Vec3::UnitZ();
  const Vec3 axis = z.cross(a.components());
  const double angle = std::atan2(axis.norm(), z.dot(a.components()));
  SpinMatrix r = SpinMatrix::Identity();
  if (axis.norm() > 1e-15)
    r = spin_rotation(axis, angle);
  else if (a.components().z() < 0.0)
    r = spin_rotation(Vec3::UnitX(), std::numbers::pi);
  const Spinor seed = sign > 0 ? Spinor(1.0, 0.0) : Spinor(0.0, 1.0);
  return QubitState{a, sign, r * seed};
}

double qubit_transition(const Direction& a, int s, const Direction& b, int t) {
  return std::norm(qubit_state(a, s).amplitudes.dot(qubit_state(b, t).amplitudes));
}

double epr_correlation(const Direction& a, const Direction& b) { return -a.dot(b); }

SampledCorrelation sample_epr_correlation(const Direction& a, const Direction& b,
                                          std::uint64_t samples, std::uint64_t seed,
                                          std::uint64_t stream_base) {
  // P(t = s | s) = (1 - a.b) / 2 and each marginal is fair.
  const double p_equal = std::clamp((1.0 - a.dot(b)) / 2.0, 0.0, 1.0);
  return sample_pairs(samples, seed, stream_base, [&](Rng& rng) {
    const int s = uniform01(rng) < 0.5 ? 1 : -1;
    const int t = uniform01(rng) < p_equal ? s : -s;
    return std::pair{s, t};
  });
}

SampledCorrelation classical_sign_model(const Direction& a, const Direction& b,
                                        std::uint64_t samples, std::uint64_t seed,
                                        std::uint64_t stream_base) {
  return sample_pairs(samples, seed, stream_base, [&](Rng& rng) {
    const Vec3 phi = uniform_on_sphere(rng);
    const int s = a.components().dot(phi) >= 0.0 ? 1 : -1;
    const int t = b.components().dot(phi) >= 0.0 ? -1 : 1;
    return std::pair{s, t};
  });
}

namespace {

ChshResult combine(const std::array<double, 4>& e, const std::array<double, 4>& se) {
  ChshResult r;
  r.correlations = e;
  r.standard_errors = se;
  r.value = std::abs(e[0] - e[1] + e[2] + e[3]);
  double var = 0.0;
  for (double x : se) var += x * x;
  r.standard_error = std::sqrt(var);
  r.violation = r.value > 2.0;
  return r;
}

} // namespace

ChshResult chsh(const Direction& a, const Direction& a2, const Direction& b,
                const Direction& b2) {
  return combine({epr_correlation(a, b), epr_correlation(a, b2), epr_correlation(a2, b),
                  epr_correlation(a2, b2)},
                 {0.0, 0.0, 0.0, 0.0});
}

ChshResult chsh(const Direction& a, const Direction& a2, const Direction& b,
                const Direction& b2, BellMode mode, std::uint64_t samples, std::uint64_t seed) {
  if (mode == BellMode::quantum_analytic) return chsh(a, a2, b, b2);
  const std::array<std::pair<const Direction*, const Direction*>, 4> pairs{
      {{&a, &b}, {&a, &b2}, {&a2, &b}, {&a2, &b2}}};
  std::array<double, 4> e{};
  std::array<double, 4> se{};
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const auto base = k * kPairStreamStride;
    const auto r = mode == BellMode::quantum_sampled
                       ? sample_epr_correlation(*pairs[k].first, *pairs[k].second, samples, seed, base)
                       : classical_sign_model(*pairs[k].first, *pairs[k].second, samples, seed, base);
    e[k] = r.correlation;
    se[k] = r.standard_error;
  }
  return combine(e, se);
}

std::vector<Vec3> fibonacci_sphere(std::size_t n) {
  std::vector<Vec3> points;
  points.reserve(n);
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (std::size_t i = 0; i < n; ++i) {
    const double z = 1.0 - (2.0 * static_cast<double>(i) + 1.0) / static_cast<double>(n);
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double p = golden * static_cast<double>(i);
    points.emplace_back(r * std::cos(p), r * std::sin(p), z);
  }
  return points;
}

double nearest_distance(const Vec3& p, std::span<const Vec3> points) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& q : points) best = std::min(best, (p - q).squaredNorm());
  return std::sqrt(best);
}

CoverageResult bloch_coverage(std::span<const SpinMatrix> rotations) {
  if (rotations.empty()) throw std::invalid_argument("at least one rotation is required");
  std::vector<Vec3> samples;
  samples.reserve(rotations.size());
  for (const auto& u : rotations) samples.push_back(bloch_vector(u * Spinor(1.0, 0.0)));
  const auto grid = fibonacci_sphere(kGridPoints);
  CoverageResult out{0.0, grid.size(), rotations.size()};
  for (const auto& g : grid) out.statistic = std::max(out.statistic, nearest_distance(g, samples));
  return out;
}

CoverageResult bloch_coverage(std::uint64_t samples, std::uint64_t seed) {
  if (samples < 1) throw std::invalid_argument("samples must be at least 1");
  Rng rng = derive_stream(seed, 0);
  std::normal_distribution<double> normal;
  std::vector<SpinMatrix> rotations;
  rotations.reserve(samples);
  while (rotations.size() < samples) {
    Eigen::Vector4d q(normal(rng), normal(rng), normal(rng), normal(rng));
    const double n = q.norm();
    if (n < 1e-300) continue;
    q /= n;
    SpinMatrix u;
    u << Complex(q(0), q(1)), Complex(q(2), q(3)), Complex(-q(2), q(3)), Complex(q(0), -q(1));
    rotations.push_back(u);
  }
  return bloch_coverage(rotations);
}

} // namespace epiq
