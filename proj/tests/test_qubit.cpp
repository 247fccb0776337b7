#include "doctest.h"

#include <numbers>

#include "epiq/errors.hpp"
#include "epiq/qubit.hpp"
#include "support.hpp"

using namespace epiq;

namespace {

// Rodrigues rotation of a 3-vector, independent of the spinor code.
Vec3 rotate(const Vec3& v, const Vec3& axis, double angle) {
  const Vec3 n = axis.normalized();
  return v * std::cos(angle) + n.cross(v) * std::sin(angle) +
         n * n.dot(v) * (1.0 - std::cos(angle));
}

double classical_oracle(const Direction& a, const Direction& b) {
  const double theta = std::acos(std::clamp(a.dot(b), -1.0, 1.0));
  return -1.0 + 2.0 * theta / std::numbers::pi;
}

} // namespace

TEST_CASE("directions must be unit vectors") {
  CHECK_THROWS_AS(Direction(Vec3(1, 1, 0)), InvalidDirection);
  CHECK_THROWS_AS(Direction(Vec3(0, 0, 0)), InvalidDirection);
  CHECK_NOTHROW(Direction(Vec3(0, 0, 1)));
  CHECK(Direction::planar(90).components() == Vec3(0, 1, 0));
  CHECK(Direction::planar(45).components().x() == Direction::planar(45).components().y());
}

TEST_CASE("qubit states carry the signed Bloch vector and unit amplitudes") {
  Rng rng = derive_stream(31, 0);
  for (int i = 0; i < 100; ++i) {
    const auto a = testing::random_direction(rng);
    for (int s : {1, -1}) {
      const auto st = qubit_state(a, s);
      CHECK(std::abs(st.amplitudes.norm() - 1.0) < 1e-12);
      CHECK((bloch_vector(st.amplitudes) - s * a.components()).norm() < 1e-12);
      CHECK(equal_up_to_phase(st.amplitudes, testing::spherical_spinor(a.components(), s), 1e-10));
    }
  }
  CHECK_THROWS_AS(qubit_state(Direction(Vec3(0, 0, 1)), 0), std::invalid_argument);
}

TEST_CASE("transitions match the spherical-spinor oracle and the closed form") {
  Rng rng = derive_stream(32, 0);
  for (int i = 0; i < 100; ++i) {
    const auto a = testing::random_direction(rng);
    const auto b = testing::random_direction(rng);
    for (int s : {1, -1}) {
      double sum = 0.0;
      for (int t : {1, -1}) {
        const double p = qubit_transition(a, s, b, t);
        const double oracle = std::norm(testing::spherical_spinor(a.components(), s)
                                            .dot(testing::spherical_spinor(b.components(), t)));
        CHECK(std::abs(p - oracle) < 1e-12);
        CHECK(std::abs(p - (1.0 + s * t * a.dot(b)) / 2.0) < 1e-12);
        sum += p;
      }
      CHECK(std::abs(sum - 1.0) < 1e-12);
    }
  }
}

TEST_CASE("transition examples: equal, perpendicular and 120 degrees") {
  const auto a = Direction::planar(0);
  CHECK(std::abs(qubit_transition(a, 1, a, 1) - 1.0) < 1e-12);
  CHECK(std::abs(qubit_transition(a, 1, Direction::planar(90), 1) - 0.5) < 1e-12);
  CHECK(std::abs(qubit_transition(a, 1, Direction::planar(120), 1) - 0.25) < 1e-12);
}

TEST_CASE("transitions and correlations are invariant under a common rotation") {
  Rng rng = derive_stream(33, 0);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  for (int i = 0; i < 100; ++i) {
    const auto a = testing::random_direction(rng);
    const auto b = testing::random_direction(rng);
    const Vec3 axis = testing::random_unit3(rng);
    const double t = angle(rng);
    const Direction ra(rotate(a.components(), axis, t).normalized());
    const Direction rb(rotate(b.components(), axis, t).normalized());
    CHECK(std::abs(qubit_transition(a, 1, b, -1) - qubit_transition(ra, 1, rb, -1)) < 1e-12);
    CHECK(std::abs(epr_correlation(a, b) - epr_correlation(ra, rb)) < 1e-12);
  }
}

TEST_CASE("spin rotations act on Bloch vectors as the corresponding rotation") {
  Rng rng = derive_stream(34, 0);
  for (int i = 0; i < 50; ++i) {
    const Vec3 axis = testing::random_unit3(rng);
    const double t = 2.0 * std::numbers::pi * uniform01(rng);
    const auto u = spin_rotation(axis, t);
    CHECK(matrix_norm(u.adjoint() * u - SpinMatrix::Identity()) < 1e-12);
    const auto psi = qubit_state(testing::random_direction(rng), 1).amplitudes;
    CHECK((bloch_vector(u * psi) - rotate(bloch_vector(psi), axis, t)).norm() < 1e-12);
  }
}

TEST_CASE("singlet correlation is minus the dot product") {
  Rng rng = derive_stream(35, 0);
  for (int i = 0; i < 100; ++i) {
    const auto a = testing::random_direction(rng);
    const auto b = testing::random_direction(rng);
    CHECK(epr_correlation(a, b) + a.dot(b) == 0.0);
  }
  const auto z = Direction(Vec3(0, 0, 1));
  CHECK(epr_correlation(z, z) == -1.0);
  CHECK(epr_correlation(z, Direction(Vec3(1, 0, 0))) == 0.0);
}

TEST_CASE("sampled singlet correlations and marginals agree within three standard errors") {
  const std::uint64_t n = 100000;
  for (double deg : {0.0, 30.0, 90.0, 135.0}) {
    const auto a = Direction::planar(0);
    const auto b = Direction::planar(deg);
    const auto r = sample_epr_correlation(a, b, n, 99);
    const double expected = -a.dot(b);
    const double sigma = std::sqrt((1.0 - expected * expected) / static_cast<double>(n));
    CHECK(r.samples == n);
    CHECK(std::abs(r.correlation - expected) <= 3.0 * sigma + 1e-12);
    const double marginal_sigma = std::sqrt(0.25 / static_cast<double>(n));
    CHECK(std::abs(static_cast<double>(r.first_plus) / n - 0.5) <= 3.0 * marginal_sigma);
    CHECK(std::abs(static_cast<double>(r.second_plus) / n - 0.5) <= 3.0 * marginal_sigma);
  }
  const auto again = sample_epr_correlation(Direction::planar(0), Direction::planar(30), n, 99);
  CHECK(again.correlation ==
        sample_epr_correlation(Direction::planar(0), Direction::planar(30), n, 99).correlation);
}

TEST_CASE("analytic CHSH at the standard quadruple reaches two root two") {
  const auto r = chsh(Direction::planar(0), Direction::planar(90), Direction::planar(45),
                      Direction::planar(135));
  CHECK(std::abs(r.value - 2.0 * std::numbers::sqrt2) < 1e-12);
  CHECK(r.violation);
  const auto degenerate = chsh(Direction::planar(0), Direction::planar(0), Direction::planar(70),
                               Direction::planar(70));
  CHECK(std::abs(degenerate.value - 2.0 * std::abs(std::cos(70.0 * std::numbers::pi / 180.0))) <
        1e-12);
  CHECK_FALSE(degenerate.violation);
}

TEST_CASE("analytic CHSH never exceeds the Tsirelson bound") {
  Rng rng = derive_stream(36, 0);
  double best = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const auto r = chsh(testing::random_direction(rng), testing::random_direction(rng),
                        testing::random_direction(rng), testing::random_direction(rng));
    best = std::max(best, r.value);
  }
  CHECK(best <= 2.0 * std::numbers::sqrt2 + 1e-12);
}

TEST_CASE("the classical sign model converges to its linear correlation") {
  const std::uint64_t n = 100000;
  for (double deg : {0.0, 45.0, 90.0, 150.0}) {
    const auto a = Direction::planar(0);
    const auto b = Direction::planar(deg);
    const auto r = classical_sign_model(a, b, n, 5);
    const double expected = classical_oracle(a, b);
    const double sigma = std::sqrt(std::max(1.0 - expected * expected, 0.0) / n);
    CHECK(std::abs(r.correlation - expected) <= 3.0 * sigma + 1e-12);
  }
  CHECK(classical_sign_model(Direction::planar(10), Direction::planar(10), 1000, 1).correlation ==
        -1.0);
}

TEST_CASE("sampled CHSH respects the classical and quantum bounds") {
  Rng rng = derive_stream(37, 0);
  for (std::uint64_t q = 0; q < 20; ++q) {
    const auto a = testing::random_direction(rng);
    const auto a2 = testing::random_direction(rng);
    const auto b = testing::random_direction(rng);
    const auto b2 = testing::random_direction(rng);
    const auto classical = chsh(a, a2, b, b2, BellMode::classical, 100000, q);
    CHECK(classical.value <= 2.0 + 3.0 * classical.standard_error);
    const auto quantum = chsh(a, a2, b, b2, BellMode::quantum_sampled, 100000, q);
    CHECK(quantum.value <= 2.0 * std::numbers::sqrt2 + 3.0 * quantum.standard_error);
  }
  const auto standard = chsh(Direction::planar(0), Direction::planar(90), Direction::planar(45),
                             Direction::planar(135), BellMode::quantum_sampled, 100000, 1);
  CHECK(standard.violation);
}

TEST_CASE("Bloch coverage: one sample, many samples and the identity rotation") {
  CHECK(bloch_coverage(1, 3).statistic > 1.5);
  const auto dense = bloch_coverage(100000, 3);
  CHECK(dense.statistic < 0.1);
  CHECK(dense.grid_points == 1000);
  const std::vector<SpinMatrix> identity{SpinMatrix::Identity()};
  const auto grid = fibonacci_sphere(1000);
  const Vec3 up(0, 0, 1);
  const std::vector<Vec3> seed_point{up};
  const auto own = *std::min_element(grid.begin(), grid.end(), [&](const Vec3& x, const Vec3& y) {
    return (x - up).norm() < (y - up).norm();
  });
  const auto single = bloch_coverage(identity);
  CHECK(single.samples == 1);
  CHECK(nearest_distance(up, seed_point) == 0.0);
  CHECK(nearest_distance(own, seed_point) == doctest::Approx((own - up).norm()));
  for (const auto& p : grid) CHECK(std::abs(p.norm() - 1.0) < 1e-12);
}
