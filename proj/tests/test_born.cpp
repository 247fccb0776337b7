#include "doctest.h"

#include "epiq/born.hpp"
#include "epiq/errors.hpp"
#include "epiq/sampling.hpp"
#include "support.hpp"

using namespace epiq;

TEST_CASE("transition matrices are doubly stochastic, symmetric under reversal, identity on the diagonal") {
  for (const auto* qm : {&testing::spin3_qm(), &testing::triangle6_qm()})
    for (ExperimentIndex a = 0; a < qm->catalog().size(); ++a)
      for (ExperimentIndex b = 0; b < qm->catalog().size(); ++b) {
        const auto t = transition_matrix(*qm, a, b);
        const auto back = transition_matrix(*qm, b, a);
        for (Eigen::Index i = 0; i < t.entries.rows(); ++i) {
          CHECK(std::abs(t.entries.row(i).sum() - 1.0) < 1e-12);
          CHECK(std::abs(t.entries.col(i).sum() - 1.0) < 1e-12);
        }
        CHECK((t.entries - back.entries.transpose()).cwiseAbs().maxCoeff() < 1e-12);
        if (a == b)
          CHECK((t.entries - RMatrix::Identity(t.entries.rows(), t.entries.cols()))
                    .cwiseAbs()
                    .maxCoeff() < 1e-12);
      }
}

TEST_CASE("triangle6 transitions are exact permutation matrices") {
  const auto& qm = testing::triangle6_qm();
  for (ExperimentIndex a = 0; a < 3; ++a)
    for (ExperimentIndex b = 0; b < 3; ++b) {
      const auto t = transition_matrix(qm, a, b);
      CHECK(t.mode == RealizationMode::indicator_fallback);
      for (Eigen::Index i = 0; i < 3; ++i) {
        int ones = 0;
        for (Eigen::Index j = 0; j < 3; ++j) {
          const double p = t.entries(i, j);
          CHECK((p == 0.0 || p == 1.0));
          ones += p == 1.0;
        }
        CHECK(ones == 1);
      }
    }
}

TEST_CASE("spin3 transitions equal the oracle built from the hand-derived representation") {
  const auto& qm = testing::spin3_qm();
  for (ExperimentIndex a = 0; a < 3; ++a)
    for (ExperimentIndex b = 0; b < 3; ++b) {
      const auto t = transition_matrix(qm, a, b);
      for (ValueIndex k = 0; k < 2; ++k)
        for (ValueIndex i = 0; i < 2; ++i) {
          const double expected =
              std::norm(testing::spin3_state_oracle(a, k).dot(testing::spin3_state_oracle(b, i)));
          CHECK(std::abs(t.entries(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(i)) -
                         expected) < 1e-12);
        }
    }
}

TEST_CASE("effects reject weights outside [0, 1] and non-orthonormal bases") {
  const auto& qm = testing::spin3_qm();
  CHECK_THROWS_AS(Effect::on_experiment(qm, 0, {1.2, 0.0}), NotAnEffect);
  CHECK_THROWS_AS(Effect::on_experiment(qm, 0, {-0.1, 0.5}), NotAnEffect);
  CVector u(2), v(2);
  u << 1, 0;
  v << 1, 1;
  CHECK_THROWS_AS(Effect::on_basis({u, v}, {0.5, 0.5}), NotAnEffect);
  CMatrix big = 2.0 * CMatrix::Identity(2, 2);
  CHECK_THROWS_AS(Effect::from_matrix(big), NotAnEffect);
}

TEST_CASE("effect probability equals tr(rho E) on random states and effects") {
  Rng rng = derive_stream(11, 0);
  for (int i = 0; i < 50; ++i) {
    const auto rho = random_density_matrix(3, rng);
    const auto e = random_effect(3, rng);
    const double p = effect_probability(rho, e);
    CHECK(p >= -1e-12);
    CHECK(p <= 1.0 + 1e-12);
    CHECK(std::abs(p - trace_probability(rho, e)) < 1e-12);
  }
}

TEST_CASE("probabilities do not depend on the decomposition of an effect") {
  Rng rng = derive_stream(12, 0);
  for (int i = 0; i < 100; ++i) {
    const auto rho = random_density_matrix(3, rng);
    const auto [e1, e2] = degenerate_effect_pair(3, rng);
    CHECK(e1.same_as(e2));
    CHECK(std::abs(effect_probability(rho, e1) - effect_probability(rho, e2)) < 1e-10);
  }
}

TEST_CASE("the probability of an average effect is the average probability") {
  Rng rng = derive_stream(13, 0);
  for (int i = 0; i < 100; ++i) {
    const auto rho = random_density_matrix(2, rng);
    const auto e1 = random_effect(2, rng);
    const auto e2 = random_effect(2, rng);
    CHECK(mixture_check(e1, e2, rho) < 1e-10);
  }
}

TEST_CASE("least-squares fit recovers random states from spanning effect samples") {
  for (std::size_t d : {2u, 3u}) {
    Rng rng = derive_stream(14, d);
    for (int i = 0; i < 20; ++i) {
      const auto rho = random_density_matrix(d, rng);
      std::vector<GleasonSample> samples;
      for (auto& e : random_effect_sample(d, d + 1, rng)) {
        const double p = effect_probability(rho, e);
        samples.push_back({std::move(e), p});
      }
      const auto fit = gleason_fit(samples);
      CHECK((fit.recovered.matrix() - rho.matrix()).norm() < 1e-8);
      CHECK(fit.residual < 1e-10);
    }
  }
}

TEST_CASE("effects diagonal in the spin3 bases cannot identify a state") {
  // Every spin3 basis is a permutation of the standard basis, so off-diagonal
  // entries of rho are invisible.
  const auto& qm = testing::spin3_qm();
  const auto rho = DensityMatrix::maximally_mixed(2);
  std::vector<GleasonSample> samples;
  for (ExperimentIndex b = 0; b < 3; ++b)
    for (double w : {0.0, 0.3, 1.0}) {
      auto e = Effect::on_experiment(qm, b, {w, 1.0 - w});
      const double p = effect_probability(rho, e);
      samples.push_back({std::move(e), p});
    }
  CHECK_THROWS_AS(gleason_fit(samples), RankDeficient);
  CHECK_THROWS_AS(gleason_fit(std::span<const GleasonSample>(samples.data(), 2)), RankDeficient);
}

TEST_CASE("density matrices must be Hermitian, unit trace and positive") {
  CMatrix m(2, 2);
  m << 0.5, 0.1, 0.0, 0.5;
  CHECK_THROWS_AS(DensityMatrix{m}, InvalidDensityMatrix);
  m << 0.6, 0.0, 0.0, 0.6;
  CHECK_THROWS_AS(DensityMatrix{m}, InvalidDensityMatrix);
  m << 1.2, 0.0, 0.0, -0.2;
  CHECK_THROWS_AS(DensityMatrix{m}, InvalidDensityMatrix);
  const auto mixed = DensityMatrix::maximally_mixed(2);
  CHECK(std::abs(mixed.purity() - 0.5) < 1e-15);
  CHECK(std::abs(mixed.von_neumann_entropy() - std::log(2.0)) < 1e-14);
}
