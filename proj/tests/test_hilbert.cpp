#include "doctest.h"

#include "epiq/errors.hpp"
#include "epiq/hilbert.hpp"
#include "support.hpp"

using namespace epiq;

namespace {

// U(g) as a dense matrix straight from the definition (U(g)f)(phi) = f(phi g).
CMatrix regular_oracle(const GroupAction& a, ElementIndex g) {
  const auto n = static_cast<Eigen::Index>(a.num_points());
  CMatrix m = CMatrix::Zero(n, n);
  for (PointIndex p = 0; p < a.num_points(); ++p)
    m(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(a.apply(p, g))) = 1.0;
  return m;
}

} // namespace

TEST_CASE("the regular representation is a homomorphism U(g)U(h) = U(gh)") {
  const auto& m = testing::spin3();
  const auto u = build_regular_rep(m);
  const auto& g = m.group();
  for (ElementIndex x = 0; x < g.size(); ++x) {
    CHECK((u.matrix(x) - regular_oracle(m.action(), x)).norm() == 0.0);
    for (ElementIndex y = 0; y < g.size(); ++y)
      CHECK((u.matrix(x) * u.matrix(y) - u.matrix(g.multiply(x, y))).norm() == 0.0);
  }
}

TEST_CASE("spin3 W is unitary, homomorphic and equal to the hand-derived images") {
  const auto& qm = testing::spin3_qm();
  const auto& g = qm.model().group();
  CHECK(qm.mode() == RealizationMode::full_group);
  CHECK(qm.dimension() == 2);
  REQUIRE(qm.W().domain.size() == g.size());
  for (ElementIndex x = 0; x < g.size(); ++x) {
    const auto& wx = qm.W().at(x);
    CHECK(matrix_norm(wx - testing::spin3_w_oracle(g.name(x))) < 1e-12);
    CHECK(matrix_norm(wx.adjoint() * wx - CMatrix::Identity(2, 2)) < 1e-10);
    for (ElementIndex y = 0; y < g.size(); ++y)
      CHECK(matrix_norm(wx * qm.W().at(y) - qm.W().at(g.multiply(x, y))) < 1e-10);
  }
  CHECK(qm.W().word_consistency_residual < 1e-8);
  CHECK(qm.W().invariance_residual < 1e-10);
}

TEST_CASE("triangle6 falls back to the indicator realization on its generated subgroup") {
  const auto& qm = testing::triangle6_qm();
  CHECK(qm.mode() == RealizationMode::indicator_fallback);
  CHECK(qm.W().domain.size() == 3);
  CHECK(qm.dimension() == 3);
  const auto r01 = *qm.model().group().find("r01");
  CHECK_THROWS_AS(qm.W().at(r01), NotInGeneratedSubgroup);
}

TEST_CASE("spin3 state vectors match the oracle up to phase") {
  const auto& qm = testing::spin3_qm();
  for (ExperimentIndex a = 0; a < 3; ++a)
    for (ValueIndex k = 0; k < 2; ++k)
      CHECK(equal_up_to_phase(qm.state(a, k).vector.coords(), testing::spin3_state_oracle(a, k),
                              1e-12));
}

TEST_CASE("state vectors are orthonormal per experiment and follow the phase convention") {
  for (const auto* qm : {&testing::spin3_qm(), &testing::triangle6_qm()})
    for (ExperimentIndex a = 0; a < qm->catalog().size(); ++a) {
      const auto& states = qm->states(a);
      for (std::size_t i = 0; i < states.size(); ++i) {
        const auto& v = states[i].vector.coords();
        Eigen::Index first = 0;
        while (std::abs(v(first)) <= 1e-12) ++first;
        CHECK(std::abs(v(first).imag()) < 1e-15);
        CHECK(v(first).real() > 0.0);
        for (std::size_t j = 0; j < states.size(); ++j)
          CHECK(std::abs(states[i].vector.inner(states[j].vector) - (i == j ? 1.0 : 0.0)) < 1e-12);
      }
    }
}

TEST_CASE("observables have the state vectors as eigenvectors") {
  for (const auto* qm : {&testing::spin3_qm(), &testing::triangle6_qm()})
    for (ExperimentIndex a = 0; a < qm->catalog().size(); ++a) {
      const auto& t = qm->observable(a);
      CHECK(hermitian_deviation(t.matrix) < 1e-14);
      for (const auto& s : qm->states(a)) {
        const auto& v = s.vector.coords();
        const double lambda = qm->catalog().experiment(a).value(s.value_index).eigenvalue;
        CHECK((t.matrix * v - lambda * v).norm() < 1e-10);
      }
    }
}

TEST_CASE("coherent states from the first reference state cover every state vector") {
  for (const auto* qm : {&testing::spin3_qm(), &testing::triangle6_qm()}) {
    const auto c = qm->catalog().reference();
    const auto gcs = enumerate_gcs(*qm, qm->state(c, 0).vector);
    CHECK(gcs.contains_all_states);
    CHECK(gcs.missing.empty());
    for (ExperimentIndex a = 0; a < qm->catalog().size(); ++a)
      for (const auto& s : qm->states(a)) {
        bool found = false;
        for (const auto& v : gcs.vectors)
          found |= equal_up_to_phase(v.coords(), s.vector.coords(), 1e-10);
        CHECK(found);
      }
  }
}

TEST_CASE("amplitude vectors in different bases do not mix") {
  const AmplitudeVector a(BasisTag::ambient, CVector::Ones(2));
  const AmplitudeVector c(BasisTag::common, CVector::Ones(2));
  CHECK_THROWS_AS(a.inner(c), BasisMismatch);
  CHECK_THROWS_AS(a + c, BasisMismatch);
}

TEST_CASE("building an invalid model reports the failing assumptions") {
  auto action = GroupAction::from_generators({"p0", "p1", "p2", "p3"}, {{"r", {1, 2, 3, 0}}});
  const auto& g = action.group();
  Experiment low("low", {{"0", 1}, {"1", 2}}, {0, 0, 1, 1});
  Experiment mid("mid", {{"0", 1}, {"1", 2}}, {0, 1, 1, 0});
  ExperimentCatalog catalog({low, mid}, {{0, 1, g.identity()}}, 0, g);
  CHECK_THROWS_AS(QuantumModel::build(ExperimentModel("bad", std::move(action), std::move(catalog))),
                  ModelInvalid);
}

TEST_CASE("the phase convention makes the first significant coordinate real and positive") {
  CVector v(3);
  v << Complex(0, 0), Complex(0, -2), Complex(1, 1);
  const auto w = apply_phase_convention(v);
  CHECK(std::abs(w(1) - Complex(2, 0)) < 1e-15);
  CHECK(equal_up_to_phase(v / v.norm(), w / w.norm(), 1e-15));
}
