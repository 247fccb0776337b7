#pragma once

// Independent oracles shared by the unit and acceptance tests. Nothing here
// calls the library routine it is used to check.

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "epiq/hilbert.hpp"
#include "epiq/model.hpp"
#include "epiq/model_io.hpp"
#include "epiq/qubit.hpp"
#include "epiq/rng.hpp"

namespace epiq::testing {

inline const ExperimentModel& spin3() {
  static const ExperimentModel m = load_bundled_model("spin3");
  return m;
}

inline const ExperimentModel& triangle6() {
  static const ExperimentModel m = load_bundled_model("triangle6");
  return m;
}

inline const QuantumModel& spin3_qm() {
  static const QuantumModel qm = QuantumModel::build(spin3());
  return qm;
}

inline const QuantumModel& triangle6_qm() {
  static const QuantumModel qm = QuantumModel::build(triangle6());
  return qm;
}

/// g is in G^a iff equal values stay equal after acting with g (pairwise check).
inline ElementSet brute_force_induced(const ExperimentModel& m, ExperimentIndex a) {
  const auto& e = m.catalog().experiment(a);
  ElementSet out;
  for (ElementIndex g = 0; g < m.group().size(); ++g) {
    bool ok = true;
    for (PointIndex p = 0; p < m.num_points() && ok; ++p)
      for (PointIndex q = 0; q < m.num_points() && ok; ++q)
        if (e.value_of(p) == e.value_of(q) &&
            e.value_of(m.action().apply(p, g)) != e.value_of(m.action().apply(q, g)))
          ok = false;
    if (ok) out.push_back(g);
  }
  return out;
}

/// Relabeling beta with lambda^b(phi) = beta(lambda^a(phi g)), found by trying
/// every permutation of the value indices.
inline std::optional<std::vector<ValueIndex>> brute_force_bijection(const ExperimentModel& m,
                                                                    ExperimentIndex a,
                                                                    ExperimentIndex b,
                                                                    ElementIndex g) {
  const auto& ea = m.catalog().experiment(a);
  const auto& eb = m.catalog().experiment(b);
  if (ea.num_values() != eb.num_values()) return std::nullopt;
  std::vector<ValueIndex> beta(ea.num_values());
  std::iota(beta.begin(), beta.end(), ValueIndex{0});
  do {
    bool ok = true;
    for (PointIndex p = 0; p < m.num_points() && ok; ++p)
      ok = eb.value_of(p) == beta[ea.value_of(m.action().apply(p, g))];
    if (ok) return beta;
  } while (std::next_permutation(beta.begin(), beta.end()));
  return std::nullopt;
}

/// Hand-derived images of the spin3 elements in the two-dimensional common
/// space: rotation by 60k degrees is X^k, reflections in a measurement axis
/// act trivially and reflections in the perpendicular axes swap.
inline CMatrix spin3_w_oracle(const std::string& name) {
  CMatrix x(2, 2);
  x << 0, 1, 1, 0;
  const CMatrix id = CMatrix::Identity(2, 2);
  const int degrees = std::stoi(name.substr(1));
  if (name[0] == 'r') return (degrees / 60) % 2 == 0 ? id : x;
  return (degrees / 30) % 2 == 0 ? id : x;
}

/// |a,k> from the oracle W and brute-force bijections.
inline CVector spin3_state_oracle(ExperimentIndex a, ValueIndex k) {
  const auto& m = spin3();
  const auto c = m.catalog().reference();
  const auto g = m.catalog().connection(c, a);
  const auto beta = *brute_force_bijection(m, c, a, g);
  const auto source = static_cast<Eigen::Index>(std::find(beta.begin(), beta.end(), k) - beta.begin());
  return spin3_w_oracle(m.group().name(g)).col(source);
}

/// Standard spherical-coordinate spinor (cos t/2, e^{ip} sin t/2) for direction s*a.
inline Spinor spherical_spinor(const Vec3& a, int s) {
  const Vec3 v = s * a;
  const double theta = std::acos(std::clamp(v.z(), -1.0, 1.0));
  const double phi = std::atan2(v.y(), v.x());
  return Spinor(std::cos(theta / 2), std::polar(std::sin(theta / 2), phi));
}

inline Vec3 random_unit3(Rng& rng) {
  std::normal_distribution<double> normal;
  Vec3 v(normal(rng), normal(rng), normal(rng));
  return v / v.norm();
}

inline Direction random_direction(Rng& rng) { return Direction(random_unit3(rng)); }

} // namespace epiq::testing

namespace epiq::testing {

/// True when every empirical frequency lies within k binomial standard errors
/// of its prediction; a zero-variance prediction must be matched exactly.
inline bool within_sigma(const std::vector<double>& empirical, const std::vector<double>& predicted,
                         double runs, double k) {
  if (empirical.size() != predicted.size()) return false;
  for (std::size_t i = 0; i < empirical.size(); ++i) {
    const double p = std::clamp(predicted[i], 0.0, 1.0);
    const double sigma = std::sqrt(p * (1.0 - p) / runs);
    if (std::abs(empirical[i] - p) > k * sigma + 1e-12) return false;
  }
  return true;
}

/// Row vector kappa times the transition matrix: the answer distribution one step later.
inline std::vector<double> markov_step(const std::vector<double>& kappa, const RMatrix& transition) {
  std::vector<double> out(static_cast<std::size_t>(transition.cols()), 0.0);
  for (std::size_t k = 0; k < kappa.size(); ++k)
    for (std::size_t i = 0; i < out.size(); ++i)
      out[i] += kappa[k] * transition(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(i));
  return out;
}

} // namespace epiq::testing
