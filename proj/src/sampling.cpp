#include "epiq/sampling.hpp"

#include <cmath>
#include <stdexcept>

namespace epiq {

namespace {

CMatrix gaussian_matrix(std::size_t rows, std::size_t cols, Rng& rng) {
  std::normal_distribution<double> normal;
  CMatrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      m(i, j) = Complex(re, im);
    }
  return m;
}

std::vector<CVector> columns(const CMatrix& u) {
  std::vector<CVector> out;
  for (Eigen::Index j = 0; j < u.cols(); ++j) out.push_back(u.col(j));
  return out;
}

std::vector<double> uniform_weights(std::size_t d, Rng& rng) {
  std::vector<double> w;
  for (std::size_t i = 0; i < d; ++i) w.push_back(uniform01(rng));
  return w;
}

} // namespace

CMatrix random_unitary(std::size_t d, Rng& rng) {
  const CMatrix z = gaussian_matrix(d, d, rng);
  Eigen::HouseholderQR<CMatrix> qr(z);
  CMatrix q = qr.householderQ();
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < q.cols(); ++j) {
    const double mag = std::abs(r(j, j));
    if (mag > 0.0) q.col(j) *= r(j, j) / mag;
  }
  return q;
}

CVector random_unit_vector(std::size_t d, Rng& rng) {
  CVector v = gaussian_matrix(d, 1, rng).col(0);
  return v / v.norm();
}

DensityMatrix random_density_matrix(std::size_t d, Rng& rng) {
  const CMatrix u = random_unitary(d, rng);
  // Uniform on the simplex: normalized exponentials.
  Eigen::VectorXd p(static_cast<Eigen::Index>(d));
  for (Eigen::Index i = 0; i < p.size(); ++i) p(i) = -std::log1p(-uniform01(rng));
  p /= p.sum();
  CMatrix rho = u * p.cast<Complex>().asDiagonal() * u.adjoint();
  return DensityMatrix(0.5 * (rho + rho.adjoint()));
}

Effect random_effect(std::size_t d, Rng& rng) {
  const CMatrix u = random_unitary(d, rng);
  return Effect::on_basis(columns(u), uniform_weights(d, rng));
}

std::pair<Effect, Effect> degenerate_effect_pair(std::size_t d, Rng& rng) {
  if (d < 2) throw std::invalid_argument("a repeated weight needs dimension at least 2");
  const CMatrix u = random_unitary(d, rng);
  auto weights = uniform_weights(d, rng);
  weights[1] = weights[0];
  CMatrix mixed = u;
  const CMatrix v = random_unitary(2, rng);
  mixed.leftCols(2) = u.leftCols(2) * v;
  return {Effect::on_basis(columns(u), weights), Effect::on_basis(columns(mixed), weights)};
}

std::vector<Effect> random_effect_sample(std::size_t d, std::size_t bases, Rng& rng) {
  std::vector<Effect> out;
  for (std::size_t b = 0; b < bases; ++b) {
    const CMatrix u = random_unitary(d, rng);
    const auto cols = columns(u);
    // One effect per basis vector keeps every projector direction in the sample.
    for (std::size_t i = 0; i < d; ++i) {
      std::vector<double> w(d, 0.0);
      w[i] = 1.0;
      out.push_back(Effect::on_basis(cols, w));
    }
    out.push_back(Effect::on_basis(cols, uniform_weights(d, rng)));
  }
  return out;
}

} // namespace epiq
