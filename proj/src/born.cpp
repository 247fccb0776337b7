#include "epiq/born.hpp"

#include <algorithm>
#include <cmath>

#include "epiq/errors.hpp"

namespace epiq {

namespace {

constexpr double kSpectrumSlack = 1e-12;

void require_weights(const std::vector<double>& weights) {
  for (double p : weights)
    if (!(p >= 0.0 && p <= 1.0))
      throw NotAnEffect("effect weight " + std::to_string(p) + " is outside [0, 1]");
}

// Real coordinates of a Hermitian matrix against the basis E_jj, E_jk + E_kj,
// i(E_jk - E_kj): the functional tr(B_m E) for each basis element B_m.
Eigen::VectorXd trace_functionals(const CMatrix& e) {
  const auto d = e.rows();
  Eigen::VectorXd row(d * d);
  Eigen::Index m = 0;
  for (Eigen::Index j = 0; j < d; ++j) row(m++) = e(j, j).real();
  for (Eigen::Index j = 0; j < d; ++j)
    for (Eigen::Index k = j + 1; k < d; ++k) {
      row(m++) = 2.0 * e(j, k).real();
      row(m++) = 2.0 * e(j, k).imag();
    }
  return row;
}

CMatrix hermitian_from_params(const Eigen::VectorXd& x, Eigen::Index d) {
  CMatrix rho = CMatrix::Zero(d, d);
  Eigen::Index m = 0;
  for (Eigen::Index j = 0; j < d; ++j) rho(j, j) = x(m++);
  for (Eigen::Index j = 0; j < d; ++j)
    for (Eigen::Index k = j + 1; k < d; ++k) {
      const double re = x(m++);
      const double im = x(m++);
      rho(j, k) = Complex(re, im);
      rho(k, j) = Complex(re, -im);
    }
  return rho;
}

double max_deviation(const CMatrix& rho, std::span<const GleasonSample> samples) {
  double r = 0.0;
  for (const auto& s : samples)
    r = std::max(r, std::abs((rho * s.effect.matrix()).trace().real() - s.probability));
  return r;
}

} // namespace

TransitionMatrix transition_matrix(const QuantumModel& qm, ExperimentIndex a, ExperimentIndex b) {
  const auto& from = qm.states(a);
  const auto& to = qm.states(b);
  TransitionMatrix t{a, b, RMatrix(from.size(), to.size()), qm.mode(), false};
  for (std::size_t k = 0; k < from.size(); ++k) {
    t.via_fallback = t.via_fallback || from[k].via_fallback;
    for (std::size_t i = 0; i < to.size(); ++i) {
      t.via_fallback = t.via_fallback || to[i].via_fallback;
      t.entries(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(i)) =
          std::norm(from[k].vector.inner(to[i].vector));
    }
  }
  return t;
}

Effect::Effect(std::vector<CVector> basis, std::vector<double> weights,
               std::optional<ExperimentIndex> experiment)
    : basis_(std::move(basis)), weights_(std::move(weights)), experiment_(experiment) {
  if (basis_.empty() || basis_.size() != weights_.size())
    throw NotAnEffect("effect needs one weight per basis vector");
  require_weights(weights_);
  const auto d = basis_.front().size();
  if (static_cast<std::size_t>(d) != basis_.size())
    throw NotAnEffect("effect basis must be complete");
  for (std::size_t i = 0; i < basis_.size(); ++i)
    for (std::size_t j = 0; j < basis_.size(); ++j) {
      if (basis_[j].size() != d) throw NotAnEffect("basis vectors differ in dimension");
      const double expected = i == j ? 1.0 : 0.0;
      if (std::abs(basis_[i].dot(basis_[j]) - expected) > 1e-10)
        throw NotAnEffect("effect basis is not orthonormal");
    }
  matrix_ = CMatrix::Zero(d, d);
  for (std::size_t i = 0; i < basis_.size(); ++i) matrix_ += weights_[i] * projector(basis_[i]);
}

Effect Effect::on_experiment(const QuantumModel& qm, ExperimentIndex b,
                             std::vector<double> weights) {
  std::vector<CVector> basis;
  for (const auto& s : qm.states(b)) basis.push_back(s.vector.coords());
  return Effect(std::move(basis), std::move(weights), b);
}

Effect Effect::on_basis(std::vector<CVector> basis, std::vector<double> weights) {
  return Effect(std::move(basis), std::move(weights), std::nullopt);
}

Effect Effect::from_matrix(const CMatrix& m) {
  if (m.rows() == 0 || m.rows() != m.cols()) throw NotAnEffect("effect matrix must be square");
  if (hermitian_deviation(m) > 1e-12) throw NotAnEffect("effect matrix is not Hermitian");
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(0.5 * (m + m.adjoint()));
  std::vector<CVector> basis;
  std::vector<double> weights;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    double p = solver.eigenvalues()(i);
    if (p < -kSpectrumSlack || p > 1.0 + kSpectrumSlack)
      throw NotAnEffect("effect spectrum leaves [0, 1]: eigenvalue " + std::to_string(p));
    weights.push_back(std::clamp(p, 0.0, 1.0));
    basis.push_back(solver.eigenvectors().col(i));
  }
  return Effect(std::move(basis), std::move(weights), std::nullopt);
}

bool Effect::same_as(const Effect& other, double tol) const {
  return matrix_.rows() == other.matrix_.rows() &&
         (matrix_ - other.matrix_).cwiseAbs().maxCoeff() <= tol;
}

double effect_probability(const DensityMatrix& rho, const Effect& effect) {
  if (rho.dimension() != effect.dimension()) throw BasisMismatch("dimension mismatch");
  double p = 0.0;
  for (std::size_t i = 0; i < effect.basis().size(); ++i) {
    const auto& v = effect.basis()[i];
    p += effect.weights()[i] * v.dot(rho.matrix() * v).real();
  }
  return p;
}

double effect_probability(const AmplitudeVector& state, const Effect& effect) {
  if (static_cast<std::size_t>(state.coords().size()) != effect.dimension())
    throw BasisMismatch("dimension mismatch");
  double p = 0.0;
  for (std::size_t i = 0; i < effect.basis().size(); ++i)
    p += effect.weights()[i] * std::norm(effect.basis()[i].dot(state.coords()));
  return p;
}

double trace_probability(const DensityMatrix& rho, const Effect& effect) {
  if (rho.dimension() != effect.dimension()) throw BasisMismatch("dimension mismatch");
  return (rho.matrix() * effect.matrix()).trace().real();
}

double mixture_check(const Effect& e1, const Effect& e2, const DensityMatrix& rho) {
  const auto average = Effect::from_matrix(0.5 * (e1.matrix() + e2.matrix()));
  return std::abs(effect_probability(rho, average) - 0.5 * effect_probability(rho, e1) -
                  0.5 * effect_probability(rho, e2));
}

GleasonFit gleason_fit(std::span<const GleasonSample> samples) {
  if (samples.empty()) throw RankDeficient("no samples");
  const auto d = samples.front().effect.matrix().rows();
  const Eigen::Index params = d * d;
  const auto n = static_cast<Eigen::Index>(samples.size());
  if (n < params)
    throw RankDeficient("need at least " + std::to_string(params) + " samples, got " +
                        std::to_string(n));

  Eigen::MatrixXd design(n, params);
  Eigen::VectorXd target(n);
  for (Eigen::Index s = 0; s < n; ++s) {
    const auto& sample = samples[static_cast<std::size_t>(s)];
    if (sample.effect.matrix().rows() != d) throw BasisMismatch("samples differ in dimension");
    design.row(s) = trace_functionals(sample.effect.matrix()).transpose();
    target(s) = sample.probability;
  }

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(design, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  if (sv(params - 1) <= 1e-10 * sv(0))
    throw RankDeficient("effect sample does not span the Hermitian matrices (rank " +
                        std::to_string(svd.rank()) + " of " + std::to_string(params) + ")");
  const Eigen::VectorXd x = svd.solve(target);

  GleasonFit fit{DensityMatrix::maximally_mixed(static_cast<std::size_t>(d)),
                 hermitian_from_params(x, d), 0.0, 0.0, 0.0, samples.size()};
  fit.raw_residual = max_deviation(fit.raw, samples);

  Eigen::SelfAdjointEigenSolver<CMatrix> eig(fit.raw);
  fit.min_raw_eigenvalue = eig.eigenvalues()(0);
  Eigen::VectorXd clipped = eig.eigenvalues().cwiseMax(0.0);
  if (clipped.sum() <= 0.0) throw RankDeficient("fit has no positive part");
  clipped /= clipped.sum();
  CMatrix projected = eig.eigenvectors() * clipped.cast<Complex>().asDiagonal() *
                      eig.eigenvectors().adjoint();
  projected /= projected.trace().real();
  fit.recovered = DensityMatrix(0.5 * (projected + projected.adjoint()));
  fit.residual = max_deviation(fit.recovered.matrix(), samples);
  return fit;
}

} // namespace epiq
