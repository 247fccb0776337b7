#pragma once

#include <complex>

#include <Eigen/Dense>

namespace epiq {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RMatrix = Eigen::MatrixXd;

enum class NormKind { operator_norm, max_entry };

double matrix_norm(const CMatrix& m, NormKind kind = NormKind::operator_norm);

/// Largest |m - m^dagger| entry.
double hermitian_deviation(const CMatrix& m);

/// Eigenvalues (ascending) of the Hermitian part of m.
Eigen::VectorXd hermitian_eigenvalues(const CMatrix& m);

/// Rotates v so its first coordinate with modulus above tol is real and positive.
CVector apply_phase_convention(CVector v, double tol = 1e-12);

/// |<u|v>| >= 1 - tol for unit vectors u, v.
bool equal_up_to_phase(const CVector& u, const CVector& v, double tol);

CMatrix projector(const CVector& v);

} // namespace epiq
