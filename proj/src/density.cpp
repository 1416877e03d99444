#include "swapschur/density.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace swapschur {

DensityOperator::DensityOperator(int qubits, Matrix matrix, bool normalized)
    : qubits_(qubits), matrix_(std::move(matrix)), normalized_(normalized) {
  if (qubits < 0 || qubits > 14) {
    throw std::invalid_argument("DensityOperator: qubit count out of range");
  }
  const auto d = static_cast<Eigen::Index>(qubit_dim(qubits));
  if (matrix_.rows() != d || matrix_.cols() != d) {
    throw std::invalid_argument("DensityOperator: expected a " + std::to_string(d) + "x" +
                                std::to_string(d) + " matrix");
  }
}

DensityOperator DensityOperator::zero(int qubits) {
  const auto d = static_cast<Eigen::Index>(qubit_dim(qubits));
  return DensityOperator(qubits, Matrix::Zero(d, d), false);
}

DensityOperator DensityOperator::maximally_mixed(int qubits) {
  const auto d = static_cast<Eigen::Index>(qubit_dim(qubits));
  return DensityOperator(qubits, Matrix::Identity(d, d) / static_cast<double>(d));
}

DensityOperator DensityOperator::basis_state(int qubits, std::size_t index) {
  auto rho = zero(qubits);
  if (index >= rho.dim()) throw std::invalid_argument("basis_state: index out of range");
  Matrix m = rho.matrix();
  m(index, index) = 1.0;
  return DensityOperator(qubits, std::move(m));
}

DensityOperator DensityOperator::pure(const Vector& psi) {
  int k = 0;
  while (qubit_dim(k) < static_cast<std::size_t>(psi.size())) ++k;
  const double norm = psi.norm();
  if (norm == 0.0) throw std::invalid_argument("pure: zero vector");
  const Vector u = psi / norm;
  return DensityOperator(k, u * u.adjoint());
}

DensityOperator DensityOperator::normalized_copy() const {
  const double t = trace();
  if (!(t > 0.0)) throw std::domain_error("normalized_copy: non-positive trace");
  return DensityOperator(qubits_, matrix_ / t, true);
}

void DensityOperator::hermitize() { matrix_ = hermitian_part(matrix_); }

std::string DensityOperator::validate() const {
  std::ostringstream why;
  const double herm = (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff();
  if (herm > kHermitianTol) {
    why << "not Hermitian (max |A - A^dagger| = " << herm << ")";
    return why.str();
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(matrix_), Eigen::EigenvaluesOnly);
  const double lowest = es.eigenvalues().minCoeff();
  if (lowest < kPositivityTol) {
    why << "negative eigenvalue " << lowest;
    return why.str();
  }
  const double t = trace();
  if (normalized_ && std::abs(t - 1.0) > 1e-12) {
    why << "trace " << t << " != 1";
    return why.str();
  }
  if (!normalized_ && (t < -1e-12 || t > 1.0 + 1e-10)) {
    why << "branch trace " << t << " outside [0, 1]";
    return why.str();
  }
  return {};
}

Matrix hermitian_part(const Matrix& a) { return 0.5 * (a + a.adjoint()); }

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

double trace_norm(const Matrix& hermitian) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(hermitian), Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().sum();
}

double trace_distance(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument("trace_distance: dimension mismatch");
  }
  return 0.5 * trace_norm(a - b);
}

double trace_distance(const DensityOperator& a, const DensityOperator& b) {
  return trace_distance(a.matrix(), b.matrix());
}

Vector singlet_vector() {
  Vector v = Vector::Zero(4);
  v(1) = 1.0 / std::sqrt(2.0);
  v(2) = -1.0 / std::sqrt(2.0);
  return v;
}

Matrix singlet_power(int count) {
  const Vector s = singlet_vector();
  const Matrix xi = s * s.adjoint();
  Matrix out = Matrix::Ones(1, 1);
  for (int i = 0; i < count; ++i) out = kron(out, xi);
  return out;
}

Eigen::Matrix2cd single_qubit_marginal(const Matrix& m, int k, int keep) {
  if (keep < 1 || keep > k) throw std::invalid_argument("single_qubit_marginal: bad qubit");
  const std::size_t bit = std::size_t{1} << (k - keep);
  Eigen::Matrix2cd out = Eigen::Matrix2cd::Zero();
  const std::size_t d = qubit_dim(k);
  for (std::size_t x = 0; x < d; ++x) {
    if (x & bit) continue;
    out(0, 0) += m(x, x);
    out(0, 1) += m(x, x | bit);
    out(1, 0) += m(x | bit, x);
    out(1, 1) += m(x | bit, x | bit);
  }
  return out;
}

Matrix trace_out_last(const Matrix& m, int k, int traced) {
  if (traced < 0 || traced > k) throw std::invalid_argument("trace_out_last: bad count");
  const auto keep_dim = static_cast<Eigen::Index>(qubit_dim(k - traced));
  const auto env = static_cast<Eigen::Index>(qubit_dim(traced));
  Matrix out = Matrix::Zero(keep_dim, keep_dim);
  for (Eigen::Index e = 0; e < env; ++e) {
    for (Eigen::Index i = 0; i < keep_dim; ++i) {
      for (Eigen::Index j = 0; j < keep_dim; ++j) out(i, j) += m(i * env + e, j * env + e);
    }
  }
  return out;
}

Complex trace_product(const Matrix& a, const Matrix& b) {
  return (a.transpose().cwiseProduct(b)).sum();
}

}  // namespace swapschur
