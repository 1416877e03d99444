#pragma once

// Dense complex matrices on k qubits and the density-operator wrapper.
//
// Basis convention: index bit (k - q) holds qubit q (1-based), i.e. qubit 1
// is the most significant bit. All kernels below follow it.

#include <complex>
#include <string>

#include <Eigen/Dense>

namespace swapschur {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using Matrix4 = Eigen::Matrix4cd;

constexpr double kHermitianTol = 1e-12;
constexpr double kPositivityTol = -1e-10;

inline std::size_t qubit_dim(int k) { return std::size_t{1} << k; }

/// Hermitian PSD operator on k qubits, either trace one ("normalized") or an
/// unnormalized branch of a channel output.
class DensityOperator {
 public:
  DensityOperator() : DensityOperator(0, Matrix::Ones(1, 1)) {}

  /// Throws std::invalid_argument when the matrix is not 2^k x 2^k.
  DensityOperator(int qubits, Matrix matrix, bool normalized = true);

  static DensityOperator zero(int qubits);
  static DensityOperator maximally_mixed(int qubits);
  static DensityOperator basis_state(int qubits, std::size_t index);
  static DensityOperator pure(const Vector& psi);

  int qubits() const { return qubits_; }
  std::size_t dim() const { return static_cast<std::size_t>(matrix_.rows()); }
  const Matrix& matrix() const { return matrix_; }
  bool normalized() const { return normalized_; }
  double trace() const { return matrix_.trace().real(); }

  /// Copy rescaled to unit trace. Throws std::domain_error on zero trace.
  DensityOperator normalized_copy() const;

  /// Replace the matrix by (A + A^dagger)/2.
  void hermitize();

  /// Empty string when the invariants hold, otherwise a description of the
  /// first violation.
  std::string validate() const;

 private:
  int qubits_;
  Matrix matrix_;
  bool normalized_;
};

Matrix hermitian_part(const Matrix& a);
Matrix kron(const Matrix& a, const Matrix& b);

/// Sum of absolute eigenvalues of a Hermitian matrix.
double trace_norm(const Matrix& hermitian);

/// D(a,b) = 1/2 ||a - b||_1. Throws std::invalid_argument on size mismatch.
double trace_distance(const Matrix& a, const Matrix& b);
double trace_distance(const DensityOperator& a, const DensityOperator& b);

/// (|01> - |10>)/sqrt(2).
Vector singlet_vector();

/// xi^{(x) count} as a 4^count-dimensional density matrix (1x1 for count 0).
Matrix singlet_power(int count);

/// Partial trace over every qubit except `keep` (1-based) of a k-qubit matrix.
Eigen::Matrix2cd single_qubit_marginal(const Matrix& m, int k, int keep);

/// Partial trace over the last `traced` qubits.
Matrix trace_out_last(const Matrix& m, int k, int traced);

/// Tr(A B) for square matrices of equal size.
Complex trace_product(const Matrix& a, const Matrix& b);

}  // namespace swapschur
