#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "swapschur/sim.hpp"

namespace swapschur::sim {

namespace {

void require_pair(int k, int r, int s) {
  if (r == s) throw std::invalid_argument("pair positions must differ");
  if (r < 1 || s < 1 || r > k || s > k) {
    throw std::invalid_argument("pair (" + std::to_string(r) + "," + std::to_string(s) +
                                ") outside 1.." + std::to_string(k));
  }
}

std::size_t bit_of(int k, int q) { return std::size_t{1} << (k - q); }

struct PairIndices {
  std::vector<std::size_t> bases;  // indices with both pair bits clear
  std::size_t br, bs;

  std::array<std::size_t, 4> group(std::size_t x) const {
    return {x, x | bs, x | br, x | br | bs};
  }
};

PairIndices pair_indices(int k, int r, int s) {
  PairIndices p;
  p.br = bit_of(k, r);
  p.bs = bit_of(k, s);
  const std::size_t d = qubit_dim(k);
  p.bases.reserve(d / 4);
  for (std::size_t x = 0; x < d; ++x) {
    if (!(x & p.br) && !(x & p.bs)) p.bases.push_back(x);
  }
  return p;
}

std::size_t swap_bits(std::size_t x, std::size_t ba, std::size_t bb) {
  const bool a = x & ba;
  const bool b = x & bb;
  if (a == b) return x;
  return x ^ ba ^ bb;
}

Matrix4 singlet_block() {
  Matrix4 g = Matrix4::Zero();
  g(1, 1) = 0.5;
  g(1, 2) = -0.5;
  g(2, 1) = -0.5;
  g(2, 2) = 0.5;
  return g;
}

}  // namespace

Matrix apply_pair_left(const Matrix& m, int k, int r, int s, const Matrix4& g) {
  require_pair(k, r, s);
  const auto p = pair_indices(k, r, s);
  Matrix out(m.rows(), m.cols());
  for (const auto x : p.bases) {
    const auto idx = p.group(x);
    for (int a = 0; a < 4; ++a) {
      out.row(idx[a]) = g(a, 0) * m.row(idx[0]) + g(a, 1) * m.row(idx[1]) +
                        g(a, 2) * m.row(idx[2]) + g(a, 3) * m.row(idx[3]);
    }
  }
  return out;
}

Matrix apply_pair_right(const Matrix& m, int k, int r, int s, const Matrix4& g) {
  require_pair(k, r, s);
  const auto p = pair_indices(k, r, s);
  Matrix out(m.rows(), m.cols());
  for (const auto x : p.bases) {
    const auto idx = p.group(x);
    for (int a = 0; a < 4; ++a) {
      out.col(idx[a]) = g(0, a) * m.col(idx[0]) + g(1, a) * m.col(idx[1]) +
                        g(2, a) * m.col(idx[2]) + g(3, a) * m.col(idx[3]);
    }
  }
  return out;
}

Matrix singlet_projector(int k, int r, int s) {
  const auto d = static_cast<Eigen::Index>(qubit_dim(k));
  return apply_pair_left(Matrix::Identity(d, d), k, r, s, singlet_block());
}

Matrix triplet_sandwich(const Matrix& m, int k, int r, int s) {
  const Matrix4 f = Matrix4::Identity() - singlet_block();
  return apply_pair_right(apply_pair_left(m, k, r, s, f), k, r, s, f);
}

Matrix singlet_contract(const Matrix& m, int k, int r, int s) {
  require_pair(k, r, s);
  if (r > s) std::swap(r, s);
  const int rest = k - 2;
  const std::size_t br = bit_of(k, r);
  const std::size_t bs = bit_of(k, s);
  // Full index of each reduced basis state, qubit order preserved.
  std::vector<std::size_t> full(qubit_dim(rest));
  for (std::size_t xr = 0; xr < full.size(); ++xr) {
    std::size_t x = 0;
    int src = 1;  // position within the reduced register
    for (int q = 1; q <= k; ++q) {
      if (q == r || q == s) continue;
      if (xr & bit_of(rest, src)) x |= bit_of(k, q);
      ++src;
    }
    full[xr] = x;
  }
  const auto d = static_cast<Eigen::Index>(full.size());
  Matrix out(d, d);
  for (Eigen::Index j = 0; j < d; ++j) {
    const std::size_t y01 = full[j] | bs;
    const std::size_t y10 = full[j] | br;
    for (Eigen::Index i = 0; i < d; ++i) {
      const std::size_t x01 = full[i] | bs;
      const std::size_t x10 = full[i] | br;
      out(i, j) = 0.5 * (m(x01, y01) - m(x01, y10) - m(x10, y01) + m(x10, y10));
    }
  }
  return out;
}

Eigen::MatrixXd casimir_matrix(int k) {
  if (k < 0) throw std::invalid_argument("casimir_matrix: negative qubit count");
  const auto d = static_cast<Eigen::Index>(qubit_dim(k));
  const double shift = 0.75 * k - 0.25 * k * (k - 1);
  Eigen::MatrixXd j2 = shift * Eigen::MatrixXd::Identity(d, d);
  for (int r = 1; r <= k; ++r) {
    for (int s = r + 1; s <= k; ++s) {
      const std::size_t br = bit_of(k, r);
      const std::size_t bs = bit_of(k, s);
      for (Eigen::Index x = 0; x < d; ++x) {
        j2(static_cast<Eigen::Index>(swap_bits(x, br, bs)), x) += 1.0;
      }
    }
  }
  return j2;
}

AngularMomentum angular_momentum_ops(int k) {
  if (k < 1) throw std::invalid_argument("angular_momentum_ops: need at least one qubit");
  const auto d = static_cast<Eigen::Index>(qubit_dim(k));
  AngularMomentum ops;
  ops.jx = Matrix::Zero(d, d);
  ops.jy = Matrix::Zero(d, d);
  ops.jz = Matrix::Zero(d, d);
  const Complex i_unit(0.0, 1.0);
  for (int q = 1; q <= k; ++q) {
    const std::size_t b = bit_of(k, q);
    for (Eigen::Index x = 0; x < d; ++x) {
      const bool one = static_cast<std::size_t>(x) & b;
      const auto flipped = static_cast<Eigen::Index>(static_cast<std::size_t>(x) ^ b);
      ops.jx(flipped, x) += 0.5;
      // sigma_y |0> = i|1>, sigma_y |1> = -i|0>
      ops.jy(flipped, x) += one ? -0.5 * i_unit : 0.5 * i_unit;
      ops.jz(x, x) += one ? -0.5 : 0.5;
    }
  }
  ops.j2 = casimir_matrix(k).cast<Complex>();
  return ops;
}

Matrix sector_projector(int k, HalfSpin j) {
  if (!valid_for(k, j)) {
    throw std::invalid_argument("sector_projector: j = " + j.str() +
                                " is not in the spectrum of J² on " + std::to_string(k) +
                                " qubits");
  }
  if (k == 0) return Matrix::Ones(1, 1);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(casimir_matrix(k));
  const auto& vals = es.eigenvalues();
  const auto& vecs = es.eigenvectors();
  std::vector<Eigen::Index> cols;
  for (Eigen::Index i = 0; i < vals.size(); ++i) {
    // Distinct Casimir eigenvalues are at least 1 apart.
    if (std::abs(vals(i) - j.casimir()) < 0.25) cols.push_back(i);
  }
  Eigen::MatrixXd basis(vecs.rows(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t c = 0; c < cols.size(); ++c) basis.col(c) = vecs.col(cols[c]);
  return (basis * basis.transpose()).cast<Complex>();
}

Matrix permute_qubits(const Matrix& m, int k, std::span<const int> perm) {
  if (static_cast<int>(perm.size()) != k) {
    throw std::invalid_argument("permute_qubits: permutation size mismatch");
  }
  const std::size_t d = qubit_dim(k);
  std::vector<std::size_t> image(d);
  for (std::size_t x = 0; x < d; ++x) {
    std::size_t y = 0;
    for (int i = 0; i < k; ++i) {
      if (x & bit_of(k, i + 1)) y |= bit_of(k, perm[i] + 1);
    }
    image[x] = y;
  }
  Matrix out(m.rows(), m.cols());
  for (std::size_t c = 0; c < d; ++c) {
    for (std::size_t r = 0; r < d; ++r) out(image[r], image[c]) = m(r, c);
  }
  return out;
}

double permutation_defect(const Matrix& m, int k) {
  double worst = 0.0;
  const std::size_t d = qubit_dim(k);
  for (int q = 1; q < k; ++q) {
    const std::size_t ba = bit_of(k, q);
    const std::size_t bb = bit_of(k, q + 1);
    for (std::size_t c = 0; c < d; ++c) {
      const std::size_t sc = swap_bits(c, ba, bb);
      for (std::size_t r = 0; r < d; ++r) {
        worst = std::max(worst, std::abs(m(swap_bits(r, ba, bb), sc) - m(r, c)));
      }
    }
  }
  return worst;
}

DensityOperator twirl(const DensityOperator& sigma) {
  const int k = sigma.qubits();
  if (k > kMaxTrajectoryQubits) {
    throw std::invalid_argument("twirl: " + std::to_string(k) +
                                " qubits exceeds the exact-averaging limit of " +
                                std::to_string(kMaxTrajectoryQubits));
  }
  // S_m = {e, (1 m), ..., (m-1 m)} . S_{m-1}, so the uniform average factors
  // into k - 1 coset averages applied in sequence.
  const std::size_t d = qubit_dim(k);
  Matrix acc = sigma.matrix();
  Matrix next(acc.rows(), acc.cols());
  std::vector<std::size_t> image(d);
  for (int m = 2; m <= k; ++m) {
    next = acc;
    for (int i = 1; i < m; ++i) {
      const std::size_t ba = bit_of(k, i);
      const std::size_t bb = bit_of(k, m);
      for (std::size_t x = 0; x < d; ++x) image[x] = swap_bits(x, ba, bb);
      for (std::size_t c = 0; c < d; ++c) {
        for (std::size_t r = 0; r < d; ++r) next(image[r], image[c]) += acc(r, c);
      }
    }
    acc = next / static_cast<double>(m);
  }
  DensityOperator out(k, std::move(acc), sigma.normalized());
  out.hermitize();
  return out;
}

}  // namespace swapschur::sim
