#include <algorithm>
#include <cmath>
#include <string>

#include "swapschur/rep.hpp"
#include "swapschur/sim.hpp"

namespace swapschur::sim {

namespace {

/// Columns |j,m> for m = -j..j (ascending) on 2j qubits.
Matrix dicke_basis(HalfSpin j) {
  const auto d = static_cast<Eigen::Index>(qubit_dim(j.twice()));
  Matrix basis(d, j.dimension());
  for (int c = 0; c < j.dimension(); ++c) basis.col(c) = dicke_dense(j, -j.twice() + 2 * c);
  return basis;
}

Matrix singlet_vector_power(int count) {
  Matrix v = Matrix::Ones(1, 1);
  const Vector s = singlet_vector();
  for (int i = 0; i < count; ++i) v = kron(v, s);
  return v;
}

}  // namespace

Vector dicke_dense(HalfSpin j, int two_m) {
  const auto dv = dicke(j, two_m);
  Vector v = Vector::Zero(static_cast<Eigen::Index>(qubit_dim(j.twice())));
  for (const auto& [index, amp] : dv.amplitudes) v(static_cast<Eigen::Index>(index)) = amp;
  return v;
}

Matrix symmetric_projector(int q) {
  const Matrix basis = dicke_basis(HalfSpin::from_twice(q));
  return basis * basis.adjoint();
}

const SchurSector& SchurOutput::sector(HalfSpin j) const {
  for (const auto& s : sectors) {
    if (s.j == j) return s;
  }
  throw std::out_of_range("SchurOutput: no sector j = " + j.str());
}

SchurOutput schur_channel(const DensityOperator& sigma, double pi_tol) {
  const int n = sigma.qubits();
  if (n > kMaxTrajectoryQubits) {
    throw std::invalid_argument("schur_channel: too many qubits for dense simulation");
  }
  if (permutation_defect(sigma.matrix(), n) > pi_tol) {
    throw NotPermutationInvariant(trace_norm(sigma.matrix() - twirl(sigma).matrix()), pi_tol);
  }
  SchurOutput out;
  out.n = n;
  for (const auto j : spins_for(n)) {
    const int singlets = (n - j.twice()) / 2;
    const Matrix sym = dicke_basis(j);
    // Kraus vectors |j,m> (x) |xi>^{(x) singlets}, one column per m.
    const Matrix embedded = kron(sym, singlet_vector_power(singlets));
    const Matrix gram = embedded.adjoint() * sigma.matrix() * embedded;
    const double mult = multiplicity(n, j).convert_to<double>();
    DensityOperator block(j.twice(), mult * sym * gram * sym.adjoint(), false);
    block.hermitize();
    out.sectors.push_back({j, std::move(block)});
  }
  return out;
}

DensityOperator schur_decode(const SchurOutput& out, int qubits) {
  if (qubits < 0 || qubits > out.n || (out.n - qubits) % 2 != 0) {
    throw std::invalid_argument("schur_decode: incompatible qubit count");
  }
  const auto d = static_cast<Eigen::Index>(qubit_dim(qubits));
  Matrix total = Matrix::Zero(d, d);
  for (const auto& s : out.sectors) {
    if (s.j.twice() > qubits) {
      if (s.weight() > 1e-12) {
        throw std::invalid_argument("schur_decode: weight in sector j = " + s.j.str() +
                                    " cannot fit in " + std::to_string(qubits) + " qubits");
      }
      continue;
    }
    total += kron(s.block.matrix(), singlet_power((qubits - s.j.twice()) / 2));
  }
  return twirl(DensityOperator(qubits, std::move(total), false));
}

RegisterState encode(const ProtocolEnsemble& ens) {
  RegisterState state;
  state.n = ens.n;
  state.blocks.resize(ens.branches.size());
  for (std::size_t k = 0; k < ens.branches.size(); ++k) {
    state.blocks[k] = kron(ens.branches[k].matrix(), singlet_power(static_cast<int>(k)));
  }
  return state;
}

RegisterState encode(const SchurOutput& out) {
  RegisterState state;
  state.n = out.n;
  state.blocks.resize(out.n / 2 + 1);
  for (const auto& s : out.sectors) {
    const int k = (out.n - s.j.twice()) / 2;
    state.blocks[k] = kron(s.block.matrix(), singlet_power(k));
  }
  return state;
}

double trace_distance(const RegisterState& a, const RegisterState& b) {
  if (a.n != b.n) throw std::invalid_argument("trace_distance: qubit counts differ");
  const std::size_t count = std::max(a.blocks.size(), b.blocks.size());
  double total = 0.0;
  for (std::size_t k = 0; k < count; ++k) {
    const bool has_a = k < a.blocks.size() && a.blocks[k];
    const bool has_b = k < b.blocks.size() && b.blocks[k];
    if (has_a && has_b) {
      total += swapschur::trace_distance(*a.blocks[k], *b.blocks[k]);
    } else if (has_a) {
      total += 0.5 * trace_norm(*a.blocks[k]);
    } else if (has_b) {
      total += 0.5 * trace_norm(*b.blocks[k]);
    }
  }
  return total;
}

DensityOperator random_symmetric_state(int q, Rng& rng) {
  const int dim = q + 1;
  Matrix g(dim, dim);
  for (int r = 0; r < dim; ++r) {
    for (int c = 0; c < dim; ++c) g(r, c) = Complex(rng.normal(), rng.normal());
  }
  Matrix a = g * g.adjoint();
  a /= a.trace().real();
  const Matrix basis = dicke_basis(HalfSpin::from_twice(q));
  DensityOperator out(q, basis * a * basis.adjoint());
  out.hermitize();
  return out;
}

DensityOperator random_sector_state(int n, HalfSpin j, Rng& rng) {
  require_valid(n, j);
  const auto sym = random_symmetric_state(j.twice(), rng);
  return reconstruct(sym, (n - j.twice()) / 2);
}

DensityOperator random_pi_state(int n, Rng& rng) {
  const auto spins = spins_for(n);
  std::vector<double> w(spins.size());
  double total = 0.0;
  for (auto& x : w) total += (x = 0.05 + rng.uniform());
  const auto d = static_cast<Eigen::Index>(qubit_dim(n));
  Matrix m = Matrix::Zero(d, d);
  for (std::size_t i = 0; i < spins.size(); ++i) {
    m += (w[i] / total) * random_sector_state(n, spins[i], rng).matrix();
  }
  DensityOperator out(n, std::move(m));
  out.hermitize();
  return out;
}

DensityOperator depolarized_product(int n, double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("depolarized_product: p outside [0,1]");
  Matrix rho = Matrix::Zero(2, 2);
  rho(0, 0) = 1.0 - p / 2.0;
  rho(1, 1) = p / 2.0;
  Matrix m = Matrix::Ones(1, 1);
  for (int i = 0; i < n; ++i) m = kron(m, rho);
  return DensityOperator(n, std::move(m));
}

}  // namespace swapschur::sim
