#include <sstream>
#include <string>

#include "swapschur/sim.hpp"

namespace swapschur::sim {

namespace {

std::string pi_message(double distance, double tolerance) {
  std::ostringstream os;
  os << "input is not permutation invariant (||sigma - P(sigma)||_1 = " << distance
     << ", tolerance " << tolerance << "); twirl it first";
  return os.str();
}

void require_pi(const DensityOperator& sigma, double tol) {
  if (permutation_defect(sigma.matrix(), sigma.qubits()) <= tol) return;
  const double distance = trace_norm(sigma.matrix() - twirl(sigma).matrix());
  throw NotPermutationInvariant(distance, tol);
}

}  // namespace

NotPermutationInvariant::NotPermutationInvariant(double distance_to_twirl, double tolerance)
    : std::invalid_argument(pi_message(distance_to_twirl, tolerance)),
      distance_(distance_to_twirl) {}

double ProtocolEnsemble::total_trace() const {
  double t = 0.0;
  for (const auto& b : branches) t += b.trace();
  return t;
}

ProtocolEnsemble initial_ensemble(const DensityOperator& input) {
  ProtocolEnsemble ens;
  ens.n = input.qubits();
  ens.steps_applied = 0;
  for (int k = 0; k <= ens.n / 2; ++k) {
    ens.branches.push_back(k == 0 ? DensityOperator(ens.n, input.matrix(), false)
                                  : DensityOperator::zero(ens.n - 2 * k));
  }
  return ens;
}

ProtocolEnsemble swap_test_step(const ProtocolEnsemble& ens) {
  ProtocolEnsemble out;
  out.n = ens.n;
  out.steps_applied = ens.steps_applied + 1;
  std::vector<Matrix> acc;
  acc.reserve(ens.branches.size());
  for (const auto& b : ens.branches) {
    acc.push_back(Matrix::Zero(b.matrix().rows(), b.matrix().cols()));
  }
  for (std::size_t k = 0; k < ens.branches.size(); ++k) {
    const auto& omega = ens.branches[k];
    const int q = omega.qubits();
    if (q < 2) {
      acc[k] += omega.matrix();
      continue;
    }
    if (omega.matrix().cwiseAbs().maxCoeff() == 0.0) continue;
    const double c2 = 2.0 / (q * (q - 1.0));  // 1 / C(q, 2)
    for (int r = 1; r <= q; ++r) {
      for (int s = r + 1; s <= q; ++s) {
        acc[k] += c2 * triplet_sandwich(omega.matrix(), q, r, s);
        acc[k + 1] += c2 * singlet_contract(omega.matrix(), q, r, s);
      }
    }
  }
  for (std::size_t k = 0; k < acc.size(); ++k) {
    DensityOperator branch(ens.branches[k].qubits(), std::move(acc[k]), false);
    branch.hermitize();
    out.branches.push_back(std::move(branch));
  }
  return out;
}

void run_protocol(const DensityOperator& input, int steps,
                  const std::function<void(const ProtocolEnsemble&)>& observe, double pi_tol) {
  if (steps < 0) throw std::invalid_argument("run_protocol: negative step count");
  if (input.qubits() > kMaxExactQubits) {
    throw std::invalid_argument("run_protocol: exact mode supports at most " +
                                std::to_string(kMaxExactQubits) + " qubits");
  }
  require_pi(input, pi_tol);
  auto ens = initial_ensemble(input);
  if (observe) observe(ens);
  for (int t = 0; t < steps; ++t) {
    ens = swap_test_step(ens);
    if (observe) observe(ens);
  }
}

ProtocolEnsemble run_protocol(const DensityOperator& input, int steps, double pi_tol) {
  ProtocolEnsemble last;
  run_protocol(input, steps, [&](const ProtocolEnsemble& e) { last = e; }, pi_tol);
  return last;
}

DensityOperator forget_register(const ProtocolEnsemble& ens) {
  const auto d = static_cast<Eigen::Index>(qubit_dim(ens.n));
  Matrix total = Matrix::Zero(d, d);
  for (std::size_t k = 0; k < ens.branches.size(); ++k) {
    total += kron(ens.branches[k].matrix(), singlet_power(static_cast<int>(k)));
  }
  return DensityOperator(ens.n, std::move(total), false);
}

DensityOperator reconstruct(const DensityOperator& omega, int singlets) {
  if (singlets < 0) throw std::invalid_argument("reconstruct: negative singlet count");
  const int n = omega.qubits() + 2 * singlets;
  DensityOperator padded(n, kron(omega.matrix(), singlet_power(singlets)), omega.normalized());
  return twirl(padded);
}

}  // namespace swapschur::sim
