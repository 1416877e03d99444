#pragma once

// Exact density-operator simulation of the random-SWAP-test protocol and of
// the Schur channel, for small qubit counts.

#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "swapschur/density.hpp"
#include "swapschur/half_spin.hpp"
#include "swapschur/rng.hpp"

namespace swapschur::sim {

/// Largest qubit count accepted by the exact ensemble evolution.
constexpr int kMaxExactQubits = 8;
/// Largest qubit count accepted by trajectory sampling and twirling.
constexpr int kMaxTrajectoryQubits = 10;

// ---------------------------------------------------------------------------
// Operators

/// Rank-one projector onto the singlet of qubits (r, s), 1 <= r < s <= k,
/// tensored with the identity elsewhere.
Matrix singlet_projector(int k, int r, int s);

/// G acting on qubits (r, s) of a k-qubit matrix from the left: G_{rs} M.
/// G is written in the basis |b_r b_s> = 00, 01, 10, 11.
Matrix apply_pair_left(const Matrix& m, int k, int r, int s, const Matrix4& g);
/// M G_{rs}.
Matrix apply_pair_right(const Matrix& m, int k, int r, int s, const Matrix4& g);

/// (I - xi_{rs}) M (I - xi_{rs}).
Matrix triplet_sandwich(const Matrix& m, int k, int r, int s);

/// <xi|_{rs} M |xi>_{rs}: a (k-2)-qubit operator on the remaining qubits,
/// kept in their original relative order.
Matrix singlet_contract(const Matrix& m, int k, int r, int s);

struct AngularMomentum {
  Matrix jx, jy, jz, j2;
};

/// Total spin operators J_w = sum_i sigma_w^(i)/2 on k qubits, and J².
AngularMomentum angular_momentum_ops(int k);

/// J² built directly as (3k/4 - C(k,2)/2) I + sum_{r<s} SWAP_{rs}; it is real.
Eigen::MatrixXd casimir_matrix(int k);

/// Spectral projector of J² at eigenvalue j(j+1).
/// Throws std::invalid_argument if j is not a sector of k qubits.
Matrix sector_projector(int k, HalfSpin j);

/// P M P^dagger for the qubit permutation taking qubit i to position perm[i]
/// (0-based).
Matrix permute_qubits(const Matrix& m, int k, std::span<const int> perm);

/// Largest entry of |SWAP_{i,i+1} M SWAP_{i,i+1} - M| over adjacent pairs.
/// Zero exactly when M is permutation invariant.
double permutation_defect(const Matrix& m, int k);

/// Uniform average over all k! qubit permutations.
/// Throws std::invalid_argument for k > kMaxTrajectoryQubits.
DensityOperator twirl(const DensityOperator& sigma);

// ---------------------------------------------------------------------------
// Protocol

/// Thrown when exact-mode evolution receives a state that is not permutation
/// invariant.
class NotPermutationInvariant : public std::invalid_argument {
 public:
  NotPermutationInvariant(double distance_to_twirl, double tolerance);
  /// ||sigma - twirl(sigma)||_1 of the rejected input.
  double distance_to_twirl() const { return distance_; }

 private:
  double distance_;
};

/// Output of T rounds of random SWAP tests, indexed by the number of
/// detected singlets k. Branch k holds the unnormalized state omega_{A_k} of
/// the n - 2k undetected qubits; the register reads j' = n/2 - k.
struct ProtocolEnsemble {
  int n = 0;
  int steps_applied = 0;
  std::vector<DensityOperator> branches;

  int max_singlets() const { return n / 2; }
  double weight(int k) const { return branches.at(k).trace(); }
  double total_trace() const;
  HalfSpin register_value(int k) const { return HalfSpin::from_twice(n - 2 * k); }
};

/// Ensemble with the whole input in branch k = 0 (no tests yet).
ProtocolEnsemble initial_ensemble(const DensityOperator& input);

/// One round of the exact averaged SWAP-test channel on every branch.
ProtocolEnsemble swap_test_step(const ProtocolEnsemble& ens);

/// T-fold composition of swap_test_step on a permutation-invariant input.
/// Throws NotPermutationInvariant when permutation_defect exceeds `pi_tol`.
ProtocolEnsemble run_protocol(const DensityOperator& input, int steps, double pi_tol = 1e-10);

/// Calls `observe` after every step (including T = 0) of run_protocol.
void run_protocol(const DensityOperator& input, int steps,
                  const std::function<void(const ProtocolEnsemble&)>& observe,
                  double pi_tol = 1e-10);

/// Global n-qubit state after discarding the register:
/// sum_k omega_{A_k} (x) xi^{(x) k}.
DensityOperator forget_register(const ProtocolEnsemble& ens);

/// Decoder: twirl(omega (x) xi^{(x) singlets}) on omega.qubits() + 2 singlets.
DensityOperator reconstruct(const DensityOperator& omega, int singlets);

// ---------------------------------------------------------------------------
// Schur channel

/// Dicke state |j,m> as a dense vector on 2j qubits.
Vector dicke_dense(HalfSpin j, int two_m);

/// Projector onto the totally symmetric subspace of q qubits.
Matrix symmetric_projector(int q);

struct SchurSector {
  HalfSpin j;
  /// Unnormalized sigma~_j on 2j qubits, supported on the symmetric subspace.
  DensityOperator block;

  double weight() const { return block.trace(); }
  DensityOperator state() const { return block.normalized_copy(); }
};

struct SchurOutput {
  int n = 0;
  std::vector<SchurSector> sectors;  // every j of n qubits, ascending

  const SchurSector& sector(HalfSpin j) const;
};

/// Schur channel on a permutation-invariant n-qubit state.
/// Throws NotPermutationInvariant for non-PI input.
SchurOutput schur_channel(const DensityOperator& sigma, double pi_tol = 1e-10);

/// Left inverse of the decoder: twirl(sum_j sigma~_j (x) xi^{(x)(m/2 - j)}) on
/// m qubits, after discarding the register and all but m qubits' singlets.
DensityOperator schur_decode(const SchurOutput& out, int qubits);

/// Register-indexed global states: block for register value j' holds
/// A (2j' qubits) (x) xi^{(x)(n/2 - j')}. Missing entries are zero.
struct RegisterState {
  int n = 0;
  std::vector<std::optional<Matrix>> blocks;  // indexed by n/2 - j'
};

RegisterState encode(const ProtocolEnsemble& ens);
RegisterState encode(const SchurOutput& out);

/// Sum over register values of the block trace distances.
double trace_distance(const RegisterState& a, const RegisterState& b);

// ---------------------------------------------------------------------------
// Random test inputs

/// Random density matrix on the symmetric subspace of q qubits.
DensityOperator random_symmetric_state(int q, Rng& rng);

/// Random PI state of n qubits supported in sector j:
/// twirl(sigma~ (x) xi^{(x)(n/2 - j)}) with random symmetric sigma~.
DensityOperator random_sector_state(int n, HalfSpin j, Rng& rng);

/// Random PI state mixing every sector with random weights.
DensityOperator random_pi_state(int n, Rng& rng);

/// rho^{(x) n} for rho = (1-p)|0><0| + p I/2.
DensityOperator depolarized_product(int n, double p);

// ---------------------------------------------------------------------------
// Trajectories

struct TrajectoryStep {
  int r = 0;  // 1-based positions among the qubits present at this step
  int s = 0;
  bool detected = false;
  double probability = 0.0;  // probability of the realized outcome
};

enum class TrajectoryStatus { completed, underflow };

struct Trajectory {
  std::vector<TrajectoryStep> log;
  int singlets = 0;
  DensityOperator state;  // normalized state of the remaining qubits
  double log_weight = 0.0;
  TrajectoryStatus status = TrajectoryStatus::completed;

  double weight() const;
};

using StepObserver = std::function<void(const TrajectoryStep&, const DensityOperator&)>;

/// One Monte-Carlo history of T SWAP tests. Any input state is accepted; the
/// trajectory tracks qubit identities explicitly. Steps with fewer than two
/// remaining qubits are no-ops and are not logged.
Trajectory sample_trajectory(const DensityOperator& input, int steps, Rng& rng,
                             const StepObserver& observe = {});

}  // namespace swapschur::sim
