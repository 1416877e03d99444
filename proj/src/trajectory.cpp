#include <algorithm>
#include <cmath>

#include "swapschur/sim.hpp"

namespace swapschur::sim {

namespace {

constexpr double kUnderflow = 1e-300;

}  // namespace

double Trajectory::weight() const { return std::exp(log_weight); }

Trajectory sample_trajectory(const DensityOperator& input, int steps, Rng& rng,
                             const StepObserver& observe) {
  if (steps < 0) throw std::invalid_argument("sample_trajectory: negative step count");
  if (input.qubits() > kMaxTrajectoryQubits) {
    throw std::invalid_argument("sample_trajectory: at most " +
                                std::to_string(kMaxTrajectoryQubits) + " qubits");
  }
  Trajectory traj;
  traj.state = input.normalized_copy();
  for (int t = 0; t < steps; ++t) {
    const int q = traj.state.qubits();
    if (q < 2) break;
    // Uniform unordered pair: first pick a, then b from the other q-1.
    int a = static_cast<int>(rng.below(static_cast<std::uint64_t>(q))) + 1;
    int b = static_cast<int>(rng.below(static_cast<std::uint64_t>(q - 1))) + 1;
    if (b >= a) ++b;
    const int r = std::min(a, b);
    const int s = std::max(a, b);

    Matrix contracted = singlet_contract(traj.state.matrix(), q, r, s);
    const double p_detect = std::clamp(contracted.trace().real(), 0.0, 1.0);
    TrajectoryStep step{r, s, rng.bernoulli(p_detect), 0.0};
    step.probability = step.detected ? p_detect : 1.0 - p_detect;
    if (step.probability < kUnderflow) {
      traj.status = TrajectoryStatus::underflow;
      traj.log.push_back(step);
      return traj;
    }
    Matrix next = step.detected ? std::move(contracted)
                                : triplet_sandwich(traj.state.matrix(), q, r, s);
    next /= step.probability;
    const int q_next = step.detected ? q - 2 : q;
    traj.state = DensityOperator(q_next, std::move(next));
    traj.state.hermitize();
    traj.log_weight += std::log(step.probability);
    if (step.detected) ++traj.singlets;
    traj.log.push_back(step);
    if (observe) observe(step, traj.state);
  }
  return traj;
}

}  // namespace swapschur::sim
