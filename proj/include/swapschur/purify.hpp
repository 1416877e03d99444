#pragma once

// Purification of n copies of rho = (1-p)|0><0| + p I/2 by random SWAP tests.
//
// The target is |0>; by SU(2) covariance every other pure target gives the
// same fidelities.

#include <cstdint>
#include <vector>

#include "swapschur/half_spin.hpp"
#include "swapschur/markov.hpp"
#include "swapschur/rng.hpp"

namespace swapschur::purify {

struct NoiseModel {
  double p = 0.0;

  /// Throws std::invalid_argument for p outside [0, 1].
  explicit NoiseModel(double depolarizing);

  /// <0|rho|0> = 1 - p/2.
  double single_copy_fidelity() const { return 1.0 - p / 2.0; }
};

struct SectorStat {
  HalfSpin j;
  double log_weight = 0.0;  // ln p_j; -inf when p_j = 0
  double weight = 0.0;      // p_j
  double fidelity = 0.5;    // f_j
};

struct SectorStats {
  int n = 0;
  double p = 0.0;
  std::vector<SectorStat> rows;  // every j of n qubits, ascending

  const SectorStat& at(HalfSpin j) const;
  double total_weight() const;
  /// sum_j 2j p_j (f_j - 1/2), which equals <J_z> = n(1-p)/2.
  double jz_sum() const;
};

/// Sector probabilities p_j of rho^{(x)n} and the fidelities f_j of one
/// qubit of the normalized sector state, all in the log domain.
SectorStats sector_stats(int n, const NoiseModel& noise);

/// sum_j p_j f_j.
double f_opt(int n, const NoiseModel& noise);
/// 1 - p / (2n(1-p)^2).
double f_opt_asymptotic(int n, const NoiseModel& noise);

struct CurveRow {
  std::int64_t steps = 0;
  double fidelity = 0.0;
  double eps = 0.0;        // max_j Pr(j' != j; T)
  markov::Tagged exp_gap;  // n exp(-T/2n)
  double eps_gap = 0.0;    // eps (f_opt - 1/2)
};

struct PurificationCurve {
  int n = 0;
  double p = 0.0;
  double f_opt = 0.0;
  double marker = 0.0;  // n ln n
  std::vector<CurveRow> rows;  // T = 0..tmax
};

/// f(n,T) = 1/2 + sum_j p_j (f_j - 1/2) sum_{j'} Pr(j'|j,T) j/j' for
/// T = 0..tmax, with both gap bounds.
PurificationCurve fidelity_curve(int n, const NoiseModel& noise, std::int64_t tmax);

struct GapBounds {
  markov::Tagged exp_bound;
  double eps_bound = 0.0;
  double gap = 0.0;  // f_opt - f(n,T)
};

GapBounds fidelity_gap_bounds(int n, const NoiseModel& noise, std::int64_t steps);

// ---------------------------------------------------------------------------
// Comparison with the streaming-SWAP baseline

struct ChildsRow {
  double p = 0.0;
  double eps = 0.0;
  double n_ours = 0.0;            // p / (2 eps (1-p)^2)
  std::int64_t swap_tests = 0;    // ceil(2 n ln(2n/eps)) at n = n_ours
  double n_baseline = 0.0;        // 3630 / eps * (1-p)^(-8 ln 2)
};

/// Throws std::invalid_argument unless 0 < p < 1 and 0 < eps < 1.
ChildsRow childs_comparison(const NoiseModel& noise, double eps);

struct SlopeFit {
  double ours = 0.0;
  double baseline = 0.0;
};

/// Least-squares slopes of ln n against ln(1-p) over the given rows.
SlopeFit fit_childs_slopes(const std::vector<ChildsRow>& rows);

/// Default p grid for the comparison: 0.9, 0.925, ..., 0.99.
std::vector<double> default_childs_grid();

// ---------------------------------------------------------------------------
// Monte Carlo

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::int64_t trials = 0;
};

/// Average over seeded trajectories of <0|.|0> on one uniformly chosen
/// surviving qubit (1/2 if none survive). Requires n <= 8.
McEstimate mc_fidelity(int n, const NoiseModel& noise, std::int64_t steps, std::int64_t trials,
                       Rng& rng);

}  // namespace swapschur::purify
