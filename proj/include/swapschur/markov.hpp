#pragma once

// Singlet-detection process as an absorbing chain over register values j'.
//
// In sector j, a SWAP test on 2j' remaining qubits detects a singlet with
// probability e_{j'}(j), lowering j' by one; j' = j is absorbing because
// e_j(j) = 0. The chain starts at j' = n/2.

#include <cstdint>
#include <utility>
#include <vector>

#include "swapschur/half_spin.hpp"
#include "swapschur/rep.hpp"
#include "swapschur/rng.hpp"

namespace swapschur::markov {

struct ChainSpec {
  int n = 0;
  HalfSpin j;

  /// Throws std::invalid_argument unless j is a sector of n >= 1 qubits.
  void validate() const;
  /// Number of chain states j' = j, j+1, ..., n/2.
  int states() const { return (n - j.twice()) / 2 + 1; }
  /// State i is j' = j + i.
  HalfSpin state(int i) const { return HalfSpin::from_twice(j.twice() + 2 * i); }
};

/// Detection rates e_{j+i}(j) for i = 0..states()-1 (entry 0 is zero).
std::vector<double> rates(const ChainSpec& spec);

struct ChainDistribution {
  ChainSpec spec;
  std::int64_t steps = 0;
  std::vector<double> probs;  // probs[i] = Pr(j' = j + i | j, T)

  double at(HalfSpin j_prime) const;
  /// Pr(j' != j; T), summed over transient states.
  double error() const;
};

/// Step-by-step DP over the chain with compensated (Kahan) accumulation.
///
/// Each step moves flow_i = P_i e_i from state i to i-1. States whose mass
/// has underflowed to zero are skipped, so the cost per step shrinks as the
/// distribution drains towards j.
class ChainEvolver {
 public:
  explicit ChainEvolver(const ChainSpec& spec);

  void step();
  void advance(std::int64_t steps);

  std::int64_t steps() const { return steps_; }
  const ChainSpec& spec() const { return spec_; }
  const std::vector<double>& probs() const { return probs_; }
  /// Pr(j' != j) after steps() steps.
  double error() const;
  /// Mass absorbed at j during the most recent step.
  double last_absorbed() const { return last_absorbed_; }
  ChainDistribution distribution() const;

 private:
  ChainSpec spec_;
  std::vector<double> rates_;
  std::vector<double> probs_;
  std::vector<double> comp_;
  std::vector<double> flow_;
  std::int64_t steps_ = 0;
  int hi_ = 0;  // highest state with nonzero mass
  int lo_ = 0;  // lowest transient state reached so far
  double last_absorbed_ = 0.0;
};

/// Distributions for T = 0..tmax.
std::vector<ChainDistribution> evolve(const ChainSpec& spec, std::int64_t tmax);

double prob_error(const ChainSpec& spec, std::int64_t steps);

/// Pr(j' != j; T) for T = 0..tmax.
std::vector<double> prob_error_curve(const ChainSpec& spec, std::int64_t tmax);

/// max over sectors j < n/2 of Pr(j' != j; T), for T = 0..tmax.
std::vector<double> max_prob_error_curve(int n, std::int64_t tmax);
double max_prob_error(int n, std::int64_t steps);

// ---------------------------------------------------------------------------
// Expected detection time and bounds

struct TStar {
  double value = 0.0;
  double upper = 0.0;
  double lower = 0.0;

  double gap() const { return upper - lower; }
};

/// T*(j) = sum_{j' > j} 1/e_{j'}(j) with its closed-form upper and lower
/// bounds. All three are zero for j = n/2.
TStar t_star(const ChainSpec& spec);

/// Smallest escape rate min_{j < j' <= n/2} e_{j'}(j), by the closed-form
/// case split. Throws std::invalid_argument for j = n/2.
Rational p_star(int n, HalfSpin j);
/// Same minimum by direct enumeration of e_{j'}(j).
Rational p_star_brute_force(int n, HalfSpin j);

/// A bound value together with whether the bound is asserted at this point.
struct Tagged {
  double value = 0.0;
  bool in_regime = false;
};

/// exp(-p* T* ((T+1)/T* - ln((T+1)/T*) - 1)); in regime for T >= T*.
/// Throws std::invalid_argument for j = n/2.
Tagged chernoff_tail(const ChainSpec& spec, std::int64_t steps);

/// ceil(2n ln(n/eps)) - 1. Throws std::invalid_argument unless
/// 0 < eps < 1 and n >= 2.
std::int64_t required_T(int n, double eps);

/// Per-sector requirement T*(j) + (2/p*(j)) ln(1/eps) - 1.
double required_T_sector(const ChainSpec& spec, double eps);

/// n exp(-T/2n); in regime for T >= n ln n.
Tagged final_bound(int n, double steps);

/// n ln(n/2) + n / (ln(n/2) - ln ln(n/2)). Throws std::invalid_argument for
/// n < 8, where ln ln(n/2) leaves the domain of the estimate.
double max_t_star_bound(int n);

/// Largest T*(j) over all sectors, with the maximizing j.
std::pair<HalfSpin, double> max_t_star(int n);

struct BoundReport {
  ChainSpec spec;
  TStar t_star;
  Rational p_star;

  Tagged chernoff(std::int64_t steps) const;
  Tagged final(std::int64_t steps) const { return final_bound(spec.n, static_cast<double>(steps)); }
  std::int64_t t_eps(double eps) const { return required_T(spec.n, eps); }
};

/// Throws std::invalid_argument for j = n/2.
BoundReport bound_report(const ChainSpec& spec);

// ---------------------------------------------------------------------------
// Monte Carlo

/// Geometric number of trials to the first success, >= 1, by inversion.
std::int64_t sample_geometric(double rate, Rng& rng);

/// Total detection time sum_{j' > j} Geom(e_{j'}(j)) for each trial.
std::vector<std::int64_t> sample_absorption_times(const ChainSpec& spec, std::int64_t trials,
                                                  Rng& rng);

/// Empirical Pr(j' | j, T) over `trials` independent chains.
ChainDistribution sample_chain(const ChainSpec& spec, std::int64_t steps, std::int64_t trials,
                               Rng& rng);

}  // namespace swapschur::markov
