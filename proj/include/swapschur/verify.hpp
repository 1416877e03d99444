#pragma once

// Cross-module consistency checks. Each routine returns a residual; callers
// compare it against a tolerance. Shared by the `verify` command and the
// acceptance suite.

#include <cstdint>
#include <string>
#include <vector>

#include "swapschur/density.hpp"
#include "swapschur/half_spin.hpp"
#include "swapschur/rng.hpp"

namespace swapschur::verify {

enum class Provenance { exact, dp, mc, bound };

const char* to_string(Provenance p);

struct CheckResult {
  std::string name;
  double residual = 0.0;
  double tolerance = 0.0;
  Provenance provenance = Provenance::exact;
  bool strict = false;  // residual < tolerance rather than <=
  bool passed = false;
};

CheckResult make_check(std::string name, double residual, double tolerance, Provenance prov,
                       bool strict = false);

// ---------------------------------------------------------------------------
// Dense simulation (n <= 6 in practice)

/// Residuals gathered along run_protocol(tau, T), T = 0..tmax, for tau a PI
/// state supported in sector j. Branches lighter than 1e-12 are skipped.
/// The conditional check runs only for T <= conditional_tmax: round-off left
/// in a sector the input cannot reach does not decay, so its share of a
/// draining branch grows as the branch weight shrinks.
struct ProtocolResiduals {
  /// max_T |D(Schur(tau), SWAP^T(tau)) - Pr(j' != j; T)| on register-encoded
  /// outputs.
  double identity = 0.0;
  /// max |Tr(E omega_k)/Tr(omega_k) - e_{n/2-k}(j)| over reachable branches.
  double conditional = 0.0;
  /// max D(reconstruct(omega_k / Tr, k), tau) over reachable branches.
  double reconstruction = 0.0;
  /// max |Pi_j rho Pi_j - rho| entry of every reconstructed branch.
  double sector_support = 0.0;
  /// max |Tr(omega_k) - Pr(j' = n/2 - k | j, T)| against the chain DP.
  double dp_weights = 0.0;
  /// max |sum_k Tr(omega_k) - 1|.
  double trace = 0.0;
};

ProtocolResiduals protocol_residuals(const DensityOperator& tau, HalfSpin j, int tmax,
                                     int conditional_tmax = 15);

/// max_T D(twirl(forget(SWAP^T(tau))), tau), T = 0..tmax, for any PI tau.
double forget_twirl_residual(const DensityOperator& tau, int tmax);

/// For PI alpha on m qubits: the Schur channel of reconstruct(alpha, k)
/// must carry alpha's own sector blocks (zero above m/2), and schur_decode
/// must return alpha. Largest deviation among these.
double schur_decode_residual(const DensityOperator& alpha, int singlets);

/// max |Tr(J_w omega) - Tr(J_w tau)| over w in {x,y,z}, every step of every
/// trajectory with weight above 1e-12.
double conservation_residual(const DensityOperator& tau, int steps, int trajectories, Rng& rng);

// ---------------------------------------------------------------------------
// Chain and bounds

/// max over j, T of |DP Pr(j' != j; T) - convolution tail|.
double dp_vs_convolution_residual(int n, int tmax);

/// max over j, T of Pr(j' != j; T+1) - Pr(j' != j; T) (<= 0 when monotone).
double dp_monotonicity_residual(int n, int tmax);

/// Largest |empirical - DP| / sigma over states j', sigma the binomial
/// standard deviation of the empirical frequency.
double chain_mc_sigma(int n, HalfSpin j, std::int64_t steps, std::int64_t trials, Rng& rng);

/// max over j of max(lower - T*, T* - upper); <= 0 when bracketed.
double t_star_bracket_residual(int n);
/// max over j of gap - (n + 5).
double t_star_gap_residual(int n);
/// max_j T* - max_t_star_bound(n), n >= 8.
double max_t_star_residual(int n);

/// 0 if p*(j) equals the brute-force minimum for every j < n/2 and the
/// minimum over j is 1/(n-1); 1 otherwise (exact rationals).
double p_star_residual(int n);

/// max over in-regime (j, T <= tmax) of DP - chernoff.
double chernoff_residual(int n, std::int64_t tmax);

/// max over the given T of max_j Pr(j' != j; T) - n exp(-T/2n).
double final_bound_residual(int n, const std::vector<std::int64_t>& steps);

/// max_j Pr(j' != j; required_T(n, eps)) - eps.
double required_t_residual(int n, double eps);

/// max over j of required_T_sector(j, eps) - required_T(n, eps).
double required_t_dominance_residual(int n, double eps);

/// |sum_j p_j - 1|.
double purify_norm_residual(int n, double p);
/// |sum_j 2j p_j (f_j - 1/2) - n(1-p)/2| / (n(1-p)/2).
double purify_jz_residual(int n, double p);

/// Largest of: decrease of f between consecutive T, f - f_opt, and gap minus
/// each bound in its regime, over T = 0..tmax.
double fidelity_curve_residual(int n, double p, std::int64_t tmax);

// ---------------------------------------------------------------------------
// Suite

struct VerifyConfig {
  int n = 4;
  int tmax = 20;
  std::uint64_t seed = 0;
  int seeds = 3;
  int trajectories = 100;
  bool tamper = false;  // test hook: every tolerance becomes unreachable
};

/// Runs every check applicable to config.n: dense ones for n <= 6,
/// analytic ones for any n >= 2.
std::vector<CheckResult> run_verification(const VerifyConfig& config);

}  // namespace swapschur::verify
