#include "swapschur/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include "swapschur/markov.hpp"
#include "swapschur/oracle.hpp"
#include "swapschur/purify.hpp"
#include "swapschur/rep.hpp"
#include "swapschur/sim.hpp"

namespace swapschur::verify {

namespace {

constexpr double kReachable = 1e-12;
constexpr double kInf = std::numeric_limits<double>::infinity();

double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

/// Tr(E omega) with E the pair-averaged singlet projector on q qubits.
double mean_detect(const Matrix& omega, int q) {
  const double c2 = 2.0 / (q * (q - 1.0));
  double total = 0.0;
  for (int r = 1; r <= q; ++r) {
    for (int s = r + 1; s <= q; ++s) total += sim::singlet_contract(omega, q, r, s).trace().real();
  }
  return c2 * total;
}

std::vector<std::int64_t> spread(std::int64_t lo, std::int64_t hi, int count) {
  std::vector<std::int64_t> out;
  for (int i = 0; i < count; ++i) {
    out.push_back(lo + (hi - lo) * i / std::max(count - 1, 1));
  }
  return out;
}

}  // namespace

const char* to_string(Provenance p) {
  switch (p) {
    case Provenance::exact: return "exact";
    case Provenance::dp: return "dp";
    case Provenance::mc: return "mc";
    case Provenance::bound: return "bound";
  }
  return "exact";
}

CheckResult make_check(std::string name, double residual, double tolerance, Provenance prov,
                       bool strict) {
  CheckResult c{std::move(name), residual, tolerance, prov, strict, false};
  c.passed = strict ? residual < tolerance : residual <= tolerance;
  return c;
}

ProtocolResiduals protocol_residuals(const DensityOperator& tau, HalfSpin j, int tmax,
                                     int conditional_tmax) {
  const int n = tau.qubits();
  require_valid(n, j);
  const auto reg_schur = sim::encode(sim::schur_channel(tau));
  const auto dp = markov::evolve({n, j}, tmax);
  const Matrix pi_j = sim::sector_projector(n, j);
  ProtocolResiduals res;
  sim::run_protocol(tau, tmax, [&](const sim::ProtocolEnsemble& ens) {
    const auto& dist = dp[static_cast<std::size_t>(ens.steps_applied)];
    const double d = sim::trace_distance(reg_schur, sim::encode(ens));
    res.identity = std::max(res.identity, std::abs(d - dist.error()));
    res.trace = std::max(res.trace, std::abs(ens.total_trace() - 1.0));
    for (int k = 0; k <= ens.max_singlets(); ++k) {
      const double w = ens.weight(k);
      res.dp_weights = std::max(res.dp_weights, std::abs(w - dist.at(ens.register_value(k))));
      if (w <= kReachable) continue;
      const int q = n - 2 * k;
      if (q < j.twice()) {
        // Weight below the true sector is impossible.
        res.conditional = kInf;
        continue;
      }
      if (q >= 2 && ens.steps_applied <= conditional_tmax) {
        const double cond = mean_detect(ens.branches[k].matrix(), q) / w;
        res.conditional =
            std::max(res.conditional, std::abs(cond - detect_prob(ens.register_value(k), j)));
      }
      const auto rho = sim::reconstruct(ens.branches[k].normalized_copy(), k);
      res.reconstruction = std::max(res.reconstruction, trace_distance(rho, tau));
      res.sector_support =
          std::max(res.sector_support, max_abs(pi_j * rho.matrix() * pi_j - rho.matrix()));
    }
  });
  return res;
}

double forget_twirl_residual(const DensityOperator& tau, int tmax) {
  double worst = 0.0;
  sim::run_protocol(tau, tmax, [&](const sim::ProtocolEnsemble& ens) {
    worst = std::max(worst, trace_distance(sim::twirl(sim::forget_register(ens)), tau));
  });
  return worst;
}

double schur_decode_residual(const DensityOperator& alpha, int singlets) {
  const int m = alpha.qubits();
  const auto big = sim::schur_channel(sim::reconstruct(alpha, singlets));
  const auto own = sim::schur_channel(alpha);
  double worst = 0.0;
  for (const auto& s : big.sectors) {
    if (s.j.twice() > m) {
      worst = std::max(worst, std::abs(s.weight()));
      continue;
    }
    worst = std::max(worst, trace_distance(s.block, own.sector(s.j).block));
  }
  worst = std::max(worst, trace_distance(sim::schur_decode(big, m), alpha));
  return worst;
}

double conservation_residual(const DensityOperator& tau, int steps, int trajectories, Rng& rng) {
  std::map<int, sim::AngularMomentum> ops;
  auto ops_for = [&](int q) -> const sim::AngularMomentum& {
    auto it = ops.find(q);
    if (it == ops.end()) it = ops.emplace(q, sim::angular_momentum_ops(q)).first;
    return it->second;
  };
  const auto& ref_ops = ops_for(tau.qubits());
  const double ref[3] = {trace_product(ref_ops.jx, tau.matrix()).real(),
                         trace_product(ref_ops.jy, tau.matrix()).real(),
                         trace_product(ref_ops.jz, tau.matrix()).real()};
  double worst = 0.0;
  for (int t = 0; t < trajectories; ++t) {
    double log_w = 0.0;
    sim::sample_trajectory(tau, steps, rng,
                           [&](const sim::TrajectoryStep& step, const DensityOperator& state) {
                             log_w += std::log(step.probability);
                             if (std::exp(log_w) <= kReachable) return;
                             const int q = state.qubits();
                             double now[3] = {0.0, 0.0, 0.0};
                             if (q > 0) {
                               const auto& o = ops_for(q);
                               now[0] = trace_product(o.jx, state.matrix()).real();
                               now[1] = trace_product(o.jy, state.matrix()).real();
                               now[2] = trace_product(o.jz, state.matrix()).real();
                             }
                             for (int w = 0; w < 3; ++w) {
                               worst = std::max(worst, std::abs(now[w] - ref[w]));
                             }
                           });
  }
  return worst;
}

double dp_vs_convolution_residual(int n, int tmax) {
  double worst = 0.0;
  for (const auto j : spins_for(n)) {
    const markov::ChainSpec spec{n, j};
    const auto curve = markov::prob_error_curve(spec, tmax);
    const auto e = markov::rates(spec);
    const std::vector<double> transient(e.begin() + 1, e.end());
    const auto pmf = oracle::geometric_sum_pmf(transient, tmax);
    double below = 0.0;
    for (int t = 0; t <= tmax; ++t) {
      below += pmf[static_cast<std::size_t>(t)];
      worst = std::max(worst, std::abs(curve[static_cast<std::size_t>(t)] - (1.0 - below)));
    }
  }
  return worst;
}

double dp_monotonicity_residual(int n, int tmax) {
  double worst = -1.0;
  for (const auto j : spins_for(n)) {
    const auto curve = markov::prob_error_curve({n, j}, tmax);
    for (std::size_t t = 1; t < curve.size(); ++t) worst = std::max(worst, curve[t] - curve[t - 1]);
  }
  return worst;
}

double chain_mc_sigma(int n, HalfSpin j, std::int64_t steps, std::int64_t trials, Rng& rng) {
  const markov::ChainSpec spec{n, j};
  const auto emp = markov::sample_chain(spec, steps, trials, rng);
  markov::ChainEvolver ev(spec);
  ev.advance(steps);
  const auto& dp = ev.probs();
  double worst = 0.0;
  for (std::size_t i = 0; i < dp.size(); ++i) {
    const double sigma = std::sqrt(dp[i] * (1.0 - dp[i]) / static_cast<double>(trials));
    const double diff = std::abs(emp.probs[i] - dp[i]);
    if (sigma == 0.0) {
      if (diff > 0.0) return kInf;
      continue;
    }
    worst = std::max(worst, diff / sigma);
  }
  return worst;
}

double t_star_bracket_residual(int n) {
  double worst = -kInf;
  for (const auto j : spins_for(n)) {
    if (j.twice() == n) continue;
    const auto ts = markov::t_star({n, j});
    worst = std::max({worst, ts.lower - ts.value, ts.value - ts.upper});
  }
  return worst;
}

double t_star_gap_residual(int n) {
  double worst = -kInf;
  for (const auto j : spins_for(n)) {
    if (j.twice() == n) continue;
    worst = std::max(worst, markov::t_star({n, j}).gap() - (n + 5.0));
  }
  return worst;
}

double max_t_star_residual(int n) { return markov::max_t_star(n).second - markov::max_t_star_bound(n); }

double p_star_residual(int n) {
  Rational global(2);
  for (const auto j : spins_for(n)) {
    if (j.twice() == n) continue;
    const auto ps = markov::p_star(n, j);
    if (ps != markov::p_star_brute_force(n, j)) return 1.0;
    global = std::min(global, ps);
  }
  return global == Rational(1, n - 1) ? 0.0 : 1.0;
}

double chernoff_residual(int n, std::int64_t tmax) {
  double worst = -1.0;
  for (const auto j : spins_for(n)) {
    if (j.twice() == n) continue;
    const markov::ChainSpec spec{n, j};
    const auto curve = markov::prob_error_curve(spec, tmax);
    for (std::int64_t t = 0; t <= tmax; ++t) {
      const auto bound = markov::chernoff_tail(spec, t);
      if (!bound.in_regime) continue;
      worst = std::max(worst, curve[static_cast<std::size_t>(t)] - bound.value);
    }
  }
  return worst;
}

double final_bound_residual(int n, const std::vector<std::int64_t>& steps) {
  if (steps.empty()) return -kInf;
  const auto tmax = *std::max_element(steps.begin(), steps.end());
  const auto worst_curve = markov::max_prob_error_curve(n, tmax);
  double worst = -kInf;
  for (const auto t : steps) {
    const double bound = markov::final_bound(n, static_cast<double>(t)).value;
    worst = std::max(worst, worst_curve[static_cast<std::size_t>(t)] - bound);
  }
  return worst;
}

double required_t_residual(int n, double eps) {
  return markov::max_prob_error(n, markov::required_T(n, eps)) - eps;
}

double required_t_dominance_residual(int n, double eps) {
  const double global = static_cast<double>(markov::required_T(n, eps));
  double worst = -kInf;
  for (const auto j : spins_for(n)) {
    if (j.twice() == n) continue;
    worst = std::max(worst, markov::required_T_sector({n, j}, eps) - global);
  }
  return worst;
}

double purify_norm_residual(int n, double p) {
  return std::abs(purify::sector_stats(n, purify::NoiseModel(p)).total_weight() - 1.0);
}

double purify_jz_residual(int n, double p) {
  const double expected = n * (1.0 - p) / 2.0;
  const double got = purify::sector_stats(n, purify::NoiseModel(p)).jz_sum();
  return std::abs(got - expected) / expected;
}

double fidelity_curve_residual(int n, double p, std::int64_t tmax) {
  const auto curve = purify::fidelity_curve(n, purify::NoiseModel(p), tmax);
  double worst = -kInf;
  for (std::size_t t = 0; t < curve.rows.size(); ++t) {
    const auto& r = curve.rows[t];
    if (t > 0) worst = std::max(worst, curve.rows[t - 1].fidelity - r.fidelity);
    const double gap = curve.f_opt - r.fidelity;
    worst = std::max({worst, -gap, gap - r.eps_gap});
    if (r.exp_gap.in_regime) worst = std::max(worst, gap - r.exp_gap.value);
  }
  return worst;
}

std::vector<CheckResult> run_verification(const VerifyConfig& config) {
  const int n = config.n;
  if (n < 2) throw std::invalid_argument("verify: need n >= 2");
  if (config.tmax < 0) throw std::invalid_argument("verify: negative tmax");
  std::vector<CheckResult> out;
  auto add = [&](std::string name, double residual, double tol, Provenance prov, bool strict = false) {
    if (config.tamper) tol = -kInf;
    out.push_back(make_check(std::move(name), residual, tol, prov, strict));
  };
  Rng root(config.seed);

  if (n <= 6) {
    ProtocolResiduals worst;
    double conservation = 0.0;
    std::uint64_t job = 0;
    for (const auto j : spins_for(n)) {
      for (int s = 0; s < config.seeds; ++s) {
        Rng rng = root.fork(job++);
        const auto tau = sim::random_sector_state(n, j, rng);
        const auto r = protocol_residuals(tau, j, config.tmax);
        worst.identity = std::max(worst.identity, r.identity);
        worst.conditional = std::max(worst.conditional, r.conditional);
        worst.reconstruction = std::max(worst.reconstruction, r.reconstruction);
        worst.sector_support = std::max(worst.sector_support, r.sector_support);
        worst.dp_weights = std::max(worst.dp_weights, r.dp_weights);
        worst.trace = std::max(worst.trace, r.trace);
        if (s == 0) {
          conservation = std::max(
              conservation, conservation_residual(tau, config.tmax, config.trajectories, rng));
        }
      }
    }
    add("trace_distance_identity", worst.identity, 1e-9, Provenance::exact);
    add("conditional_detection", worst.conditional, 1e-10, Provenance::exact);
    add("reconstruct_branch", worst.reconstruction, 1e-9, Provenance::exact);
    add("sector_invariance", worst.sector_support, 1e-10, Provenance::exact);
    add("dp_vs_dense_weights", worst.dp_weights, 1e-9, Provenance::dp);
    add("trace_preservation", worst.trace, 1e-10, Provenance::exact);
    add("angular_momentum_conservation", conservation, 1e-9, Provenance::mc);

    double forget = 0.0;
    double decode = 0.0;
    for (int s = 0; s < config.seeds; ++s) {
      Rng rng = root.fork(job++);
      forget = std::max(forget, forget_twirl_residual(sim::random_pi_state(n, rng),
                                                      std::min(config.tmax, 10)));
      for (int k = 1; 2 * k < n; ++k) {
        decode = std::max(decode, schur_decode_residual(sim::random_pi_state(n - 2 * k, rng), k));
      }
    }
    add("twirl_forget_protocol", forget, 1e-9, Provenance::exact);
    add("schur_decode_inverse", decode, 1e-9, Provenance::exact);
  }

  if (n <= 64) {
    const auto table = sectors(n);
    add("dimension_sum_rule", table.dimension() == BigInt(1) << n ? 0.0 : 1.0, 0.0,
        Provenance::exact);
    double agree = 0.0;
    for (const auto& row : table.rows) {
      if (row.multiplicity != multiplicity_by_difference(n, row.j)) agree = 1.0;
    }
    add("multiplicity_forms_agree", agree, 0.0, Provenance::exact);
  }
  if (n <= 400) add("p_star_case_table", p_star_residual(n), 0.0, Provenance::exact);
  add("t_star_bracket", t_star_bracket_residual(n), 0.0, Provenance::bound);
  add("t_star_gap", t_star_gap_residual(n), 0.0, Provenance::bound);
  if (n >= 8) add("max_t_star_bound", max_t_star_residual(n), 0.0, Provenance::bound);
  if (n <= 12) add("dp_vs_convolution", dp_vs_convolution_residual(n, config.tmax), 1e-10, Provenance::dp);
  if (n <= 200) {
    const auto horizon = static_cast<std::int64_t>(
        std::ceil(4.0 * std::max(markov::max_t_star(n).second, 1.0)));
    add("dp_monotone", dp_monotonicity_residual(n, static_cast<int>(horizon)), 0.0, Provenance::dp);
    add("chernoff_dominance", chernoff_residual(n, horizon), 0.0, Provenance::bound);
    const double nlogn = n * std::log(static_cast<double>(n));
    add("final_bound_dominance",
        final_bound_residual(n, spread(static_cast<std::int64_t>(std::ceil(nlogn)),
                                       static_cast<std::int64_t>(6.0 * nlogn), 20)),
        0.0, Provenance::bound, true);
    for (const double eps : {0.1, 0.01, 0.001}) {
      add("required_T_eps_" + std::to_string(eps).substr(0, 5), required_t_residual(n, eps), 0.0,
          Provenance::bound);
    }
    add("required_T_dominates_sectors", required_t_dominance_residual(n, 0.01), 0.0,
        Provenance::bound);
    add("fidelity_curve_bounds",
        fidelity_curve_residual(n, 0.5, static_cast<std::int64_t>(std::ceil(3.0 * nlogn))), 1e-12,
        Provenance::dp);
    Rng rng = root.fork(1000);
    const auto j = j_min(n);
    add("dp_vs_mc_chain_sigma",
        chain_mc_sigma(n, j, static_cast<std::int64_t>(markov::t_star({n, j}).value), 20000, rng),
        5.0, Provenance::mc);
  }
  add("sector_weight_norm", purify_norm_residual(n, 0.5), 1e-9, Provenance::exact);
  add("jz_sum_rule", purify_jz_residual(n, 0.5), 1e-9, Provenance::exact);
  return out;
}

}  // namespace swapschur::verify
