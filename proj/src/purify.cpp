#include "swapschur/purify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "swapschur/rep.hpp"
#include "swapschur/sim.hpp"

namespace swapschur::purify {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

/// ln(a^k - b^k) for a > b >= 0, without forming either power.
double log_power_difference(double log_a, double log_b, int k) {
  return k * log_a + std::log(-std::expm1(k * (log_b - log_a)));
}

}  // namespace

NoiseModel::NoiseModel(double depolarizing) : p(depolarizing) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument("NoiseModel: p must lie in [0, 1]");
  }
}

const SectorStat& SectorStats::at(HalfSpin j) const {
  for (const auto& r : rows) {
    if (r.j == j) return r;
  }
  throw std::out_of_range("SectorStats: no sector j = " + j.str());
}

double SectorStats::total_weight() const {
  double t = 0.0;
  for (const auto& r : rows) t += r.weight;
  return t;
}

double SectorStats::jz_sum() const {
  double t = 0.0;
  for (const auto& r : rows) t += r.j.twice() * r.weight * (r.fidelity - 0.5);
  return t;
}

SectorStats sector_stats(int n, const NoiseModel& noise) {
  if (n < 1) throw std::invalid_argument("sector_stats: n must be positive");
  const double p = noise.p;
  SectorStats out;
  out.n = n;
  out.p = p;
  if (p == 1.0) {
    // Maximally mixed input: p_j = (2j+1) m(n,j) / 2^n, every f_j = 1/2.
    for (const auto j : spins_for(n)) {
      const double lw = std::log(j.dimension()) + log_multiplicity(n, j) - n * std::log(2.0);
      out.rows.push_back({j, lw, std::exp(lw), 0.5});
    }
    return out;
  }
  const double log_a = std::log1p(-p / 2.0);
  const double log_b = p > 0.0 ? std::log(p / 2.0) : kNegInf;
  const double log_pair = p > 0.0 ? std::log((2.0 * p - p * p) / 4.0) : kNegInf;
  const double log_r = log_b - log_a;  // ln(p / (2 - p))
  const double ratio_a = (1.0 - p / 2.0) / (1.0 - p);
  for (const auto j : spins_for(n)) {
    const int singlets = (n - j.twice()) / 2;
    const int k = j.twice() + 1;
    double lw = -std::log1p(-p) + log_multiplicity(n, j) + log_power_difference(log_a, log_b, k);
    if (singlets > 0) lw += singlets * log_pair;
    double f = 0.5;
    if (j.twice() > 0) {
      const double one_minus_rk = -std::expm1(k * log_r);
      f = (k / one_minus_rk - ratio_a) / j.twice();
    }
    out.rows.push_back({j, lw, std::exp(lw), f});
  }
  return out;
}

double f_opt(int n, const NoiseModel& noise) {
  double t = 0.0;
  for (const auto& r : sector_stats(n, noise).rows) t += r.weight * r.fidelity;
  return t;
}

double f_opt_asymptotic(int n, const NoiseModel& noise) {
  const double q = 1.0 - noise.p;
  return 1.0 - noise.p / (2.0 * n * q * q);
}

PurificationCurve fidelity_curve(int n, const NoiseModel& noise, std::int64_t tmax) {
  if (tmax < 0) throw std::invalid_argument("fidelity_curve: negative tmax");
  const auto stats = sector_stats(n, noise);
  PurificationCurve curve;
  curve.n = n;
  curve.p = noise.p;
  curve.marker = n * std::log(static_cast<double>(n));
  for (const auto& r : stats.rows) curve.f_opt += r.weight * r.fidelity;

  const auto size = static_cast<std::size_t>(tmax + 1);
  std::vector<double> shift(size, 0.0);  // f(n,T) - 1/2
  std::vector<double> eps(size, 0.0);
  for (const auto& r : stats.rows) {
    if (r.j.twice() == n) {
      for (auto& s : shift) s += r.weight * (r.fidelity - 0.5);
      continue;
    }
    const double coef = r.weight * (r.fidelity - 0.5);
    markov::ChainEvolver ev({n, r.j});
    for (std::size_t t = 0; t < size; ++t) {
      if (t > 0) ev.step();
      eps[t] = std::max(eps[t], ev.error());
      if (coef == 0.0) continue;
      const auto& probs = ev.probs();
      double g = 0.0;  // E[j / j']
      for (std::size_t i = 0; i < probs.size(); ++i) {
        if (probs[i] != 0.0) {
          g += probs[i] * r.j.twice() / static_cast<double>(r.j.twice() + 2 * i);
        }
      }
      shift[t] += coef * g;
    }
  }
  curve.rows.reserve(size);
  for (std::size_t t = 0; t < size; ++t) {
    const auto steps = static_cast<std::int64_t>(t);
    curve.rows.push_back({steps, 0.5 + shift[t], eps[t],
                          markov::final_bound(n, static_cast<double>(steps)),
                          eps[t] * (curve.f_opt - 0.5)});
  }
  return curve;
}

GapBounds fidelity_gap_bounds(int n, const NoiseModel& noise, std::int64_t steps) {
  const auto curve = fidelity_curve(n, noise, steps);
  const auto& last = curve.rows.back();
  return {last.exp_gap, last.eps_gap, curve.f_opt - last.fidelity};
}

ChildsRow childs_comparison(const NoiseModel& noise, double eps) {
  const double p = noise.p;
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("childs_comparison: p outside (0,1)");
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("childs_comparison: eps outside (0,1)");
  ChildsRow row;
  row.p = p;
  row.eps = eps;
  row.n_ours = 0.5 * p / (eps * (1.0 - p) * (1.0 - p));
  row.swap_tests = static_cast<std::int64_t>(
      std::ceil(2.0 * row.n_ours * std::log(2.0 * row.n_ours / eps)));
  row.n_baseline = 3630.0 / eps * std::pow(1.0 - p, -8.0 * std::log(2.0));
  return row;
}

SlopeFit fit_childs_slopes(const std::vector<ChildsRow>& rows) {
  if (rows.size() < 2) throw std::invalid_argument("fit_childs_slopes: need two or more rows");
  auto slope = [&](auto value) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double m = static_cast<double>(rows.size());
    for (const auto& r : rows) {
      const double x = std::log(1.0 - r.p);
      const double y = std::log(value(r));
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    return (m * sxy - sx * sy) / (m * sxx - sx * sx);
  };
  return {slope([](const ChildsRow& r) { return r.n_ours; }),
          slope([](const ChildsRow& r) { return r.n_baseline; })};
}

std::vector<double> default_childs_grid() { return {0.9, 0.925, 0.95, 0.975, 0.99}; }

McEstimate mc_fidelity(int n, const NoiseModel& noise, std::int64_t steps, std::int64_t trials,
                       Rng& rng) {
  if (n < 1 || n > sim::kMaxExactQubits) {
    throw std::invalid_argument("mc_fidelity: n must be in 1..8");
  }
  if (trials < 1) throw std::invalid_argument("mc_fidelity: trials must be >= 1");
  if (steps > std::numeric_limits<int>::max()) throw std::invalid_argument("mc_fidelity: too many steps");
  const auto input = sim::depolarized_product(n, noise.p);
  // Welford running mean and variance.
  double mean = 0.0;
  double m2 = 0.0;
  for (std::int64_t t = 1; t <= trials; ++t) {
    const auto traj = sim::sample_trajectory(input, static_cast<int>(steps), rng);
    double f = 0.5;
    const int left = traj.state.qubits();
    if (left > 0) {
      const int keep = static_cast<int>(rng.below(static_cast<std::uint64_t>(left))) + 1;
      f = single_qubit_marginal(traj.state.matrix(), left, keep)(0, 0).real();
    }
    const double delta = f - mean;
    mean += delta / static_cast<double>(t);
    m2 += delta * (f - mean);
  }
  McEstimate est;
  est.mean = mean;
  est.trials = trials;
  est.std_error = trials > 1 ? std::sqrt(m2 / static_cast<double>(trials - 1) / trials) : 0.0;
  return est;
}

}  // namespace swapschur::purify
