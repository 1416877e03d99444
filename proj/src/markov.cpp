#include "swapschur/markov.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace swapschur::markov {

namespace {

// Top-of-window mass below this is dropped so the window can shrink.
constexpr double kFlushMass = 1e-300;

void require_transient(const ChainSpec& spec, const char* what) {
  spec.validate();
  if (spec.j.twice() == spec.n) {
    throw std::invalid_argument(std::string(what) + ": j = n/2 has nothing to detect");
  }
}

}  // namespace

void ChainSpec::validate() const {
  if (n < 1) throw std::invalid_argument("ChainSpec: n must be positive");
  require_valid(n, j);
}

std::vector<double> rates(const ChainSpec& spec) {
  spec.validate();
  std::vector<double> e(static_cast<std::size_t>(spec.states()), 0.0);
  for (int i = 1; i < spec.states(); ++i) e[i] = detect_prob(spec.state(i), spec.j);
  return e;
}

double ChainDistribution::at(HalfSpin j_prime) const {
  if (j_prime < spec.j || j_prime.twice() > spec.n || (j_prime.twice() - spec.j.twice()) % 2) {
    return 0.0;
  }
  return probs[static_cast<std::size_t>((j_prime.twice() - spec.j.twice()) / 2)];
}

double ChainDistribution::error() const {
  double total = 0.0;
  for (std::size_t i = probs.size(); i-- > 1;) total += probs[i];
  return total;
}

ChainEvolver::ChainEvolver(const ChainSpec& spec)
    : spec_(spec), rates_(rates(spec)) {
  const auto size = static_cast<std::size_t>(spec_.states());
  probs_.assign(size, 0.0);
  comp_.assign(size, 0.0);
  flow_.assign(size, 0.0);
  hi_ = spec_.states() - 1;
  lo_ = hi_;
  probs_[static_cast<std::size_t>(hi_)] = 1.0;
}

void ChainEvolver::step() {
  ++steps_;
  last_absorbed_ = 0.0;
  if (hi_ < 1) return;  // fully absorbed
  const int lo = std::max(lo_, 1);
  for (int i = lo; i <= hi_; ++i) flow_[i] = probs_[i] * rates_[i];
  auto add = [this](int i, double delta) {
    const double y = delta - comp_[i];
    const double t = probs_[i] + y;
    comp_[i] = (t - probs_[i]) - y;
    probs_[i] = t;
  };
  for (int i = lo; i <= hi_; ++i) {
    const double inflow = i < hi_ ? flow_[i + 1] : 0.0;
    add(i, inflow - flow_[i]);
  }
  add(lo - 1, flow_[lo]);
  if (lo == 1) last_absorbed_ = flow_[1];
  lo_ = std::max(lo - 1, 1);
  while (hi_ >= 1 && hi_ > lo_ && probs_[hi_] < kFlushMass) {
    probs_[hi_] = 0.0;
    comp_[hi_] = 0.0;
    --hi_;
  }
  if (hi_ == lo_ && lo_ == 1 && probs_[1] < kFlushMass) {
    probs_[1] = 0.0;
    hi_ = 0;
  }
}

void ChainEvolver::advance(std::int64_t steps) {
  for (std::int64_t t = 0; t < steps; ++t) step();
}

double ChainEvolver::error() const {
  double total = 0.0;
  for (int i = hi_; i >= 1; --i) total += probs_[i];
  return total;
}

ChainDistribution ChainEvolver::distribution() const { return {spec_, steps_, probs_}; }

std::vector<ChainDistribution> evolve(const ChainSpec& spec, std::int64_t tmax) {
  if (tmax < 0) throw std::invalid_argument("evolve: negative tmax");
  ChainEvolver ev(spec);
  std::vector<ChainDistribution> out;
  out.reserve(static_cast<std::size_t>(tmax + 1));
  out.push_back(ev.distribution());
  for (std::int64_t t = 0; t < tmax; ++t) {
    ev.step();
    out.push_back(ev.distribution());
  }
  return out;
}

double prob_error(const ChainSpec& spec, std::int64_t steps) {
  if (steps < 0) throw std::invalid_argument("prob_error: negative step count");
  ChainEvolver ev(spec);
  ev.advance(steps);
  return ev.error();
}

std::vector<double> prob_error_curve(const ChainSpec& spec, std::int64_t tmax) {
  if (tmax < 0) throw std::invalid_argument("prob_error_curve: negative tmax");
  ChainEvolver ev(spec);
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(tmax + 1));
  out.push_back(ev.error());
  for (std::int64_t t = 0; t < tmax; ++t) {
    ev.step();
    out.push_back(ev.error());
  }
  return out;
}

std::vector<double> max_prob_error_curve(int n, std::int64_t tmax) {
  if (tmax < 0) throw std::invalid_argument("max_prob_error_curve: negative tmax");
  std::vector<double> worst(static_cast<std::size_t>(tmax + 1), 0.0);
  for (const auto j : spins_for(n)) {
    if (j.twice() == n) continue;
    const auto curve = prob_error_curve({n, j}, tmax);
    for (std::size_t t = 0; t < worst.size(); ++t) worst[t] = std::max(worst[t], curve[t]);
  }
  return worst;
}

double max_prob_error(int n, std::int64_t steps) {
  double worst = 0.0;
  for (const auto j : spins_for(n)) {
    if (j.twice() == n) continue;
    worst = std::max(worst, prob_error({n, j}, steps));
  }
  return worst;
}

TStar t_star(const ChainSpec& spec) {
  spec.validate();
  TStar out;
  if (spec.j.twice() == spec.n) return out;
  for (int i = spec.states() - 1; i >= 1; --i) out.value += 1.0 / detect_prob(spec.state(i), spec.j);
  const double n = spec.n;
  const double j = spec.j.value();
  const double log_k = std::log(n / 2.0 - j);
  out.upper = 2.0 * n - 2.0 * j + (2.0 * j - 2.0) * log_k;
  out.lower = 2.0 * n - 4.0 * j + (2.0 * j - 2.0) * log_k -
              (2.0 * j + 4.0) * std::log((n / 2.0 + j + 1.0) / (2.0 * j + 1.0));
  return out;
}

Rational p_star(int n, HalfSpin j) {
  require_transient({n, j}, "p_star");
  const Rational rn(n);
  switch (j.twice()) {
    case 0:
      return (rn + 2) / (4 * (rn - 1));
    case 1:
      return Rational(1, 4) + Rational(3, 4) / rn;
    case 2: {
      const Rational tail = Rational(1, 4) + 2 / rn - Rational(5, 4) / (rn - 1);
      return std::min(Rational(1, 3), tail);
    }
    default:
      return Rational(1, j.twice() + 1);
  }
}

Rational p_star_brute_force(int n, HalfSpin j) {
  const ChainSpec spec{n, j};
  require_transient(spec, "p_star_brute_force");
  Rational best = detect_prob_exact(spec.state(1), j);
  for (int i = 2; i < spec.states(); ++i) best = std::min(best, detect_prob_exact(spec.state(i), j));
  return best;
}

Tagged chernoff_tail(const ChainSpec& spec, std::int64_t steps) {
  require_transient(spec, "chernoff_tail");
  const double ts = t_star(spec).value;
  const double ps = p_star(spec.n, spec.j).convert_to<double>();
  const double lambda = (static_cast<double>(steps) + 1.0) / ts;
  const double exponent = ps * ts * (lambda - std::log(lambda) - 1.0);
  return {std::exp(-exponent), static_cast<double>(steps) >= ts};
}

std::int64_t required_T(int n, double eps) {
  if (n < 2) throw std::invalid_argument("required_T: need n >= 2");
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("required_T: eps outside (0,1)");
  return static_cast<std::int64_t>(std::ceil(2.0 * n * std::log(n / eps))) - 1;
}

double required_T_sector(const ChainSpec& spec, double eps) {
  require_transient(spec, "required_T_sector");
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("required_T_sector: eps outside (0,1)");
  const double ps = p_star(spec.n, spec.j).convert_to<double>();
  return t_star(spec).value + (2.0 / ps) * std::log(1.0 / eps) - 1.0;
}

Tagged final_bound(int n, double steps) {
  if (n < 1) throw std::invalid_argument("final_bound: n must be positive");
  return {n * std::exp(-steps / (2.0 * n)), steps >= n * std::log(static_cast<double>(n))};
}

double max_t_star_bound(int n) {
  if (n < 8) {
    throw std::invalid_argument("max_t_star_bound: defined for n >= 8 (ln ln(n/2) must exceed 0 "
                                "by a margin); got n = " + std::to_string(n));
  }
  const double h = std::log(n / 2.0);
  return n * h + n / (h - std::log(h));
}

std::pair<HalfSpin, double> max_t_star(int n) {
  std::pair<HalfSpin, double> best{j_max(n), 0.0};
  for (const auto j : spins_for(n)) {
    const double v = t_star({n, j}).value;
    if (v > best.second) best = {j, v};
  }
  return best;
}

Tagged BoundReport::chernoff(std::int64_t steps) const { return chernoff_tail(spec, steps); }

BoundReport bound_report(const ChainSpec& spec) {
  require_transient(spec, "bound_report");
  return {spec, t_star(spec), p_star(spec.n, spec.j)};
}

std::int64_t sample_geometric(double rate, Rng& rng) {
  if (!(rate > 0.0)) throw std::invalid_argument("sample_geometric: rate must be positive");
  if (rate >= 1.0) return 1;
  const double u = 1.0 - rng.uniform();  // (0, 1]
  const double x = std::ceil(std::log(u) / std::log1p(-rate));
  if (x >= static_cast<double>(std::numeric_limits<std::int64_t>::max())) {
    return std::numeric_limits<std::int64_t>::max();
  }
  return std::max<std::int64_t>(1, static_cast<std::int64_t>(x));
}

std::vector<std::int64_t> sample_absorption_times(const ChainSpec& spec, std::int64_t trials,
                                                  Rng& rng) {
  if (trials < 1) throw std::invalid_argument("sample_absorption_times: trials must be >= 1");
  const auto e = rates(spec);
  std::vector<std::int64_t> out(static_cast<std::size_t>(trials), 0);
  for (auto& total : out) {
    for (int i = spec.states() - 1; i >= 1; --i) total += sample_geometric(e[i], rng);
  }
  return out;
}

ChainDistribution sample_chain(const ChainSpec& spec, std::int64_t steps, std::int64_t trials,
                               Rng& rng) {
  if (trials < 1) throw std::invalid_argument("sample_chain: trials must be >= 1");
  const auto e = rates(spec);
  std::vector<std::int64_t> counts(e.size(), 0);
  for (std::int64_t t = 0; t < trials; ++t) {
    int i = spec.states() - 1;
    std::int64_t elapsed = 0;
    while (i > 0) {
      elapsed += sample_geometric(e[i], rng);
      if (elapsed > steps) break;
      --i;
    }
    ++counts[i];
  }
  ChainDistribution out{spec, steps, std::vector<double>(e.size())};
  for (std::size_t i = 0; i < e.size(); ++i) {
    out.probs[i] = static_cast<double>(counts[i]) / static_cast<double>(trials);
  }
  return out;
}

}  // namespace swapschur::markov
