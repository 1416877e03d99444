#include "swapschur/oracle.hpp"

#include <cmath>
#include <stdexcept>

namespace swapschur::oracle {

std::vector<double> geometric_sum_pmf(std::span<const double> rates, std::int64_t tmax) {
  if (tmax < 0) throw std::invalid_argument("geometric_sum_pmf: negative tmax");
  const auto size = static_cast<std::size_t>(tmax + 1);
  std::vector<double> acc(size, 0.0);
  acc[0] = 1.0;  // empty sum
  std::vector<double> single(size, 0.0);
  std::vector<double> next(size);
  for (const double e : rates) {
    if (!(e > 0.0 && e <= 1.0)) throw std::invalid_argument("geometric_sum_pmf: rate outside (0,1]");
    for (std::size_t x = 1; x < size; ++x) {
      single[x] = e * std::pow(1.0 - e, static_cast<double>(x - 1));
    }
    for (std::size_t s = 0; s < size; ++s) {
      double v = 0.0;
      for (std::size_t x = 1; x <= s; ++x) v += single[x] * acc[s - x];
      next[s] = v;
    }
    acc.swap(next);
  }
  return acc;
}

double geometric_sum_tail(std::span<const double> rates, std::int64_t steps) {
  const auto pmf = geometric_sum_pmf(rates, steps);
  double below = 0.0;
  for (const double v : pmf) below += v;
  return 1.0 - below;
}

}  // namespace swapschur::oracle
