#include "swapschur/rep.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace swapschur {

BigInt binomial(int n, int k) {
  if (n < 0) throw std::invalid_argument("binomial: n must be non-negative");
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  BigInt c = 1;
  for (int i = 1; i <= k; ++i) {
    c *= n - k + i;
    c /= i;
  }
  return c;
}

BigInt multiplicity(int n, HalfSpin j) {
  require_valid(n, j);
  const int a = (n - j.twice()) / 2;  // n/2 - j
  // (2j+1)/(n/2+j+1) = 2(2j+1)/(n+2j+2); the product is always integral.
  BigInt num = binomial(n, a) * 2 * (j.twice() + 1);
  const int den = n + j.twice() + 2;
  if (num % den != 0) throw std::logic_error("multiplicity: non-integral ratio");
  return num / den;
}

BigInt multiplicity_by_difference(int n, HalfSpin j) {
  require_valid(n, j);
  const int a = (n - j.twice()) / 2;
  return binomial(n, a) - binomial(n, a - 1);
}

BigInt SectorTable::dimension() const {
  BigInt total = 0;
  for (const auto& row : rows) total += row.multiplicity * row.irrep_dim;
  return total;
}

SectorTable sectors(int n) {
  if (n < 1) throw std::invalid_argument("sectors: need at least one qubit");
  SectorTable table;
  table.n = n;
  // Walk a = n/2 - j downward from the top sector, updating C(n, a)
  // incrementally instead of recomputing every binomial.
  const int a_max = n / 2;
  std::vector<BigInt> binom(a_max + 1);
  binom[0] = 1;
  for (int a = 1; a <= a_max; ++a) binom[a] = binom[a - 1] * (n - a + 1) / a;
  for (int two_j = n % 2; two_j <= n; two_j += 2) {
    const int a = (n - two_j) / 2;
    SectorRow row;
    row.j = HalfSpin::from_twice(two_j);
    row.irrep_dim = two_j + 1;
    row.multiplicity = binom[a] - (a > 0 ? binom[a - 1] : BigInt(0));
    table.rows.push_back(std::move(row));
  }
  return table;
}

double log_binomial(int n, int k) {
  if (k < 0 || k > n) throw std::invalid_argument("log_binomial: k out of range");
  k = std::min(k, n - k);
  if (k <= 64) {
    double s = 0.0;
    for (int i = 1; i <= k; ++i) s += std::log(static_cast<double>(n - k + i) / i);
    return s;
  }
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

double log_multiplicity(int n, HalfSpin j) {
  require_valid(n, j);
  const int a = (n - j.twice()) / 2;
  const double ratio = 2.0 * (j.twice() + 1) / (n + j.twice() + 2);
  return log_binomial(n, a) + std::log(ratio);
}

DickeVector dicke(HalfSpin j, int two_m) {
  const int q = j.twice();
  if (std::abs(two_m) > q || (q - two_m) % 2 != 0) {
    throw std::invalid_argument("dicke: m = " + std::to_string(two_m) +
                                "/2 is not a magnetic index of j = " + j.str());
  }
  if (q > 62) throw std::invalid_argument("dicke: too many qubits for a dense index");
  const int weight = (q - two_m) / 2;  // number of |1> qubits, j - m
  DickeVector v;
  v.j = j;
  v.two_m = two_m;
  const double amp = 1.0 / std::sqrt(binomial(q, weight).convert_to<double>());
  const std::uint64_t size = std::uint64_t{1} << q;
  for (std::uint64_t x = 0; x < size; ++x) {
    if (__builtin_popcountll(x) == weight) v.amplitudes.emplace_back(x, amp);
  }
  return v;
}

namespace {

void require_chain_pair(HalfSpin j_prime, HalfSpin j) {
  if (j_prime.twice() < 2) {
    throw std::invalid_argument("detect_prob: need at least two qubits (2j' >= 2)");
  }
  if ((j_prime.twice() - j.twice()) % 2 != 0) {
    throw std::invalid_argument("detect_prob: j and j' must have matching parity");
  }
  if (j > j_prime) {
    throw std::invalid_argument("detect_prob: j = " + j.str() + " exceeds j' = " +
                                j_prime.str());
  }
}

}  // namespace

Rational detect_prob_exact(HalfSpin j_prime, HalfSpin j) {
  require_chain_pair(j_prime, j);
  const long a = j_prime.twice();
  const long b = j.twice();
  // (j'(j'+1) - j(j+1)) / (2j'(2j'-1)) with everything doubled.
  return Rational(a * (a + 2) - b * (b + 2), 4 * a * (a - 1));
}

double detect_prob(HalfSpin j_prime, HalfSpin j) {
  require_chain_pair(j_prime, j);
  const double a = j_prime.twice();
  const double b = j.twice();
  return (a * (a + 2) - b * (b + 2)) / (4 * a * (a - 1));
}

std::vector<SpectrumEntry> singlet_mean_operator_spectrum(HalfSpin j_prime) {
  if (j_prime.twice() < 2) {
    throw std::invalid_argument("singlet spectrum: need at least two qubits");
  }
  std::vector<SpectrumEntry> out;
  for (int l = j_prime.twice() % 2; l <= j_prime.twice(); l += 2) {
    const auto spin = HalfSpin::from_twice(l);
    out.push_back({spin, detect_prob_exact(j_prime, spin)});
  }
  return out;
}

}  // namespace swapschur
