#pragma once

#include <compare>
#include <stdexcept>
#include <string>
#include <vector>

namespace swapschur {

/// Total angular momentum j, stored exactly as the integer 2j.
///
/// Every sector-indexed quantity (multiplicities, detection rates, chain
/// states) is keyed by a HalfSpin so that odd qubit counts, whose sectors
/// are half-integers, need no floating-point labels.
class HalfSpin {
 public:
  constexpr HalfSpin() = default;

  /// Builds j from its doubled value, e.g. from_twice(3) is j = 3/2.
  static constexpr HalfSpin from_twice(int two_j) {
    if (two_j < 0) throw std::invalid_argument("HalfSpin: 2j must be non-negative");
    return HalfSpin(two_j);
  }

  constexpr int twice() const { return two_j_; }
  constexpr double value() const { return two_j_ / 2.0; }
  constexpr bool is_integer() const { return two_j_ % 2 == 0; }

  /// Eigenvalue j(j+1) of the Casimir operator J².
  constexpr double casimir() const { return two_j_ * (two_j_ + 2) / 4.0; }

  /// Irrep dimension 2j+1.
  constexpr int dimension() const { return two_j_ + 1; }

  /// j + 1 (one step up the singlet-detection chain).
  constexpr HalfSpin next() const { return HalfSpin(two_j_ + 2); }

  friend constexpr auto operator<=>(HalfSpin, HalfSpin) = default;

  /// "3/2", "1", "0".
  std::string str() const {
    return is_integer() ? std::to_string(two_j_ / 2) : std::to_string(two_j_) + "/2";
  }

 private:
  constexpr explicit HalfSpin(int two_j) : two_j_(two_j) {}
  int two_j_ = 0;
};

/// Smallest sector of n qubits: 0 for even n, 1/2 for odd n.
constexpr HalfSpin j_min(int n) { return HalfSpin::from_twice(n % 2); }
/// Totally symmetric sector j = n/2.
constexpr HalfSpin j_max(int n) { return HalfSpin::from_twice(n); }

constexpr bool valid_for(int n, HalfSpin j) {
  return n >= 0 && j.twice() <= n && (n - j.twice()) % 2 == 0;
}

inline void require_valid(int n, HalfSpin j) {
  if (!valid_for(n, j)) {
    throw std::invalid_argument("j = " + j.str() + " is not a sector of " +
                                std::to_string(n) + " qubits");
  }
}

/// All sectors of n qubits in increasing order.
inline std::vector<HalfSpin> spins_for(int n) {
  std::vector<HalfSpin> out;
  for (int t = n % 2; t <= n; t += 2) out.push_back(HalfSpin::from_twice(t));
  return out;
}

}  // namespace swapschur
