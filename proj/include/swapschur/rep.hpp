#pragma once

// Exact representation-theoretic quantities for n qubits under SU(2) x S_n.

#include <cstdint>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "swapschur/half_spin.hpp"

namespace swapschur {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

BigInt binomial(int n, int k);

/// Multiplicity m(n,j) of the spin-j irrep, as C(n, n/2-j) (2j+1)/(n/2+j+1).
BigInt multiplicity(int n, HalfSpin j);

/// Same multiplicity via C(n, n/2-j) - C(n, n/2-j-1).
BigInt multiplicity_by_difference(int n, HalfSpin j);

struct SectorRow {
  HalfSpin j;
  BigInt multiplicity;
  int irrep_dim = 0;
};

struct SectorTable {
  int n = 0;
  std::vector<SectorRow> rows;

  /// Sum of (2j+1) m(n,j); equals 2^n.
  BigInt dimension() const;
};

/// Decomposition of n qubits into (j, m(n,j), 2j+1) rows, j ascending.
/// Throws std::invalid_argument for n < 1.
SectorTable sectors(int n);

double log_binomial(int n, int k);

/// ln m(n,j) without forming the integer, accurate for n up to ~10^4.
double log_multiplicity(int n, HalfSpin j);

/// A Dicke state |j,m> on 2j qubits.
///
/// Amplitudes are listed for the basis strings of Hamming weight j-m in
/// increasing lexicographic order, qubit 1 being the most significant bit of
/// the index.
struct DickeVector {
  HalfSpin j;
  int two_m = 0;
  std::vector<std::pair<std::uint64_t, double>> amplitudes;

  int qubits() const { return j.twice(); }
};

DickeVector dicke(HalfSpin j, int two_m);

/// Singlet-detection probability e_{j'}(j) for a uniformly random SWAP test
/// on 2j' qubits in sector j.
Rational detect_prob_exact(HalfSpin j_prime, HalfSpin j);
double detect_prob(HalfSpin j_prime, HalfSpin j);

struct SpectrumEntry {
  HalfSpin l;
  Rational eigenvalue;
};

/// Eigenvalues of the pair-averaged singlet projector on 2j' qubits, keyed by
/// the J² sector l, ascending in l.
std::vector<SpectrumEntry> singlet_mean_operator_spectrum(HalfSpin j_prime);

}  // namespace swapschur
