#include <array>
#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include "swapschur/markov.hpp"
#include "swapschur/rep.hpp"
#include "swapschur/sim.hpp"

using namespace swapschur;
using namespace swapschur::sim;

namespace {

HalfSpin J(int two_j) { return HalfSpin::from_twice(two_j); }

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

int rank_of(const Matrix& p) { return static_cast<int>(std::lround(p.trace().real())); }

}  // namespace

// --- operators -------------------------------------------------------------

TEST(AngularMomentum, SingleQubit) {
  const auto ops = angular_momentum_ops(1);
  EXPECT_NEAR(ops.jz(0, 0).real(), 0.5, 1e-15);
  EXPECT_NEAR(ops.jz(1, 1).real(), -0.5, 1e-15);
}

TEST(AngularMomentum, CommutatorAndCasimirSpectrum) {
  for (int k = 1; k <= 6; ++k) {
    const auto ops = angular_momentum_ops(k);
    const Complex i(0.0, 1.0);
    EXPECT_LT(max_abs(ops.jx * ops.jy - ops.jy * ops.jx - i * ops.jz), 1e-12) << k;
    EXPECT_LT(max_abs(ops.jx - ops.jx.adjoint()), 1e-15);
    EXPECT_LT(max_abs(ops.jy - ops.jy.adjoint()), 1e-15);
    const Matrix j2 = ops.jx * ops.jx + ops.jy * ops.jy + ops.jz * ops.jz;
    EXPECT_LT(max_abs(j2 - ops.j2), 1e-12) << k;

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(casimir_matrix(k));
    for (const auto& row : sectors(k).rows) {
      int count = 0;
      for (Eigen::Index x = 0; x < es.eigenvalues().size(); ++x) {
        if (std::abs(es.eigenvalues()(x) - row.j.casimir()) < 1e-9) ++count;
      }
      EXPECT_EQ(count, row.irrep_dim * row.multiplicity.convert_to<int>()) << k << " " << row.j.str();
    }
  }
}

TEST(AngularMomentum, TwoQubitSingletTriplet) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(casimir_matrix(2));
  EXPECT_NEAR(es.eigenvalues()(0), 0.0, 1e-14);
  for (int x = 1; x < 4; ++x) EXPECT_NEAR(es.eigenvalues()(x), 2.0, 1e-14);
}

TEST(Dicke, LoweringLadder) {
  for (int q = 1; q <= 8; ++q) {
    const auto ops = angular_momentum_ops(q);
    const Matrix lower = ops.jx - Complex(0.0, 1.0) * ops.jy;
    const double j = q / 2.0;
    for (int tm = q; tm > -q; tm -= 2) {
      const double m = tm / 2.0;
      const Vector lhs = lower * dicke_dense(J(q), tm);
      const Vector rhs = std::sqrt(j * (j + 1) - m * (m - 1)) * dicke_dense(J(q), tm - 2);
      EXPECT_LT((lhs - rhs).cwiseAbs().maxCoeff(), 1e-12) << q << " " << tm;
    }
  }
}

TEST(SectorProjector, RanksAndCompleteness) {
  EXPECT_EQ(rank_of(sector_projector(2, J(0))), 1);
  EXPECT_EQ(rank_of(sector_projector(4, J(2))), 9);
  for (int k = 1; k <= 6; ++k) {
    EXPECT_EQ(rank_of(sector_projector(k, J(k))), k + 1);
    const auto d = static_cast<Eigen::Index>(qubit_dim(k));
    Matrix total = Matrix::Zero(d, d);
    for (const auto j : spins_for(k)) {
      const Matrix p = sector_projector(k, j);
      EXPECT_LT(max_abs(p * p - p), 1e-12);
      total += p;
    }
    EXPECT_LT(max_abs(total - Matrix::Identity(d, d)), 1e-12);
  }
  EXPECT_THROW(sector_projector(4, J(1)), std::invalid_argument);
}

TEST(SymmetricProjector, MatchesTopSector) {
  for (int q = 1; q <= 6; ++q) {
    EXPECT_LT(max_abs(symmetric_projector(q) - sector_projector(q, J(q))), 1e-12);
  }
}

TEST(SingletMeanOperator, EigenvaluesMatchExactSpectrum) {
  for (int q = 2; q <= 6; ++q) {
    const auto d = static_cast<Eigen::Index>(qubit_dim(q));
    Matrix e = Matrix::Zero(d, d);
    for (int r = 1; r <= q; ++r) {
      for (int s = r + 1; s <= q; ++s) e += singlet_projector(q, r, s);
    }
    e *= 2.0 / (q * (q - 1.0));
    for (const auto& entry : singlet_mean_operator_spectrum(J(q))) {
      const Matrix p = sector_projector(q, entry.l);
      // E acts as a scalar on each J² eigenspace.
      EXPECT_LT(max_abs(e * p - entry.eigenvalue.convert_to<double>() * p), 1e-12)
          << q << " " << entry.l.str();
    }
  }
}

TEST(PermuteQubits, CyclesBasisStates) {
  const auto psi = DensityOperator::basis_state(3, 0b100);  // qubit 1 set
  const std::array<int, 3> perm{2, 0, 1};                  // qubit 1 -> position 3
  const Matrix out = permute_qubits(psi.matrix(), 3, perm);
  EXPECT_NEAR(out(0b001, 0b001).real(), 1.0, 1e-15);
}

// --- twirl -----------------------------------------------------------------

TEST(Twirl, Examples) {
  const auto s01 = DensityOperator::basis_state(2, 0b01);
  const Matrix t = twirl(s01).matrix();
  EXPECT_NEAR(t(1, 1).real(), 0.5, 1e-15);
  EXPECT_NEAR(t(2, 2).real(), 0.5, 1e-15);
  EXPECT_NEAR(std::abs(t(1, 2)), 0.0, 1e-15);

  const DensityOperator xi(2, singlet_power(1));
  EXPECT_LT(max_abs(twirl(xi).matrix() - xi.matrix()), 1e-15);
}

TEST(Twirl, InvariantIdempotentTracePreserving) {
  Rng rng(9);
  for (int k = 2; k <= 6; ++k) {
    const auto d = static_cast<Eigen::Index>(qubit_dim(k));
    Matrix g(d, d);
    for (Eigen::Index r = 0; r < d; ++r)
      for (Eigen::Index c = 0; c < d; ++c) g(r, c) = Complex(rng.normal(), rng.normal());
    Matrix m = g * g.adjoint();
    m /= m.trace().real();
    const auto once = twirl(DensityOperator(k, m));
    EXPECT_LT(permutation_defect(once.matrix(), k), 1e-10);
    EXPECT_LT(max_abs(twirl(once).matrix() - once.matrix()), 1e-12);
    EXPECT_NEAR(once.trace(), 1.0, 1e-12);
    for (int r = 1; r <= k; ++r) {
      for (int s = r + 1; s <= k; ++s) {
        std::vector<int> perm(static_cast<std::size_t>(k));
        std::iota(perm.begin(), perm.end(), 0);
        std::swap(perm[r - 1], perm[s - 1]);
        EXPECT_LT(max_abs(permute_qubits(once.matrix(), k, perm) - once.matrix()), 1e-10);
      }
    }
  }
}

TEST(Twirl, ExactAverageAgainstAllPermutations) {
  Rng rng(21);
  const int k = 4;
  const auto d = static_cast<Eigen::Index>(qubit_dim(k));
  Matrix g(d, d);
  for (Eigen::Index r = 0; r < d; ++r)
    for (Eigen::Index c = 0; c < d; ++c) g(r, c) = Complex(rng.normal(), rng.normal());
  const Matrix m = g * g.adjoint();
  Matrix avg = Matrix::Zero(d, d);
  std::vector<int> perm{0, 1, 2, 3};
  int count = 0;
  do {
    avg += permute_qubits(m, k, perm);
    ++count;
  } while (std::next_permutation(perm.begin(), perm.end()));
  avg /= count;
  EXPECT_LT(max_abs(twirl(DensityOperator(k, m, false)).matrix() - avg), 1e-12);
}

// --- protocol --------------------------------------------------------------

TEST(SwapTestStep, SingletIsAlwaysDetected) {
  const auto ens = swap_test_step(initial_ensemble(DensityOperator(2, singlet_power(1))));
  EXPECT_NEAR(ens.weight(1), 1.0, 1e-15);
  EXPECT_NEAR(ens.weight(0), 0.0, 1e-15);
}

TEST(SwapTestStep, SymmetricStateNeverDetects) {
  auto ens = initial_ensemble(DensityOperator::basis_state(2, 0));
  for (int t = 0; t < 10; ++t) ens = swap_test_step(ens);
  EXPECT_NEAR(ens.weight(0), 1.0, 1e-15);
  EXPECT_EQ(ens.steps_applied, 10);
}

TEST(SwapTestStep, HalfDetectionForFourQubitSinglet) {
  Rng rng(1);
  const auto tau = random_sector_state(4, J(0), rng);
  const auto ens = swap_test_step(initial_ensemble(tau));
  EXPECT_NEAR(ens.weight(1), 0.5, 1e-12);
}

TEST(SwapTestStep, OddQubitCountsKeepInertLastBranch) {
  Rng rng(2);
  const auto tau = random_sector_state(3, J(1), rng);
  auto ens = initial_ensemble(tau);
  for (int t = 0; t < 30; ++t) ens = swap_test_step(ens);
  EXPECT_NEAR(ens.total_trace(), 1.0, 1e-12);
  EXPECT_EQ(ens.branches.back().qubits(), 1);
  EXPECT_NEAR(ens.weight(1), 1.0 - std::pow(0.5, 30), 1e-12);
}

TEST(RunProtocol, ZeroStepsReturnsInput) {
  const auto tau = twirl(DensityOperator::basis_state(3, 0b011));
  const auto ens = run_protocol(tau, 0);
  ASSERT_EQ(ens.branches.size(), 2u);
  EXPECT_LT(max_abs(ens.branches[0].matrix() - tau.matrix()), 1e-15);
  EXPECT_EQ(ens.weight(1), 0.0);
}

TEST(RunProtocol, GeometricAbsorptionExamples) {
  Rng rng(4);
  const auto tau1 = random_sector_state(4, J(2), rng);
  EXPECT_NEAR(run_protocol(tau1, 2).weight(1), 5.0 / 9.0, 1e-12);
  const auto tau0 = random_sector_state(4, J(0), rng);
  EXPECT_NEAR(run_protocol(tau0, 3).weight(2), 0.75, 1e-12);
}

TEST(RunProtocol, RejectsNonPermutationInvariantInput) {
  const auto s01 = DensityOperator::basis_state(2, 0b01);
  try {
    run_protocol(s01, 1);
    FAIL() << "expected NotPermutationInvariant";
  } catch (const NotPermutationInvariant& e) {
    // ||s01 - (s01 + s10)/2||_1 = 1
    EXPECT_NEAR(e.distance_to_twirl(), 1.0, 1e-12);
    EXPECT_NE(std::string(e.what()).find("twirl"), std::string::npos);
  }
  EXPECT_THROW(run_protocol(twirl(s01), -1), std::invalid_argument);
}

TEST(RunProtocol, TracePreservedOverManySteps) {
  Rng rng(8);
  const auto tau = random_pi_state(5, rng);
  run_protocol(tau, 40, [](const ProtocolEnsemble& e) {
    EXPECT_NEAR(e.total_trace(), 1.0, 1e-10);
    for (const auto& b : e.branches) EXPECT_EQ(b.validate(), "");
  });
}

TEST(Reconstruct, Examples) {
  Rng rng(6);
  const auto omega = random_pi_state(3, rng);
  EXPECT_LT(max_abs(reconstruct(omega, 0).matrix() - omega.matrix()), 1e-14);
  const auto all = reconstruct(DensityOperator(0, Matrix::Ones(1, 1)), 2);
  EXPECT_LT(max_abs(all.matrix() - twirl(DensityOperator(4, singlet_power(2))).matrix()), 1e-15);
}

// --- Schur channel ---------------------------------------------------------

TEST(SchurChannel, SingletPowerIsAllInSectorZero) {
  const auto out = schur_channel(twirl(DensityOperator(4, singlet_power(2))));
  EXPECT_NEAR(out.sector(J(0)).weight(), 1.0, 1e-12);
  EXPECT_NEAR(out.sector(J(2)).weight(), 0.0, 1e-12);
  EXPECT_NEAR(out.sector(J(4)).weight(), 0.0, 1e-12);
}

TEST(SchurChannel, ProductOfTwoQubits) {
  Matrix rho = Matrix::Zero(2, 2);
  rho(0, 0) = 0.75;
  rho(1, 1) = 0.25;
  const auto out = schur_channel(DensityOperator(2, kron(rho, rho)));
  EXPECT_NEAR(out.sector(J(0)).weight(), 0.1875, 1e-12);
  EXPECT_NEAR(out.sector(J(2)).weight(), 0.8125, 1e-12);
}

TEST(SchurChannel, SymmetricInputStaysOnTop) {
  for (int n = 1; n <= 6; ++n) {
    const auto out = schur_channel(twirl(DensityOperator::basis_state(n, 0)));
    EXPECT_NEAR(out.sector(J(n)).weight(), 1.0, 1e-12) << n;
  }
}

TEST(SchurChannel, WeightsEqualSectorProjections) {
  Rng rng(12);
  for (int n = 2; n <= 6; ++n) {
    const auto sigma = random_pi_state(n, rng);
    const auto out = schur_channel(sigma);
    double total = 0.0;
    for (const auto& s : out.sectors) {
      const double expected = trace_product(sector_projector(n, s.j), sigma.matrix()).real();
      EXPECT_NEAR(s.weight(), expected, 1e-10) << n << " " << s.j.str();
      total += s.weight();
      if (s.weight() < 1e-12) continue;
      const Matrix p = symmetric_projector(s.j.twice());
      const Matrix st = s.state().matrix();
      EXPECT_LT(max_abs(p * st * p - st), 1e-10);
    }
    EXPECT_NEAR(total, 1.0, 1e-10);
  }
}

TEST(SchurChannel, MatrixElementsMatchDirectSandwich) {
  Rng rng(13);
  const int n = 5;
  const auto sigma = random_pi_state(n, rng);
  const auto out = schur_channel(sigma);
  for (const auto& s : out.sectors) {
    const int singlets = (n - s.j.twice()) / 2;
    const double mult = multiplicity(n, s.j).convert_to<double>();
    for (int a = -s.j.twice(); a <= s.j.twice(); a += 2) {
      for (int b = -s.j.twice(); b <= s.j.twice(); b += 2) {
        Vector va = dicke_dense(s.j, a), vb = dicke_dense(s.j, b);
        for (int i = 0; i < singlets; ++i) {
          va = kron(va, singlet_vector());
          vb = kron(vb, singlet_vector());
        }
        const Complex direct = mult * (va.adjoint() * sigma.matrix() * vb)(0, 0);
        const Vector da = dicke_dense(s.j, a), db = dicke_dense(s.j, b);
        const Complex got = (da.adjoint() * s.block.matrix() * db)(0, 0);
        EXPECT_LT(std::abs(got - direct), 1e-12);
      }
    }
  }
}

TEST(SchurChannel, RejectsNonPermutationInvariantInput) {
  EXPECT_THROW(schur_channel(DensityOperator::basis_state(2, 0b01)), NotPermutationInvariant);
}

TEST(RegisterEncoding, IdentityAtTimeZero) {
  Rng rng(14);
  const auto tau = random_sector_state(4, J(0), rng);
  const double d = trace_distance(encode(schur_channel(tau)), encode(run_protocol(tau, 0)));
  EXPECT_NEAR(d, 1.0, 1e-10);
}

// --- trajectories ----------------------------------------------------------

TEST(Trajectory, SymmetricInputNeverDetects) {
  Rng rng(1);
  for (int t = 0; t < 50; ++t) {
    const auto traj = sample_trajectory(DensityOperator::basis_state(4, 0), 10, rng);
    EXPECT_EQ(traj.singlets, 0);
    EXPECT_EQ(traj.log.size(), 10u);
    EXPECT_NEAR(traj.weight(), 1.0, 1e-12);
  }
}

TEST(Trajectory, TwoSingletsMatchExactEnsemble) {
  Rng rng(2);
  const auto tau = twirl(DensityOperator(4, singlet_power(2)));
  const double exact = run_protocol(tau, 3).weight(2);
  EXPECT_NEAR(exact, 0.75, 1e-12);
  int done = 0;
  const int trials = 4000;
  for (int t = 0; t < trials; ++t) {
    const auto traj = sample_trajectory(tau, 3, rng);
    EXPECT_EQ(traj.status, TrajectoryStatus::completed);
    if (traj.singlets == 2) ++done;
  }
  const double sigma = std::sqrt(exact * (1 - exact) / trials);
  EXPECT_NEAR(static_cast<double>(done) / trials, exact, 5 * sigma);
}

TEST(Trajectory, UnpairedSingletsAreDetectedOnlyByMatchingPairs) {
  // xi on (1,2) and (3,4) without twirling: every test on 1-2 or 3-4 fires.
  Rng rng(3);
  const DensityOperator xixi(4, singlet_power(2));
  const auto traj = sample_trajectory(xixi, 1, rng);
  ASSERT_EQ(traj.log.size(), 1u);
  const auto& s = traj.log[0];
  const bool matched = (s.r == 1 && s.s == 2) || (s.r == 3 && s.s == 4);
  if (matched) {
    EXPECT_TRUE(s.detected);
    EXPECT_NEAR(s.probability, 1.0, 1e-12);
  } else {
    EXPECT_NEAR(s.probability, s.detected ? 0.25 : 0.75, 1e-12);
  }
}

TEST(Trajectory, SeedReplaysOutcomeLog) {
  Rng seed_rng(77);
  const auto tau = random_pi_state(5, seed_rng);
  Rng a(123), b(123);
  const auto ta = sample_trajectory(tau, 25, a);
  const auto tb = sample_trajectory(tau, 25, b);
  ASSERT_EQ(ta.log.size(), tb.log.size());
  for (std::size_t i = 0; i < ta.log.size(); ++i) {
    EXPECT_EQ(ta.log[i].r, tb.log[i].r);
    EXPECT_EQ(ta.log[i].s, tb.log[i].s);
    EXPECT_EQ(ta.log[i].detected, tb.log[i].detected);
    EXPECT_EQ(ta.log[i].probability, tb.log[i].probability);
  }
}

TEST(Trajectory, WeightIsProductOfStepProbabilities) {
  Rng rng(31);
  const auto tau = random_pi_state(6, rng);
  for (int t = 0; t < 20; ++t) {
    const auto traj = sample_trajectory(tau, 15, rng);
    double log_w = 0.0;
    for (const auto& s : traj.log) {
      EXPECT_GE(s.probability, 0.0);
      EXPECT_LE(s.probability, 1.0);
      log_w += std::log(s.probability);
    }
    EXPECT_NEAR(traj.log_weight, log_w, 1e-12);
    EXPECT_EQ(traj.state.validate(), "");
  }
}

TEST(Trajectory, DetectionFrequencyMatchesChain) {
  // n = 4 in sector j = 1: Pr(detected by T = 2) = 5/9.
  Rng rng(40);
  const auto tau = random_sector_state(4, J(2), rng);
  const int trials = 20000;
  int hits = 0;
  for (int t = 0; t < trials; ++t) hits += sample_trajectory(tau, 2, rng).singlets;
  const double freq = static_cast<double>(hits) / trials;
  const double sigma = std::sqrt(5.0 / 9.0 * 4.0 / 9.0 / trials);
  EXPECT_NEAR(freq, 5.0 / 9.0, 5 * sigma);
}
