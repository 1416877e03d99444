#include <cmath>

#include <gtest/gtest.h>

#include "swapschur/purify.hpp"
#include "swapschur/sim.hpp"

using namespace swapschur;
using namespace swapschur::purify;

namespace {

HalfSpin J(int two_j) { return HalfSpin::from_twice(two_j); }

/// Haar-ish 2x2 unitary from the QR of a Gaussian matrix.
Eigen::Matrix2cd random_unitary(Rng& rng) {
  Eigen::Matrix2cd g;
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) g(r, c) = Complex(rng.normal(), rng.normal());
  Eigen::HouseholderQR<Eigen::Matrix2cd> qr(g);
  return qr.householderQ();
}

Matrix tensor_power(const Matrix& a, int n) {
  Matrix out = Matrix::Ones(1, 1);
  for (int i = 0; i < n; ++i) out = kron(out, a);
  return out;
}

}  // namespace

TEST(NoiseModel, Validation) {
  EXPECT_THROW(NoiseModel(-0.1), std::invalid_argument);
  EXPECT_THROW(NoiseModel(1.5), std::invalid_argument);
  EXPECT_THROW(NoiseModel(std::nan("")), std::invalid_argument);
  EXPECT_DOUBLE_EQ(NoiseModel(0.5).single_copy_fidelity(), 0.75);
}

TEST(SectorStats, TwoQubitExamples) {
  const auto s = sector_stats(2, NoiseModel(0.5));
  EXPECT_NEAR(s.at(J(0)).weight, 0.1875, 1e-15);
  EXPECT_NEAR(s.at(J(2)).weight, 0.8125, 1e-15);
  EXPECT_NEAR(s.at(J(2)).fidelity, 0.8076923076923077, 1e-14);
  EXPECT_EQ(s.at(J(0)).fidelity, 0.5);
}

TEST(SectorStats, FourQubitExamples) {
  const auto s = sector_stats(4, NoiseModel(0.5));
  EXPECT_NEAR(s.at(J(0)).weight, 0.0703125, 1e-15);
  EXPECT_NEAR(s.at(J(2)).weight, 0.45703125, 1e-15);
  EXPECT_NEAR(s.at(J(4)).weight, 0.47265625, 1e-15);
  EXPECT_NEAR(s.at(J(4)).fidelity, 0.8801652892561984, 1e-14);
  EXPECT_NEAR(s.at(J(2)).fidelity, 0.8076923076923077, 1e-14);
}

TEST(SectorStats, PureAndMaximallyMixedLimits) {
  for (int n = 1; n <= 9; ++n) {
    const auto pure = sector_stats(n, NoiseModel(0.0));
    EXPECT_EQ(pure.at(J(n)).weight, 1.0);
    EXPECT_NEAR(pure.at(J(n)).fidelity, 1.0, 1e-15);
    for (const auto& r : pure.rows) {
      if (r.j.twice() != n) EXPECT_EQ(r.weight, 0.0);
    }
    const auto mixed = sector_stats(n, NoiseModel(1.0));
    EXPECT_NEAR(mixed.total_weight(), 1.0, 1e-12);
    for (const auto& r : mixed.rows) EXPECT_EQ(r.fidelity, 0.5);
  }
}

TEST(SectorStats, SumRulesAtLargeN) {
  for (int n : {10, 101, 1000, 10000}) {
    for (double p : {0.1, 0.5, 0.9}) {
      const auto s = sector_stats(n, NoiseModel(p));
      EXPECT_NEAR(s.total_weight(), 1.0, 1e-9) << n << " " << p;
      if (n <= 1000) {
        const double target = n * (1.0 - p) / 2.0;
        EXPECT_NEAR(s.jz_sum() / target, 1.0, 1e-9) << n << " " << p;
      }
      for (const auto& r : s.rows) {
        EXPECT_TRUE(std::isfinite(r.fidelity));
        EXPECT_GE(r.fidelity, 0.5 - 1e-12);
        EXPECT_LE(r.fidelity, 1.0 + 1e-12);
      }
    }
  }
}

TEST(SectorStats, MatchesDenseSchurChannel) {
  for (int n = 1; n <= 6; ++n) {
    for (double p : {0.1, 0.5, 0.9}) {
      const auto stats = sector_stats(n, NoiseModel(p));
      const auto out = sim::schur_channel(sim::depolarized_product(n, p));
      for (const auto& sec : out.sectors) {
        const auto& row = stats.at(sec.j);
        EXPECT_NEAR(sec.weight(), row.weight, 1e-9) << n << " " << sec.j.str();
        if (sec.j.twice() == 0 || sec.weight() < 1e-12) continue;
        const auto marg = single_qubit_marginal(sec.state().matrix(), sec.j.twice(), 1);
        EXPECT_NEAR(marg(0, 0).real(), row.fidelity, 1e-9) << n << " " << sec.j.str();
      }
    }
  }
}

TEST(SectorStats, CovariantUnderCommonUnitary) {
  Rng rng(17);
  const double p = 0.35;
  for (int n = 2; n <= 5; ++n) {
    const Eigen::Matrix2cd u = random_unitary(rng);
    Eigen::Matrix2cd rho = Eigen::Matrix2cd::Zero();
    rho(0, 0) = 1.0 - p / 2.0;
    rho(1, 1) = p / 2.0;
    const Matrix rho_u = u * rho * u.adjoint();
    const Eigen::Vector2cd psi = u.col(0);
    const auto out = sim::schur_channel(DensityOperator(n, tensor_power(rho_u, n)));
    const auto stats = sector_stats(n, NoiseModel(p));
    for (const auto& sec : out.sectors) {
      EXPECT_NEAR(sec.weight(), stats.at(sec.j).weight, 1e-9);
      if (sec.j.twice() == 0) continue;
      const auto marg = single_qubit_marginal(sec.state().matrix(), sec.j.twice(), 1);
      EXPECT_NEAR((psi.adjoint() * marg * psi)(0, 0).real(), stats.at(sec.j).fidelity, 1e-9);
    }
  }
}

TEST(FOpt, Examples) {
  EXPECT_NEAR(f_opt(4, NoiseModel(0.5)), 0.8203125, 1e-12);
  EXPECT_NEAR(f_opt(2, NoiseModel(0.5)), 0.75, 1e-15);
  EXPECT_NEAR(f_opt(7, NoiseModel(0.0)), 1.0, 1e-15);
  EXPECT_NEAR(f_opt_asymptotic(10, NoiseModel(0.5)), 1.0 - 0.5 / (2 * 10 * 0.25), 1e-15);
}

TEST(FOpt, AsymptoticDifferenceIsSecondOrder) {
  const NoiseModel noise(0.5);
  double prev = 0.0;
  for (int n : {100, 200, 400, 800}) {
    const double scaled = n * double(n) * std::abs(f_opt(n, noise) - f_opt_asymptotic(n, noise));
    EXPECT_GT(scaled, 0.0);
    if (prev > 0.0) {
      EXPECT_LT(scaled / prev, 2.0);
      EXPECT_GT(scaled / prev, 0.5);
    }
    prev = scaled;
  }
}

TEST(FidelityCurve, Examples) {
  for (const auto& row : fidelity_curve(2, NoiseModel(0.5), 30).rows) {
    EXPECT_NEAR(row.fidelity, 0.75, 1e-15);
  }
  const auto c4 = fidelity_curve(4, NoiseModel(0.5), 10);
  EXPECT_NEAR(c4.rows[0].fidelity, 0.75, 1e-12);
  EXPECT_NEAR(c4.rows[10].fidelity, 0.819093173677793, 1e-12);
  EXPECT_NEAR(c4.f_opt, 0.8203125, 1e-12);
  EXPECT_NEAR(fidelity_curve(6, NoiseModel(0.3), 5).rows[5].fidelity, 0.9116539760277778, 1e-12);
  for (const auto& row : fidelity_curve(5, NoiseModel(0.0), 20).rows) {
    EXPECT_NEAR(row.fidelity, 1.0, 1e-14);
  }
}

TEST(FidelityCurve, MonotoneAndBounded) {
  for (double p : {0.2, 0.5, 0.8}) {
    const int n = 100;
    const auto c = fidelity_curve(n, NoiseModel(p), 4000);
    EXPECT_NEAR(c.rows[0].fidelity, 1.0 - p / 2.0, 1e-9);
    EXPECT_NEAR(c.marker, n * std::log(100.0), 1e-12);
    for (std::size_t t = 0; t < c.rows.size(); ++t) {
      const auto& r = c.rows[t];
      if (t > 0) EXPECT_GE(r.fidelity, c.rows[t - 1].fidelity - 1e-15);
      EXPECT_LE(r.fidelity, c.f_opt + 1e-12);
      EXPECT_LE(c.f_opt - r.fidelity, r.eps_gap + 1e-12);
      if (r.exp_gap.in_regime) EXPECT_LE(c.f_opt - r.fidelity, r.exp_gap.value);
    }
    EXPECT_LT(c.f_opt - c.rows.back().fidelity, 1e-6);
  }
}

TEST(GapBounds, Examples) {
  const auto g = fidelity_gap_bounds(100, NoiseModel(0.5), 1000);
  EXPECT_NEAR(g.exp_bound.value, 100 * std::exp(-5.0), 1e-12);
  EXPECT_TRUE(g.exp_bound.in_regime);
  EXPECT_LE(g.gap, g.eps_bound + 1e-15);
  EXPECT_GE(g.gap, 0.0);
}

TEST(Childs, Examples) {
  const auto r = childs_comparison(NoiseModel(0.5), 0.01);
  EXPECT_NEAR(r.n_ours, 100.0, 1e-12);
  EXPECT_EQ(r.swap_tests, static_cast<std::int64_t>(std::ceil(200 * std::log(20000.0))));
  EXPECT_NEAR(r.n_baseline, 363000.0 * std::pow(2.0, 8 * std::log(2.0)), 1e-6);
  EXPECT_THROW(childs_comparison(NoiseModel(0.0), 0.1), std::invalid_argument);
  EXPECT_THROW(childs_comparison(NoiseModel(0.5), 1.0), std::invalid_argument);
}

TEST(Childs, SlopesOverDefaultGrid) {
  std::vector<ChildsRow> rows;
  for (double p : default_childs_grid()) rows.push_back(childs_comparison(NoiseModel(p), 0.01));
  ASSERT_EQ(rows.size(), 5u);
  const auto fit = fit_childs_slopes(rows);
  EXPECT_NEAR(fit.ours, -2.0, 0.1);
  EXPECT_NEAR(fit.baseline, -8 * std::log(2.0), 1e-9);
  EXPECT_THROW(fit_childs_slopes({rows[0]}), std::invalid_argument);
}

TEST(McFidelity, PureInputIsExact) {
  Rng rng(1);
  const auto est = mc_fidelity(4, NoiseModel(0.0), 10, 200, rng);
  EXPECT_NEAR(est.mean, 1.0, 1e-12);
}

TEST(McFidelity, NoTestsGiveSingleCopyFidelity) {
  Rng rng(2);
  const auto est = mc_fidelity(3, NoiseModel(0.5), 0, 20000, rng);
  EXPECT_NEAR(est.mean, 0.75, 5 * est.std_error);
}

TEST(McFidelity, MatchesAnalyticCurve) {
  Rng rng(3);
  const auto est = mc_fidelity(4, NoiseModel(0.5), 10, 20000, rng);
  EXPECT_EQ(est.trials, 20000);
  EXPECT_NEAR(est.mean, 0.819093173677793, 5 * est.std_error);
}

TEST(McFidelity, Validation) {
  Rng rng(4);
  EXPECT_THROW(mc_fidelity(9, NoiseModel(0.5), 1, 1, rng), std::invalid_argument);
  EXPECT_THROW(mc_fidelity(4, NoiseModel(0.5), 1, 0, rng), std::invalid_argument);
}
