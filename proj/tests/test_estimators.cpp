// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "peach/estimators.hpp"
#include "peach/monte_carlo.hpp"
#include "peach/mse.hpp"

namespace {

using namespace peach;

constexpr double kPt = 3.0;
constexpr double kNoise = 0.5;

Scenario identity_scenario() { return make_identity_scenario({2, 3, 2}, kPt, kNoise); }

Scenario small_scenario(double beta = 0.1, double gamma_db = 5.0, Complex r_t = 0.5,
                        Complex r_r = 0.7) {
  ExponentialScenarioParams p;
  p.dims = {2, 4, 2};
  p.gamma_db = gamma_db;
  p.r_t = r_t;
  p.r_r = r_r;
  p.num_interferers = beta > 0 ? 2 : 0;
  p.beta = beta;
  return make_exponential_scenario(p);
}

ComplexVector random_observation(const Scenario& s, std::uint64_t seed) {
  return sample_trials(s, seed, 0, 1).y.col(0);
}

double rel_diff(const ComplexMatrix& a, const ComplexMatrix& b) { return (a - b).norm() / b.norm(); }

// ---------------------------------------------------------------- MMSE

TEST(Mmse, IdentityScenarioShrinkage) {
  const Scenario s = identity_scenario();
  const ComplexVector y = random_observation(s, 1);
  const ComplexMatrix h = mmse_estimate(s, y);
  const ComplexMatrix want = std::sqrt(kPt) / (kPt + kNoise) * unvectorize(y, 3, 2);
  EXPECT_LE(rel_diff(h, want), 1e-14);
}

TEST(Mmse, ZeroObservation) {
  EXPECT_EQ(mmse_estimate(small_scenario(), ComplexVector::Zero(8)), ComplexMatrix::Zero(4, 2));
}

TEST(Mmse, MatchesDenseInverse) {
  const Scenario s = small_scenario(0.1);
  const ComplexVector y = random_observation(s, 2);
  const ComplexMatrix want = unvectorize(oracle::mmse_gain(s) * y, 4, 2);
  EXPECT_LE(rel_diff(mmse_estimate(s, y), want), 1e-9);
}

TEST(Mmse, RejectsWrongLength) {
  EXPECT_THROW(mmse_estimate(small_scenario(), ComplexVector::Zero(5)), InvalidArgument);
}

TEST(MmseMse, IdentityClosedForm) {
  const Scenario s = identity_scenario();
  EXPECT_NEAR(mmse_mse(s), 6.0 * kNoise / (kPt + kNoise), 1e-12);
  EXPECT_NEAR(SpectralModel(s).mmse_mse(), 6.0 * kNoise / (kPt + kNoise), 1e-12);
}

TEST(MmseMse, MatchesInformationForm) {
  for (double beta : {0.0, 0.1}) {
    const Scenario s = small_scenario(beta);
    const double want = oracle::mmse_mse_information_form(s);
    EXPECT_NEAR(mmse_mse(s), want, 1e-10 * want);
    EXPECT_NEAR(SpectralModel(s).mmse_mse(), want, 1e-10 * want);
  }
}

TEST(MmseMse, NoiselessLimit) {
  const Scenario s = make_identity_scenario({2, 3, 2}, 1e12, 1.0);
  EXPECT_LT(mmse_mse(s) / s.r_trace(), 1e-11);
}

// ----------------------------------------------------------------- MVU

TEST(Mvu, IdentityScenario) {
  const Scenario s = identity_scenario();
  const ComplexVector y = random_observation(s, 3);
  EXPECT_LE(rel_diff(mvu_estimate(s, y), unvectorize(y, 3, 2) / std::sqrt(kPt)), 1e-14);
  EXPECT_NEAR(mvu_variance(s) / s.r_trace(), kNoise / kPt, 1e-14);
}

TEST(Mvu, MatchesDenseInverse) {
  const Scenario s = small_scenario(0.1);
  const ComplexVector y = random_observation(s, 4);
  const ComplexMatrix want = unvectorize(oracle::mvu_gain(s) * y, 4, 2);
  EXPECT_LE(rel_diff(mvu_estimate(s, y), want), 1e-9);
  EXPECT_NEAR(mvu_variance(s), oracle::mvu_variance(s), 1e-10 * oracle::mvu_variance(s));
}

TEST(Mvu, WorseThanMmse) {
  for (double beta : {0.0, 0.1}) {
    for (double g : {-5.0, 5.0, 20.0}) {
      const Scenario s = small_scenario(beta, g);
      EXPECT_LT(mmse_mse(s), mvu_variance(s));
    }
  }
}

TEST(Mvu, Unbiased) {
  const Scenario s = small_scenario(0.1);
  const MvuEstimator est(s);
  ComplexVector bias = ComplexVector::Zero(s.dims().m());
  double scale = 0.0;
  const Index trials = 10000;
  for (Index first = 0; first < trials; first += 500) {
    const TrialBlock tb = sample_trials(s, 17, static_cast<std::uint64_t>(first), 500);
    const ComplexMatrix err = est.apply(tb.y) - tb.h;
    bias += err.rowwise().sum();
    scale += err.squaredNorm();
  }
  bias /= static_cast<double>(trials);
  // Per-entry standard error of the mean error is sqrt(var / trials).
  const double se = std::sqrt(scale / trials / static_cast<double>(s.dims().m()) / trials);
  EXPECT_LE(bias.cwiseAbs().maxCoeff(), 4.0 * se);
}

TEST(Mvu, RejectsRankDeficientPilot) {
  const SystemDims dims{2, 3, 2};
  ComplexMatrix pilot = ComplexMatrix::Zero(2, 2);
  pilot(0, 0) = 1.0;
  pilot(1, 0) = 1.0;
  const Scenario s = Scenario::build(dims, HermitianMatrix::identity(6), pilot, 1.0);
  EXPECT_THROW(MvuEstimator{s}, NumericalError);
  EXPECT_THROW(mvu_variance(s), NumericalError);
}

// --------------------------------------------------------------- alpha

TEST(Alpha, IdentityScenario) {
  const Scenario s = identity_scenario();
  EXPECT_NEAR(alpha_peach(s), 1.0 / (kPt + kNoise), 1e-14);
  EXPECT_NEAR(alpha_peach(s, AlphaRule::trace), 2.0 / (6.0 * (kPt + kNoise)), 1e-14);
  const ComplexMatrix step =
      ComplexMatrix::Identity(6, 6) - alpha_peach(s) * s.d_cov().matrix();
  EXPECT_LE(step.norm(), 1e-14);
}

TEST(Alpha, SpectralRadiusBelowOne) {
  for (double beta : {0.0, 0.1}) {
    const Scenario s = small_scenario(beta, 10.0);
    for (AlphaRule rule : {AlphaRule::extreme_eigenvalue, AlphaRule::trace}) {
      const double a = alpha_peach(s, rule);
      const ComplexMatrix step = ComplexMatrix::Identity(8, 8) - a * s.d_cov().matrix();
      const auto ev = Eigen::ComplexEigenSolver<ComplexMatrix>(step).eigenvalues();
      EXPECT_LT(ev.cwiseAbs().maxCoeff(), 1.0);
      EXPECT_TRUE(neumann_series_converges(s, a));
    }
    const EigenRange er = extreme_eigenvalues(s.d_cov());
    const double a = alpha_peach(s);
    EXPECT_NEAR(1.0 - a * er.min, -(1.0 - a * er.max), 1e-12);
    EXPECT_NEAR(alpha_wpeach(s), 1.0 / er.max, 1e-12 / er.max);
  }
}

// --------------------------------------------------------------- PEACH

TEST(Peach, ZeroRemainderEqualsMmse) {
  const Scenario s = identity_scenario();
  const ComplexVector y = random_observation(s, 5);
  const double a = 1.0 / (kPt + kNoise);
  for (Index l : {0, 1, 4}) {
    EXPECT_LE(rel_diff(peach_estimate(s, y, l, a), mmse_estimate(s, y)), 1e-14);
    EXPECT_NEAR(peach_mse(s, l, a), mmse_mse(s), 1e-12);
  }
}

TEST(Peach, OrderZeroIsScaledProjection) {
  const Scenario s = small_scenario();
  const ComplexVector y = random_observation(s, 6);
  const double a = alpha_peach(s);
  const ComplexMatrix want = unvectorize(a * s.r_cov().matrix() * s.pilot_tilde().adjoint() * y, 4, 2);
  EXPECT_LE(rel_diff(peach_estimate(s, y, 0, a), want), 1e-13);
}

TEST(Peach, MatchesExplicitPolynomial) {
  const Scenario s = small_scenario(0.1);
  const ComplexVector y = random_observation(s, 7);
  const double a = alpha_peach(s);
  for (int l : {1, 3, 6}) {
    const ComplexVector want = s.r_cov().matrix() * s.pilot_tilde().adjoint() *
                               oracle::peach_polynomial(s, l, a) * y;
    EXPECT_LE(rel_diff(vectorize(peach_estimate(s, y, l, a)), want), 1e-12);
  }
}

TEST(Peach, HighOrderConvergesToMmse) {
  const Scenario s = small_scenario(0.1);
  const ComplexVector y = random_observation(s, 8);
  const ComplexMatrix h = peach_estimate(s, y, 256, alpha_peach(s));
  EXPECT_LE(rel_diff(h, mmse_estimate(s, y)), 1e-6);
}

TEST(Peach, ApplyOrdersMatchesSeparateCalls) {
  const Scenario s = small_scenario();
  const ComplexMatrix y = sample_trials(s, 3, 0, 5).y;
  const double a = alpha_peach(s);
  const PeachEstimator est(s, 9, a);
  const Index orders[] = {0, 2, 9};
  const auto many = est.apply_orders(y, orders);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_LE(rel_diff(many[i], PeachEstimator(s, orders[i], a).apply(y)), 1e-14);
  }
}

TEST(Peach, OperationCount) {
  const Scenario s = small_scenario();
  const ComplexMatrix y = sample_trials(s, 3, 0, 4).y;
  for (Index l : {0, 1, 5}) {
    OpCounter ops;
    PeachEstimator(s, l, alpha_peach(s)).apply(y, &ops);
    EXPECT_EQ(ops.d_applications, static_cast<std::uint64_t>(4 * l));
    EXPECT_EQ(ops.projections, 4u);
    EXPECT_EQ(ops.factorizations, 0u);
  }
}

TEST(Peach, WarnsOnDivergentAlpha) {
  const Scenario s = small_scenario();
  std::vector<std::string> warnings;
  const auto prev = set_warning_handler([&](std::string_view m) { warnings.emplace_back(m); });
  const double bad = 2.5 / extreme_eigenvalues(s.d_cov()).max;
  const ComplexMatrix h = peach_estimate(s, random_observation(s, 1), 3, bad);
  set_warning_handler(prev);
  EXPECT_EQ(warnings.size(), 1u);
  EXPECT_TRUE(h.allFinite());
}

TEST(PeachMse, MatchesDenseFormula) {
  for (double beta : {0.0, 0.1}) {
    const Scenario s = small_scenario(beta);
    const double a = alpha_peach(s);
    for (int l : {0, 1, 2, 5, 10}) {
      const double want = oracle::peach_mse(s, l, a);
      EXPECT_NEAR(peach_mse(s, l, a), want, 1e-10 * want) << "L=" << l;
    }
  }
}

TEST(PeachMse, ConvergesGeometrically) {
  const Scenario s = small_scenario(0.1);
  const SpectralModel m(s);
  const double a = alpha_peach(s);
  double prev = m.peach_excess(1, a);
  EXPECT_GT(prev, 0.0);
  for (Index l : {2, 4, 8, 16, 32}) {
    const double gap = m.peach_excess(l, a);
    EXPECT_GT(gap, 0.0);
    EXPECT_LT(gap, prev);
    prev = gap;
  }
  EXPECT_LT(m.peach_excess(64, a), 1e-6 * m.mmse_mse());
}

// -------------------------------------------------------------- W-PEACH

TEST(WeightSystem, IdentityScenarioOrderZero) {
  const Scenario s = identity_scenario();
  const double a = 0.2;
  const WeightSystem sys = wpeach_weight_system(s, 0, a);
  EXPECT_NEAR(sys.a(0, 0), a * a * kPt * (kPt + kNoise) * 6.0, 1e-12);
  EXPECT_NEAR(sys.b(0), a * kPt * 6.0, 1e-12);
}

TEST(WeightSystem, MatchesExplicitPowers) {
  for (double beta : {0.0, 0.1}) {
    const Scenario s = small_scenario(beta);
    const double a = alpha_wpeach(s);
    const WeightSystem sys = wpeach_weight_system(s, 4, a);
    const oracle::WeightSystem want = oracle::weight_system(s, 4, a);
    EXPECT_LT(want.max_imag, 1e-10);
    EXPECT_LE((sys.a - want.a).norm(), 1e-10 * want.a.norm());
    EXPECT_LE((sys.b - want.b).norm(), 1e-10 * want.b.norm());
  }
}

TEST(WeightSystem, HankelStructure) {
  const WeightSystem sys = wpeach_weight_system(small_scenario(0.1, 5.0, Complex(0.3, 0.2)), 4, 0.1);
  for (Index i = 0; i < 5; ++i) {
    for (Index j = 0; j < 5; ++j) {
      if (i + 1 < 5 && j > 0) EXPECT_EQ(sys.a(i, j), sys.a(i + 1, j - 1));
    }
  }
  EXPECT_EQ(sys.a, sys.a.transpose());
}

TEST(WeightSystem, ComplexCorrelationStaysReal) {
  const Scenario s = small_scenario(0.1, 5.0, Complex(0.3, 0.4), Complex(-0.2, 0.6));
  const double a = alpha_wpeach(s);
  const oracle::WeightSystem want = oracle::weight_system(s, 3, a);
  EXPECT_LT(want.max_imag, 1e-10);
  const WeightSystem sys = wpeach_weight_system(s, 3, a);
  EXPECT_LE((sys.a - want.a).norm(), 1e-10 * want.a.norm());
}

TEST(OptimalWeights, IdentityScenarioIsMmse) {
  const Scenario s = identity_scenario();
  const double a = 0.2;
  const WeightVector w = wpeach_weights_optimal(wpeach_weight_system(s, 0, a));
  ASSERT_EQ(w.weights.size(), 1u);
  EXPECT_NEAR(w.weights[0], 1.0 / (a * (kPt + kNoise)), 1e-12);
  const ComplexVector y = random_observation(s, 9);
  EXPECT_LE(rel_diff(wpeach_estimate(s, y, w), mmse_estimate(s, y)), 1e-13);
  EXPECT_NEAR(wpeach_mse(s, w), mmse_mse(s), 1e-12);
}

TEST(OptimalWeights, PerturbationIncreasesMse) {
  const Scenario s = small_scenario(0.1);
  const double a = alpha_wpeach(s);
  const WeightSystem sys = wpeach_weight_system(s, 3, a);
  const WeightVector w = wpeach_weights_optimal(sys);
  const double base = wpeach_mse(sys, s.r_trace(), w);
  for (std::size_t i = 0; i < w.weights.size(); ++i) {
    for (double f : {0.99, 1.01}) {
      WeightVector p = w;
      p.weights[i] *= f;
      EXPECT_GT(wpeach_mse(sys, s.r_trace(), p), base) << i;
    }
  }
}

TEST(OptimalWeights, MatchIterativeMinimizer) {
  const Scenario s = small_scenario(0.1);
  const double a = alpha_wpeach(s);
  const oracle::WeightSystem sys = oracle::weight_system(s, 2, a);
  const oracle::RVec w_ref = oracle::minimize_quadratic(sys);
  const double ref = oracle::quadratic_mse(sys, s.r_trace(), w_ref);
  const WeightVector ldlt = wpeach_weights_optimal(wpeach_weight_system(s, 2, a));
  const WeightVector qr = SpectralModel(s).optimal_weights(2, a);
  for (const WeightVector* w : {&ldlt, &qr}) {
    const oracle::RVec v = Eigen::Map<const oracle::RVec>(w->weights.data(), 3);
    EXPECT_LE((v - w_ref).norm(), 1e-6 * w_ref.norm());
    EXPECT_NEAR(oracle::quadratic_mse(sys, s.r_trace(), v), ref, 1e-9 * ref);
  }
}

TEST(OptimalWeights, NoWorseThanIterativeMinimizerAtHigherOrder) {
  // The system is ill-conditioned here, so compare objective values only.
  const Scenario s = small_scenario(0.1);
  const double a = alpha_wpeach(s);
  const oracle::WeightSystem sys = oracle::weight_system(s, 5, a);
  const double ref = oracle::quadratic_mse(sys, s.r_trace(), oracle::minimize_quadratic(sys));
  const WeightVector qr = SpectralModel(s).optimal_weights(5, a);
  const oracle::RVec v = Eigen::Map<const oracle::RVec>(qr.weights.data(), 6);
  EXPECT_LE(oracle::quadratic_mse(sys, s.r_trace(), v), ref * (1 + 1e-9));
}

TEST(OptimalWeights, SingularSystemRejected) {
  WeightSystem sys;
  sys.a = RealMatrix::Zero(2, 2);
  sys.b = RealVector::Zero(2);
  EXPECT_THROW(wpeach_weights_optimal(sys), NumericalError);
  sys.a = RealMatrix::Ones(2, 2);
  sys.b = RealVector::Ones(2);
  EXPECT_THROW(wpeach_weights_optimal(sys), NumericalError);
}

TEST(OptimalWeights, ZeroChannelRejected) {
  const SystemDims dims{2, 3, 2};
  const Scenario s = Scenario::build(dims, HermitianMatrix::zero(6), build_pilot(dims, 2.0), 1.0);
  EXPECT_THROW(wpeach_weights_optimal(wpeach_weight_system(s, 2, 0.1)), NumericalError);
  EXPECT_THROW(SpectralModel(s).optimal_weights(2, 0.1), NumericalError);
}

TEST(Wpeach, PeachWeightsReproducePeach) {
  const Scenario s = small_scenario(0.1);
  const ComplexVector y = random_observation(s, 10);
  const double a = alpha_peach(s);
  for (Index l : {0, 1, 4, 7}) {
    const ComplexMatrix p = peach_estimate(s, y, l, a);
    EXPECT_LE(rel_diff(wpeach_estimate(s, y, peach_as_weights(l, a)), p), 1e-12) << l;
  }
}

TEST(Wpeach, SingleTerm) {
  const Scenario s = small_scenario();
  const ComplexVector y = random_observation(s, 11);
  const double a = 0.05;
  const ComplexMatrix want = unvectorize(a * s.projector() * y, 4, 2);
  EXPECT_LE(rel_diff(wpeach_estimate(s, y, {a, {1.0}}), want), 1e-14);
}

TEST(Wpeach, MatchesExplicitPolynomial) {
  const Scenario s = small_scenario(0.1);
  const ComplexVector y = random_observation(s, 12);
  const WeightVector w{0.07, {1.5, -0.3, 0.8, 0.1}};
  oracle::Mat poly = oracle::Mat::Zero(8, 8);
  for (int l = 0; l < 4; ++l) {
    poly += w.weights[static_cast<std::size_t>(l)] * std::pow(w.alpha, l + 1) *
            oracle::matrix_power(s.d_cov().matrix(), l);
  }
  const ComplexVector want = s.r_cov().matrix() * s.pilot_tilde().adjoint() * poly * y;
  EXPECT_LE(rel_diff(vectorize(wpeach_estimate(s, y, w)), want), 1e-12);
  EXPECT_NEAR(wpeach_mse(s, w), oracle::linear_estimator_mse(s, s.projector() * poly),
              1e-10 * s.r_trace());
}

TEST(Wpeach, ApplyManyMatchesSingle) {
  const Scenario s = small_scenario();
  const ComplexMatrix y = sample_trials(s, 4, 0, 3).y;
  const std::vector<WeightVector> sets{{0.1, {1.0, 2.0}}, {0.1, {0.5}}, {0.1, {0.3, -0.2, 0.9}}};
  const auto many = WpeachEstimator::apply_many(s, y, sets);
  for (std::size_t i = 0; i < sets.size(); ++i) {
    EXPECT_LE(rel_diff(many[i], WpeachEstimator(s, sets[i]).apply(y)), 1e-13);
  }
  const std::vector<WeightVector> mixed{{0.1, {1.0}}, {0.2, {1.0}}};
  EXPECT_THROW(WpeachEstimator::apply_many(s, y, mixed), InvalidArgument);
}

TEST(WeightVector, Validation) {
  EXPECT_THROW((WeightVector{0.0, {1.0}}.validate()), InvalidArgument);
  EXPECT_THROW((WeightVector{1.0, {}}.validate()), InvalidArgument);
  EXPECT_THROW((WeightVector{1.0, {std::nan("")}}.validate()), InvalidArgument);
  EXPECT_EQ((WeightVector{1.0, {1.0, 2.0, 3.0}}.order()), 2);
}

// ----------------------------------------------------- cross-estimator

TEST(Properties, MmseIsOptimal) {
  for (double beta : {0.0, 0.1}) {
    const Scenario s = small_scenario(beta);
    const SpectralModel m(s);
    const double floor = m.mmse_mse() - 1e-10 * m.mmse_mse();
    EXPECT_GE(mvu_variance(s), floor);
    for (Index l = 0; l <= 12; ++l) {
      EXPECT_GE(m.peach_mse(l, alpha_peach(s)), floor);
      EXPECT_GE(m.wpeach_mse(m.optimal_weights(l, alpha_wpeach(s))), floor);
    }
    EXPECT_GE(m.wpeach_mse({0.1, {3.0, -1.0, 0.2}}), floor);
  }
}

TEST(Properties, NestingAndDominance) {
  for (double beta : {0.0, 0.1}) {
    for (double g : {0.0, 10.0, 30.0}) {
      const Scenario s = small_scenario(beta, g);
      const SpectralModel m(s);
      const double a = alpha_wpeach(s);
      double prev = m.wpeach_mse(m.optimal_weights(0, a));
      for (Index l = 1; l <= 10; ++l) {
        const double cur = m.wpeach_mse(m.optimal_weights(l, a));
        EXPECT_LE(cur, prev + 1e-10 * m.r_trace()) << "L=" << l;
        EXPECT_LE(cur, m.peach_mse(l, a) + 1e-10 * m.r_trace()) << "L=" << l;
        prev = cur;
      }
    }
  }
}

TEST(Properties, Linearity) {
  const Scenario s = small_scenario(0.1);
  const ComplexVector y1 = random_observation(s, 13);
  const ComplexVector y2 = random_observation(s, 14);
  const ComplexVector y12 = y1 + y2;
  const WeightVector w = SpectralModel(s).optimal_weights(3, alpha_wpeach(s));
  const double a = alpha_peach(s);
  EXPECT_LE(rel_diff(mmse_estimate(s, y12), mmse_estimate(s, y1) + mmse_estimate(s, y2)), 1e-13);
  EXPECT_LE(rel_diff(mvu_estimate(s, y12), mvu_estimate(s, y1) + mvu_estimate(s, y2)), 1e-13);
  EXPECT_LE(rel_diff(peach_estimate(s, y12, 3, a), peach_estimate(s, y1, 3, a) + peach_estimate(s, y2, 3, a)),
            1e-13);
  EXPECT_LE(rel_diff(wpeach_estimate(s, y12, w), wpeach_estimate(s, y1, w) + wpeach_estimate(s, y2, w)),
            1e-13);
}

TEST(Properties, MonteCarloAgreesWithAnalytic) {
  const Scenario s = small_scenario(0.1);
  const SpectralModel m(s);
  const double ap = alpha_peach(s);
  const WeightVector w = m.optimal_weights(3, alpha_wpeach(s));
  const MmseEstimator e0(s);
  const MvuEstimator e1(s);
  const PeachEstimator e2(s, 3, ap);
  const WpeachEstimator e3(s, w);
  const auto mc = monte_carlo_bank(
      s, 4,
      [&](const ComplexMatrix& y, std::vector<ComplexMatrix>& out) {
        out[0] = e0.apply(y);
        out[1] = e1.apply(y);
        out[2] = e2.apply(y);
        out[3] = e3.apply(y);
      },
      10000, 2024);
  const double want[] = {m.mmse_mse(), mvu_variance(s), m.peach_mse(3, ap), m.wpeach_mse(w)};
  for (int i = 0; i < 4; ++i) {
    EXPECT_NEAR(mc[i].mse, want[i], 0.03 * want[i]) << i;
    EXPECT_NEAR(mc[i].mse, want[i], 4.0 * mc[i].std_error) << i;
  }
}

}  // namespace
