#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fqc/imperfect.hpp"
#include "fqc/protocol.hpp"
#include "test_support.hpp"

using namespace fqc;

namespace {

const double h = 1.0 / std::sqrt(2.0);

// One photon pair of the given polarizations and an atom in |+>, through a
// single perturbed parity check. Returns the probability the atom is still |+>.
double atom_unchanged(std::size_t p, std::size_t q, double sigma) {
  const RegisterLayout layout({"p", "q", "atom"});
  std::vector<Complex> amps(8);
  amps[p | q << 1] = h;
  amps[p | q << 1 | 4] = h;
  const auto out = parity_check(StateVector(layout, amps), "p", "q", "atom", perturbed_phases(sigma));
  return project_qubit(out, "atom", basis::plus).probability;
}

ImperfectionParams imperfections(double eta, double sigma, LeakModel m = LeakModel::single) {
  ImperfectionParams p;
  p.eta_a = eta;
  p.sigma = sigma;
  p.leak_model = m;
  return p;
}

} // namespace

TEST(Detection, CubicScaling) {
  EXPECT_DOUBLE_EQ(detection_scaled_ptotal(0.25, 1.0), 0.25);
  EXPECT_NEAR(detection_scaled_ptotal(1.0, 0.66), 0.287496, 1e-15);
  EXPECT_NEAR(detection_scaled_ptotal(0.25, 0.5), 0.03125, 1e-15);
  EXPECT_EQ(detection_scaled_ptotal(0.25, 0.0), 0.0);
}

TEST(Leak, Examples) {
  EXPECT_EQ(leak_probability(0.0), 0.0);
  EXPECT_NEAR(leak_probability(pi / 2.0), 1.0, 1e-15);
  EXPECT_NEAR(leak_probability(pi / 4.0), 0.5, 1e-15);
  EXPECT_NEAR(leak_probability(0.05), 0.0024979173609871, 1e-15);
  EXPECT_NEAR(leak_probability(-0.3), leak_probability(0.3), 1e-16);
  EXPECT_NEAR(stage_leak_probability(0.3, 1), leak_probability(0.3), 1e-16);
  const double pe = leak_probability(0.3);
  EXPECT_NEAR(stage_leak_probability(0.3, 2), 2.0 * pe - pe * pe, 1e-15);
}

TEST(Leak, EvenPairThroughPerturbedCheck) {
  for (int k = 0; k < 10; ++k) {
    const double sigma = -0.7 + 0.15 * k;
    const double expected = std::pow(std::sin(sigma), 2);
    EXPECT_NEAR(atom_unchanged(basis::R, basis::R, sigma), expected, 1e-12) << sigma;
    EXPECT_NEAR(atom_unchanged(basis::L, basis::L, sigma), expected, 1e-12) << sigma;
    // Odd pairs are unaffected by the angle error.
    EXPECT_NEAR(atom_unchanged(basis::R, basis::L, sigma), 1.0, 1e-12);
    EXPECT_NEAR(atom_unchanged(basis::L, basis::R, sigma), 1.0, 1e-12);
  }
}

TEST(Degrade, Examples) {
  EXPECT_EQ(degraded_parity_probability(0.4, 0.0), 0.4);
  EXPECT_NEAR(degraded_parity_probability(0.0, pi / 4.0), 0.5, 1e-15);
  EXPECT_NEAR(degraded_parity_probability(1.0, 0.4), 1.0, 1e-15);
  EXPECT_NEAR(degraded_parity_probability(0.5, pi / 6.0), 0.5 + 0.5 * 0.25, 1e-15);
}

TEST(Degrade, MonotoneInSigmaAndP) {
  for (double p : {0.0, 0.2, 0.5, 0.9}) {
    double prev = degraded_parity_probability(p, 0.0);
    for (double s = 0.05; s < pi / 2.0; s += 0.05) {
      const double cur = degraded_parity_probability(p, s);
      EXPECT_GE(cur, prev);
      EXPECT_GE(cur, p);
      prev = cur;
    }
  }
  for (double s : {0.1, 0.5, 1.0}) {
    double prev = -1.0;
    for (double p = 0.0; p <= 1.0; p += 0.05) {
      const double cur = degraded_parity_probability(p, s);
      EXPECT_GT(cur, prev);
      prev = cur;
    }
  }
}

TEST(Invert, RoundTrip) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> up(0.0, 1.0), us(-1.0, 1.0);
  for (int k = 0; k < 1000; ++k) {
    const double p = up(rng), s = us(rng);
    EXPECT_NEAR(invert_parity_probability(degraded_parity_probability(p, s), s), p, 1e-12);
  }
}

TEST(Invert, Errors) {
  EXPECT_THROW(invert_parity_probability(0.9, pi / 2.0), NonInvertibleError);
  EXPECT_THROW(invert_parity_probability(0.01, 0.3), InconsistentObservation);
  // Just below the floor by rounding is clamped, not rejected.
  const double pe = leak_probability(0.3);
  EXPECT_EQ(invert_parity_probability(pe - 1e-12, 0.3), 0.0);
  EXPECT_EQ(invert_parity_probability(1.0, 0.3), 1.0);
}

TEST(Imperfections, Validation) {
  EXPECT_THROW(imperfections(-0.1, 0.0).validate(), OutOfRangeError);
  EXPECT_THROW(imperfections(1.1, 0.0).validate(), OutOfRangeError);
  EXPECT_THROW(imperfections(std::nan(""), 0.0).validate(), OutOfRangeError);
  EXPECT_THROW(imperfections(0.5, INFINITY).validate(), OutOfRangeError);
  EXPECT_NO_THROW(imperfections(0.0, 2.0).validate());
  EXPECT_TRUE(imperfections(1.0, 0.5).warnings().empty());
  EXPECT_EQ(imperfections(1.0, 0.8).warnings().size(), 1u);
  EXPECT_EQ(imperfections(1.0, -0.8).warnings().size(), 1u);
}

TEST(Stages, DegradeCorrectRoundTrip) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> up(0.0, 1.0), us(-1.0, 1.0), ue(0.05, 1.0);
  for (auto m : {LeakModel::single, LeakModel::compounded}) {
    for (int k = 0; k < 500; ++k) {
      const auto imp = imperfections(ue(rng), us(rng), m);
      const double p1 = up(rng), p2 = up(rng);
      const auto obs = degrade_stages(p1, p2, imp);
      const auto back = correct_stages(obs.p1, obs.p2, imp);
      EXPECT_NEAR(back.p1, p1, 1e-10);
      EXPECT_NEAR(back.p2, p2, 1e-10);
      EXPECT_NEAR(recover_concurrence(obs.p1, obs.p2, imp),
                  std::min(1.0, 2.0 * std::sqrt(p1 * p2)), 1e-10);
    }
  }
}

TEST(Stages, DetectionOnlyIsPureScaling) {
  const auto imp = imperfections(0.66, 0.0);
  const auto obs = degrade_stages(0.5, 0.5, imp);
  EXPECT_NEAR(obs.p1 * obs.p2, detection_scaled_ptotal(0.25, 0.66), 1e-15);
  EXPECT_NEAR(recover_concurrence(obs.p1, obs.p2, imp), 1.0, 1e-12);
}

TEST(Stages, ZeroEfficiencyIsNotInvertible) {
  EXPECT_THROW(correct_stages(0.0, 0.0, imperfections(0.0, 0.0)), NonInvertibleError);
  EXPECT_THROW(recover_concurrence(0.1, 0.1, imperfections(1.0, pi / 2.0)), NonInvertibleError);
}

TEST(Stages, CompoundedUsesLargerLeak) {
  const auto single = degrade_stages(0.3, 0.3, imperfections(1.0, 0.2));
  const auto both = degrade_stages(0.3, 0.3, imperfections(1.0, 0.2, LeakModel::compounded));
  EXPECT_GT(both.p1, single.p1);
  EXPECT_EQ(both.p2, single.p2);
  EXPECT_EQ(stage1_leak_atoms(LeakModel::single), 1);
  EXPECT_EQ(stage1_leak_atoms(LeakModel::compounded), 2);
}

// The protocol under a perturbed rotation differs from the two-stage leak
// model at order sigma^2: halving sigma should cut the deviation by about 4.
TEST(Stages, ModelDeviationVanishesWithSigma) {
  std::mt19937_64 rng(3);
  for (int k = 0; k < 20; ++k) {
    const auto s = fqc::testing::random_state(rng);
    const auto ideal = run_analytic(s, ideal_phases());
    double prev = INFINITY;
    for (double sigma : {0.1, 0.05, 0.025, 0.0125}) {
      const auto full = run_analytic(s, perturbed_phases(sigma));
      const auto model = degrade_stages(ideal.p1, ideal.p2, imperfections(1.0, sigma));
      const double dev = std::max(std::abs(full.p1 - model.p1), std::abs(full.p2 - model.p2));
      EXPECT_LT(dev, prev) << sigma;
      if (std::isfinite(prev)) {
        EXPECT_GT(prev / dev, 3.5) << sigma;
        EXPECT_LT(prev / dev, 4.5) << sigma;
      }
      prev = dev;
    }
  }
}
