#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fqc/oracle.hpp"
#include "fqc/protocol.hpp"
#include "test_support.hpp"

using namespace fqc;
using fqc::testing::random_state;

namespace {

const Complex I{0.0, 1.0};
const double h = 1.0 / std::sqrt(2.0);

std::size_t photons(std::size_t a1, std::size_t a2, std::size_t b1, std::size_t b2) {
  return a1 | a2 << 1 | b1 << 2 | b2 << 3;
}

} // namespace

TEST(PrepareJoint, ProductInput) {
  const auto s = prepare_joint({1.0, 0.0, 0.0, 0.0});
  const double atoms = 1.0 / std::sqrt(8.0);
  for (std::size_t i = 0; i < s.dimension(); ++i) {
    const double expected = (i & 0xF) == 0 ? atoms : 0.0;
    EXPECT_NEAR(std::abs(s[i]), expected, 1e-15) << i;
  }
}

TEST(PrepareJoint, BellInput) {
  // Pairs (a1, b1) and (a2, b2) each in (|RR> + |LL>)/sqrt2.
  const auto s = prepare_joint(TwoPhotonState::bell());
  const std::size_t R = basis::R, L = basis::L;
  const std::size_t terms[] = {photons(R, R, R, R), photons(R, L, R, L), photons(L, R, L, R),
                               photons(L, L, L, L)};
  const double amp = 0.5 / std::sqrt(8.0);
  for (std::size_t i = 0; i < s.dimension(); ++i) {
    const bool present = std::find(std::begin(terms), std::end(terms), i & 0xF) != std::end(terms);
    EXPECT_NEAR(s[i].real(), present ? amp : 0.0, 1e-15) << i;
    EXPECT_NEAR(s[i].imag(), 0.0, 1e-15);
  }
}

TEST(PrepareJoint, SixteenTermExpansion) {
  std::mt19937_64 rng(1);
  const auto st = random_state(rng);
  const auto s = prepare_joint(st);
  EXPECT_NEAR(s.norm_squared(), 1.0, 1e-10);
  const double atoms = 1.0 / std::sqrt(8.0);
  const std::size_t R = basis::R, L = basis::L;
  // A few terms written out by hand.
  EXPECT_LT(std::abs(s[photons(R, L, R, L)] - st.alpha * st.delta * atoms), 1e-15);
  EXPECT_LT(std::abs(s[photons(L, R, L, R)] - st.alpha * st.delta * atoms), 1e-15);
  EXPECT_LT(std::abs(s[photons(R, L, L, R)] - st.beta * st.gamma * atoms), 1e-15);
  EXPECT_LT(std::abs(s[photons(R, R, L, L)] - st.beta * st.beta * atoms), 1e-15);
  EXPECT_LT(std::abs(s[photons(L, L, R, R)] - st.gamma * st.gamma * atoms), 1e-15);
  for (std::size_t a1 : {R, L})
    for (std::size_t a2 : {R, L})
      for (std::size_t b1 : {R, L})
        for (std::size_t b2 : {R, L})
          for (std::size_t at = 0; at < 8; ++at)
            EXPECT_LT(std::abs(s[photons(a1, a2, b1, b2) | at << 4] -
                               st.amplitude(a1, b1) * st.amplitude(a2, b2) * atoms),
                      1e-15);
}

TEST(PrepareJoint, RejectsUnnormalized) {
  EXPECT_THROW(prepare_joint({1.0, 1.0, 0.0, 0.0}), ConfigError);
}

TEST(ParityCheck, OddPairLeavesAtom) {
  // |RL> on both copies, so a1 b1 = R L is odd: atom1 unchanged, global -i.
  const auto in = prepare_joint({0.0, 1.0, 0.0, 0.0});
  const auto out = parity_check(in, labels::a1, labels::b1, labels::atom1, ideal_phases());
  for (std::size_t i = 0; i < in.dimension(); ++i)
    EXPECT_LT(std::abs(out[i] - (-I) * in[i]), 1e-12);
  EXPECT_NEAR(out.norm_squared(), 1.0, 1e-10);
}

TEST(ParityCheck, EvenPairFlipsAtom) {
  const auto in = prepare_joint({1.0, 0.0, 0.0, 0.0});
  const auto out = parity_check(in, labels::a1, labels::a2, labels::atom1, ideal_phases());
  const auto p = project_qubit(out, labels::atom1, basis::minus);
  EXPECT_NEAR(p.probability, 1.0, 1e-12);
  // |RR>(|gL> + |gR>) -> |RR>(-|gL> + |gR>)
  const double amp = 1.0 / std::sqrt(8.0);
  EXPECT_LT(std::abs(out[0] - Complex{-amp}), 1e-12);
  EXPECT_LT(std::abs(out[std::size_t{1} << 4] - Complex{amp}), 1e-12);
}

TEST(ParityCheck, PerturbedEvenPair) {
  const double sigma = 0.3;
  const auto ph = perturbed_phases(sigma);
  const RegisterLayout layout({"p", "q", "atom"});
  const std::size_t LL = basis::L | basis::L << 1;
  std::vector<Complex> amps(8);
  amps[LL] = h;
  amps[LL | 4] = h;
  const auto out = parity_check(StateVector(layout, amps), "p", "q", "atom", ph);
  const Complex g0 = std::exp(2.0 * I * ph.phi0);
  EXPECT_LT(std::abs(out[LL] - g0 * (-std::exp(2.0 * I * sigma)) * h), 1e-12);
  EXPECT_LT(std::abs(out[LL | 4] - g0 * h), 1e-12);
}

TEST(RunAnalytic, BellState) {
  const auto o = run_analytic(TwoPhotonState::bell(), ideal_phases());
  EXPECT_NEAR(o.p1, 0.5, 1e-10);
  EXPECT_NEAR(o.p2, 0.5, 1e-10);
  EXPECT_NEAR(o.p_total, 0.25, 1e-10);
  EXPECT_NEAR(o.c_estimate, 1.0, 1e-10);
}

TEST(RunAnalytic, ProductStateNeverPasses) {
  const auto o = run_analytic({1.0, 0.0, 0.0, 0.0}, ideal_phases());
  EXPECT_EQ(o.p1, 0.0);
  EXPECT_EQ(o.p2, 0.0);
  EXPECT_EQ(o.p_total, 0.0);
  EXPECT_EQ(o.c_estimate, 0.0);
  EXPECT_FALSE(o.final_state);
}

TEST(RunAnalytic, PartiallyEntangled) {
  // p1 = 2(0.48)^2 = 0.4608, p2 = 0.2304 / 0.4608 = 0.5.
  const auto o = run_analytic({0.8, 0.0, 0.0, 0.6}, ideal_phases());
  EXPECT_NEAR(o.p1, 0.4608, 1e-10);
  EXPECT_NEAR(o.p2, 0.5, 1e-10);
  EXPECT_NEAR(o.p_total, 0.2304, 1e-10);
  EXPECT_NEAR(o.c_estimate, 0.96, 1e-10);
  EXPECT_NEAR(concurrence_pure({0.8, 0.0, 0.0, 0.6}), 0.96, 1e-15);
}

TEST(RunAnalytic, OddParityBellState) {
  const auto o = run_analytic({0.0, h, h, 0.0}, ideal_phases());
  EXPECT_NEAR(o.p_total, 0.25, 1e-10);
  EXPECT_NEAR(o.c_estimate, 1.0, 1e-10);
}

TEST(RunAnalytic, SingletHasFullConcurrence) {
  const auto o = run_analytic({0.0, h, -h, 0.0}, ideal_phases());
  EXPECT_NEAR(o.p1, 0.5, 1e-10);
  EXPECT_NEAR(o.p_total, 0.25, 1e-10);
}

TEST(RunAnalytic, OutcomeInvariants) {
  std::mt19937_64 rng(2);
  for (int k = 0; k < 200; ++k) {
    const auto o = run_analytic(random_state(rng), ideal_phases());
    EXPECT_EQ(o.p_total, o.p1 * o.p2);
    EXPECT_NEAR(o.c_estimate, 2.0 * std::sqrt(o.p_total), 1e-12);
    for (double p : {o.p1, o.p2, o.p_total}) {
      EXPECT_GE(p, 0.0);
      EXPECT_LE(p, 1.0);
    }
  }
}

TEST(RunAnalytic, MatchesOracleAndClosedForm) {
  std::mt19937_64 rng(3);
  for (int k = 0; k < 1000; ++k) {
    const auto s = random_state(rng);
    const auto sim = run_analytic(s, ideal_phases());
    const auto closed = closed_form_outcome(s);
    EXPECT_NEAR(sim.c_estimate, concurrence_pure(s), 1e-10);
    EXPECT_NEAR(sim.p1, closed.p1, 1e-10);
    EXPECT_NEAR(sim.p2, closed.p2, 1e-10);
    EXPECT_NEAR(sim.p_total, closed.p_total, 1e-10);
  }
}

TEST(RunAnalytic, FinalStateForm) {
  std::mt19937_64 rng(4);
  const auto target = odd_parity_target();
  EXPECT_NEAR(target.norm_squared(), 1.0, 1e-12);
  for (int k = 0; k < 200; ++k) {
    const auto o = run_analytic(random_state(rng), ideal_phases());
    if (o.p_total <= 1e-12)
      continue;
    ASSERT_TRUE(o.final_state);
    EXPECT_NEAR(fidelity(target, *o.final_state), 1.0, 1e-10);
  }
}

TEST(RunAnalytic, GlobalPhaseInvariance) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> angle(-pi, pi);
  for (int k = 0; k < 100; ++k) {
    const auto s = random_state(rng);
    const Complex e = std::polar(1.0, angle(rng));
    const auto a = run_analytic(s, ideal_phases());
    const auto b = run_analytic({e * s.alpha, e * s.beta, e * s.gamma, e * s.delta}, ideal_phases());
    EXPECT_NEAR(a.p1, b.p1, 1e-12);
    EXPECT_NEAR(a.p2, b.p2, 1e-12);
    EXPECT_NEAR(a.p_total, b.p_total, 1e-12);
  }
}

TEST(RunAnalytic, SwapSymmetry) {
  std::mt19937_64 rng(6);
  for (int k = 0; k < 100; ++k) {
    const auto s = random_state(rng);
    const auto a = run_analytic(s, ideal_phases());
    const auto b = run_analytic({s.alpha, s.gamma, s.beta, s.delta}, ideal_phases());
    EXPECT_NEAR(a.p_total, b.p_total, 1e-12);
  }
}

TEST(RunAnalytic, ZeroStageOneMeansZeroConcurrence) {
  // p1 = 0 forces alpha delta = 0 and beta gamma = 0.
  const TwoPhotonState cases[] = {{1.0, 0.0, 0.0, 0.0}, {0.0, 1.0, 0.0, 0.0},
                                  {h, h, 0.0, 0.0},      {0.0, 0.0, h, h * I},
                                  {0.6, 0.0, 0.8, 0.0}};
  for (const auto &s : cases) {
    const auto o = run_analytic(s, ideal_phases());
    EXPECT_EQ(o.p1, 0.0);
    EXPECT_EQ(o.c_estimate, 0.0);
    EXPECT_EQ(concurrence_pure(s), 0.0);
  }
}

TEST(ClosedForm, Examples) {
  const auto bell = closed_form_outcome(TwoPhotonState::bell());
  EXPECT_NEAR(bell.p1, 0.5, 1e-15);
  EXPECT_NEAR(bell.p2, 0.5, 1e-15);
  EXPECT_NEAR(bell.p_total, 0.25, 1e-15);
  ASSERT_TRUE(bell.final_state);

  const auto single = closed_form_outcome({0.0, 1.0, 0.0, 0.0});
  EXPECT_EQ(single.p1, 0.0);
  EXPECT_EQ(single.p2, 0.0);
  EXPECT_EQ(single.p_total, 0.0);
  EXPECT_FALSE(single.final_state);
}

TEST(ConcurrenceFromPtotal, Examples) {
  EXPECT_DOUBLE_EQ(concurrence_from_ptotal(0.25), 1.0);
  EXPECT_EQ(concurrence_from_ptotal(0.0), 0.0);
  EXPECT_NEAR(concurrence_from_ptotal(0.01), 0.2, 1e-15);
  EXPECT_EQ(concurrence_from_ptotal(0.25 + 5e-10), 1.0);
  EXPECT_THROW(concurrence_from_ptotal(0.26), OutOfRangeError);
  EXPECT_THROW(concurrence_from_ptotal(-0.1), OutOfRangeError);
}
