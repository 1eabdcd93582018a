#pragma once

// Monte Carlo estimation of the protocol's post-selection probabilities by
// sampling individual trials: atom measurements are Born-sampled in the
// {|+>, |->} basis and each detection independently succeeds with
// probability eta_a. A trial whose detection fails is counted but not
// selected, so the stage-2 frequency converges to eta_a^3 p_total.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <thread>
#include <utility>
#include <vector>

#include <boost/math/distributions/normal.hpp>

#include "fqc/errors.hpp"
#include "fqc/faraday.hpp"
#include "fqc/imperfect.hpp"
#include "fqc/protocol.hpp"
#include "fqc/qstate.hpp"
#include "fqc/random.hpp"

namespace fqc {

struct TrialConfig {
  std::uint64_t n_trials = 100000;
  std::uint64_t master_seed = 0;
  TwoPhotonState state = TwoPhotonState::bell();
  FaradayPhases phases = ideal_phases();
  ImperfectionParams imperfections;
  double confidence = 0.95;
  // 0 selects std::thread::hardware_concurrency(). Does not affect results.
  unsigned workers = 0;
};

struct TrialOutcome {
  bool stage1_pass = false;
  bool stage2_pass = false;
};

struct EstimateReport {
  std::uint64_t trials = 0;
  std::uint64_t stage1_successes = 0;
  std::uint64_t stage2_successes = 0;
  double p1_hat = 0.0; // stage-1 frequency
  double p2_hat = 0.0; // stage-2 frequency among stage-1 successes
  double p_total_hat = 0.0;
  double c_hat = 0.0;
  double c_low = 0.0;
  double c_high = 0.0;
  double corrected_c_hat = 0.0;

  friend bool operator==(const EstimateReport &, const EstimateReport &) = default;
};

// Wilson score interval for a binomial proportion.
inline std::pair<double, double> wilson_interval(std::uint64_t successes, std::uint64_t trials,
                                                 double confidence) {
  if (trials == 0 || successes > trials)
    throw OutOfRangeError("wilson_interval needs 0 <= successes <= trials, trials >= 1");
  if (!(confidence > 0.0 && confidence < 1.0))
    throw OutOfRangeError("confidence must lie in (0, 1)");
  const double z = boost::math::quantile(boost::math::normal(), 0.5 + confidence / 2.0);
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2n = z * z / n;
  const double center = (p + z2n / 2.0) / (1.0 + z2n);
  const double half = z * std::sqrt(p * (1.0 - p) / n + z2n / (4.0 * n)) / (1.0 + z2n);
  double low = std::clamp(center - half, 0.0, 1.0);
  double high = std::clamp(center + half, 0.0, 1.0);
  if (successes == 0)
    low = 0.0;
  if (successes == trials)
    high = 1.0;
  return {std::min(low, p), std::max(high, p)};
}

// Everything about a trial that does not depend on the random stream:
// the joint state after both stage-1 parity checks.
class TrialPlan {
public:
  TrialPlan(const TwoPhotonState &s, const FaradayPhases &ph, const ImperfectionParams &imp)
      : checked_(stage_one(s, ph)), phases_(ph), imp_(imp) {
    imp_.validate();
  }

  template <class Rng>
  TrialOutcome run(Rng &rng) const {
    TrialOutcome out;
    Sample alice = born_sample(checked_, labels::atom1, basis::plus_minus, rng);
    if (!selected(alice.outcome, rng))
      return out;
    Sample bob = born_sample(alice.state, labels::atom2, basis::plus_minus, rng);
    if (!selected(bob.outcome, rng))
      return out;
    out.stage1_pass = true;

    StateVector state = apply_single_qubit(bob.state, labels::a1, hadamard);
    state = apply_single_qubit(state, labels::a2, hadamard);
    state = parity_check(state, labels::a1, labels::a2, labels::atom3, phases_);
    Sample last = born_sample(state, labels::atom3, basis::plus_minus, rng);
    out.stage2_pass = selected(last.outcome, rng);
    return out;
  }

private:
  static StateVector stage_one(const TwoPhotonState &s, const FaradayPhases &ph) {
    StateVector state = prepare_joint(s);
    state = parity_check(state, labels::a1, labels::a2, labels::atom1, ph);
    return parity_check(state, labels::b1, labels::b2, labels::atom2, ph);
  }

  // Atom found unchanged (|+>) and the detection registered.
  template <class Rng>
  bool selected(std::size_t outcome, Rng &rng) const {
    const bool detected = uniform01(rng) < imp_.eta_a;
    return outcome == 0 && detected;
  }

  StateVector checked_;
  FaradayPhases phases_;
  ImperfectionParams imp_;
};

template <class Rng>
TrialOutcome run_trial(const TwoPhotonState &s, const FaradayPhases &ph,
                       const ImperfectionParams &imp, Rng &rng) {
  return TrialPlan(s, ph, imp).run(rng);
}

inline EstimateReport estimate(const TrialConfig &config) {
  if (config.n_trials < 1)
    throw OutOfRangeError("n_trials must be at least 1");
  const TrialPlan plan(config.state, config.phases, config.imperfections);

  unsigned workers = config.workers ? config.workers : std::thread::hardware_concurrency();
  workers = static_cast<unsigned>(
      std::clamp<std::uint64_t>(workers, 1, std::min<std::uint64_t>(config.n_trials, 256)));

  struct Tally {
    std::uint64_t stage1 = 0;
    std::uint64_t stage2 = 0;
  };
  std::vector<Tally> tallies(workers);
  auto work = [&](unsigned w) {
    const std::uint64_t begin = config.n_trials * w / workers;
    const std::uint64_t end = config.n_trials * (w + 1) / workers;
    Tally t;
    for (std::uint64_t k = begin; k < end; ++k) {
      SplitMix64 rng = trial_stream(config.master_seed, k);
      const TrialOutcome o = plan.run(rng);
      t.stage1 += o.stage1_pass;
      t.stage2 += o.stage2_pass;
    }
    tallies[w] = t;
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w)
      pool.emplace_back(work, w);
  }

  EstimateReport r;
  r.trials = config.n_trials;
  for (const auto &t : tallies) {
    r.stage1_successes += t.stage1;
    r.stage2_successes += t.stage2;
  }
  const double n = static_cast<double>(r.trials);
  r.p1_hat = static_cast<double>(r.stage1_successes) / n;
  r.p2_hat = r.stage1_successes
                 ? static_cast<double>(r.stage2_successes) / static_cast<double>(r.stage1_successes)
                 : 0.0;
  r.p_total_hat = static_cast<double>(r.stage2_successes) / n;
  auto to_c = [](double p) { return std::min(1.0, 2.0 * std::sqrt(p)); };
  r.c_hat = to_c(r.p_total_hat);
  const auto [low, high] = wilson_interval(r.stage2_successes, r.trials, config.confidence);
  r.c_low = to_c(low);
  r.c_high = to_c(high);
  r.corrected_c_hat = recover_concurrence(r.p1_hat, r.p2_hat, config.imperfections);
  return r;
}

} // namespace fqc
