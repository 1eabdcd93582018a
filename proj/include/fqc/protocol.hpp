#pragma once

// Two-copy concurrence measurement by Faraday-rotation parity checks.
//
// Alice holds photons a1, a2 and Bob holds b1, b2 of two copies of
// alpha|RR> + beta|RL> + gamma|LR> + delta|LL>. Three ancilla atoms start in
// |+> = (|g_L> + |g_R>)/sqrt(2):
//
//   1. photons (a1, a2) reflect off the cavity of atom1, (b1, b2) off atom2;
//   2. both atoms are kept only if found in |+> (odd photon parity), which
//      happens with probability p1 = 2|ad|^2 + 2|bc|^2;
//   3. a1 and a2 pass a quarter wave plate (Hadamard);
//   4. (a1, a2) reflect off atom3, which is kept only if found in |+>, with
//      probability p2 = |ad - bc|^2 / p1.
//
// The overall success probability p1 p2 = |ad - bc|^2 = C^2 / 4.

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

#include "fqc/errors.hpp"
#include "fqc/faraday.hpp"
#include "fqc/qstate.hpp"

namespace fqc {

// Amplitudes of |RR>, |RL>, |LR>, |LL> (first letter: Alice's photon).
struct TwoPhotonState {
  Complex alpha;
  Complex beta;
  Complex gamma;
  Complex delta;

  double norm_squared() const noexcept {
    return std::norm(alpha) + std::norm(beta) + std::norm(gamma) + std::norm(delta);
  }

  bool is_normalized(double tol = 1e-10) const noexcept {
    return std::abs(norm_squared() - 1.0) <= tol;
  }

  void require_normalized() const {
    if (!is_normalized())
      throw ConfigError("two-photon state is not normalized (|psi|^2 = " +
                        std::to_string(norm_squared()) + ")");
  }

  TwoPhotonState normalized() const {
    const double n = std::sqrt(norm_squared());
    if (n < impossible_probability)
      throw ConfigError("two-photon state has zero norm");
    return {alpha / n, beta / n, gamma / n, delta / n};
  }

  // Amplitude of |a b> with a, b in {basis::R, basis::L}.
  Complex amplitude(std::size_t a, std::size_t b) const {
    switch (a << 1 | b) {
    case 0: return alpha;
    case 1: return beta;
    case 2: return gamma;
    default: return delta;
    }
  }

  // cos(theta)|RR> + sin(theta)|LL>
  static TwoPhotonState mixing_angle(double theta) {
    return {std::cos(theta), 0.0, 0.0, std::sin(theta)};
  }

  static TwoPhotonState bell() {
    return {1.0 / std::sqrt(2.0), 0.0, 0.0, 1.0 / std::sqrt(2.0)};
  }
};

struct ProtocolOutcome {
  double p1 = 0.0;
  double p2 = 0.0;
  double p_total = 0.0;
  double c_estimate = 0.0;
  // Post-selected 7-qubit state; empty when the selection is impossible.
  std::optional<StateVector> final_state;
};

// One copy of the pair on register [a, b].
inline StateVector pair_state(const TwoPhotonState &s, std::string a, std::string b) {
  std::vector<Complex> amps(4);
  for (std::size_t pa : {basis::R, basis::L})
    for (std::size_t pb : {basis::R, basis::L})
      amps[pa | pb << 1] = s.amplitude(pa, pb);
  return StateVector(RegisterLayout({std::move(a), std::move(b)}), std::move(amps));
}

inline StateVector prepare_joint(const TwoPhotonState &s) {
  s.require_normalized();
  StateVector joint = tensor_product(pair_state(s, std::string(labels::a1), std::string(labels::b1)),
                                     pair_state(s, std::string(labels::a2), std::string(labels::b2)));
  for (auto atom : {labels::atom1, labels::atom2, labels::atom3})
    joint = tensor_product(joint, StateVector::qubit(std::string(atom), basis::plus));
  return reordered(joint, RegisterLayout::protocol());
}

// Both photons of a pair reflect, one after the other, off the same cavity.
inline StateVector parity_check(const StateVector &state, std::string_view first,
                                std::string_view second, std::string_view atom,
                                const FaradayPhases &ph) {
  return interact(interact(state, first, atom, ph), second, atom, ph);
}

inline double concurrence_from_ptotal(double p_total) {
  if (!(p_total >= 0.0) || p_total > 0.25 + 1e-9)
    throw OutOfRangeError("success probability " + std::to_string(p_total) +
                          " outside [0, 1/4] attainable by a pure state");
  return std::clamp(2.0 * std::sqrt(p_total), 0.0, 1.0);
}

// Post-selected photonic state (|LR> - |RL>)_{a1a2} (|RL> - |LR>)_{b1b2} / 2
// with all three atoms in |+>.
inline StateVector odd_parity_target() {
  const RegisterLayout layout = RegisterLayout::protocol();
  std::vector<Complex> amps(std::size_t{1} << layout.size());
  auto photons = [](std::size_t a1, std::size_t a2, std::size_t b1, std::size_t b2) {
    return a1 | a2 << 1 | b1 << 2 | b2 << 3;
  };
  const double atom_amp = 1.0 / std::sqrt(8.0);
  struct Term { std::size_t x, y; double sign; };
  const Term alice[] = {{basis::L, basis::R, 1.0}, {basis::R, basis::L, -1.0}};
  const Term bob[] = {{basis::R, basis::L, 1.0}, {basis::L, basis::R, -1.0}};
  for (const auto &ta : alice)
    for (const auto &tb : bob)
      for (std::size_t atoms = 0; atoms < 8; ++atoms)
        amps[photons(ta.x, ta.y, tb.x, tb.y) | atoms << 4] = 0.5 * ta.sign * tb.sign * atom_amp;
  return StateVector(layout, std::move(amps));
}

// Exact simulation of the full pipeline, keeping whatever passes each
// atom selection (including even-parity leakage at imperfect phases).
inline ProtocolOutcome run_analytic(const TwoPhotonState &s, const FaradayPhases &ph) {
  StateVector state = prepare_joint(s);
  state = parity_check(state, labels::a1, labels::a2, labels::atom1, ph);
  state = parity_check(state, labels::b1, labels::b2, labels::atom2, ph);

  ProtocolOutcome out;
  Projection alice = project_qubit(state, labels::atom1, basis::plus);
  if (!alice.state)
    return out;
  Projection bob = project_qubit(*alice.state, labels::atom2, basis::plus);
  if (!bob.state)
    return out;
  out.p1 = alice.probability * bob.probability;
  if (out.p1 < impossible_probability)
    return out;

  state = apply_single_qubit(*bob.state, labels::a1, hadamard);
  state = apply_single_qubit(state, labels::a2, hadamard);
  state = parity_check(state, labels::a1, labels::a2, labels::atom3, ph);
  Projection last = project_qubit(state, labels::atom3, basis::plus);
  if (!last.state)
    return out;

  out.p2 = last.probability;
  out.p_total = out.p1 * out.p2;
  // Imperfect phases can push p_total past 1/4; the estimate saturates at 1.
  out.c_estimate = std::min(1.0, 2.0 * std::sqrt(out.p_total));
  out.final_state = std::move(last.state);
  return out;
}

// p1, p2 and p_total from the closed forms, without simulation.
inline ProtocolOutcome closed_form_outcome(const TwoPhotonState &s) {
  s.require_normalized();
  const double ad = std::norm(s.alpha * s.delta);
  const double bc = std::norm(s.beta * s.gamma);
  const double diff = std::norm(s.alpha * s.delta - s.beta * s.gamma);
  ProtocolOutcome out;
  out.p1 = 2.0 * ad + 2.0 * bc;
  if (out.p1 < impossible_probability) {
    out.p1 = std::max(out.p1, 0.0);
    return out;
  }
  out.p2 = diff / (2.0 * (ad + bc));
  out.p_total = out.p1 * out.p2;
  out.c_estimate = std::min(1.0, 2.0 * std::sqrt(out.p_total));
  if (out.p_total >= impossible_probability)
    out.final_state = odd_parity_target();
  return out;
}

} // namespace fqc
