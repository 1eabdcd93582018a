#pragma once

// Dense state-vector engine for a small register of labeled two-level
// systems. Bit k of a basis-state index is the value of the k-th label in
// the register layout (first label = least significant bit).

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fqc/errors.hpp"
#include "fqc/random.hpp"

namespace fqc {

using Complex = std::complex<double>;
using Ket2 = std::array<Complex, 2>;
using Matrix2 = std::array<std::array<Complex, 2>, 2>;

inline constexpr double pi = 3.14159265358979323846;

// Probabilities below this are treated as impossible outcomes.
inline constexpr double impossible_probability = 1e-15;

namespace labels {
inline constexpr std::string_view a1 = "a1";
inline constexpr std::string_view a2 = "a2";
inline constexpr std::string_view b1 = "b1";
inline constexpr std::string_view b2 = "b2";
inline constexpr std::string_view atom1 = "atom1";
inline constexpr std::string_view atom2 = "atom2";
inline constexpr std::string_view atom3 = "atom3";
} // namespace labels

// Photon polarization: |R> = 0, |L> = 1. Atom ground states: |g_L> = 0, |g_R> = 1.
namespace basis {
inline constexpr std::size_t R = 0;
inline constexpr std::size_t L = 1;
inline constexpr std::size_t gL = 0;
inline constexpr std::size_t gR = 1;

inline const Ket2 plus{Complex{1.0 / std::sqrt(2.0)}, Complex{1.0 / std::sqrt(2.0)}};
inline const Ket2 minus{Complex{1.0 / std::sqrt(2.0)}, Complex{-1.0 / std::sqrt(2.0)}};
inline const std::array<Ket2, 2> plus_minus{plus, minus};
} // namespace basis

inline const Matrix2 hadamard{{{Complex{1.0 / std::sqrt(2.0)}, Complex{1.0 / std::sqrt(2.0)}},
                               {Complex{1.0 / std::sqrt(2.0)}, Complex{-1.0 / std::sqrt(2.0)}}}};

class RegisterLayout {
public:
  RegisterLayout() = default;

  explicit RegisterLayout(std::vector<std::string> labels) : labels_(std::move(labels)) {
    for (std::size_t i = 0; i < labels_.size(); ++i) {
      if (labels_[i].empty())
        throw LabelError("register label must be non-empty");
      for (std::size_t j = 0; j < i; ++j)
        if (labels_[i] == labels_[j])
          throw LabelError("duplicate register label '" + labels_[i] + "'");
    }
  }

  // a1, a2, b1, b2, atom1, atom2, atom3 (a1 least significant).
  static RegisterLayout protocol() {
    return RegisterLayout({std::string(labels::a1), std::string(labels::a2),
                           std::string(labels::b1), std::string(labels::b2),
                           std::string(labels::atom1), std::string(labels::atom2),
                           std::string(labels::atom3)});
  }

  std::size_t size() const noexcept { return labels_.size(); }
  const std::vector<std::string> &labels() const noexcept { return labels_; }
  const std::string &label(std::size_t k) const { return labels_.at(k); }

  bool contains(std::string_view label) const noexcept {
    return std::find(labels_.begin(), labels_.end(), label) != labels_.end();
  }

  std::size_t index_of(std::string_view label) const {
    auto it = std::find(labels_.begin(), labels_.end(), label);
    if (it == labels_.end())
      throw LabelError("unknown register label '" + std::string(label) + "'");
    return static_cast<std::size_t>(it - labels_.begin());
  }

  friend bool operator==(const RegisterLayout &, const RegisterLayout &) = default;

private:
  std::vector<std::string> labels_;
};

class StateVector {
public:
  StateVector(RegisterLayout layout, std::vector<Complex> amplitudes)
      : layout_(std::move(layout)), amps_(std::move(amplitudes)) {
    if (layout_.size() >= 8 * sizeof(std::size_t) ||
        amps_.size() != (std::size_t{1} << layout_.size()))
      throw ConfigError("amplitude count " + std::to_string(amps_.size()) +
                        " does not match a " + std::to_string(layout_.size()) +
                        "-qubit register");
    for (const auto &a : amps_)
      if (!std::isfinite(a.real()) || !std::isfinite(a.imag()))
        throw NumericalFailure("non-finite amplitude in state vector");
  }

  static StateVector basis_state(RegisterLayout layout, std::size_t index) {
    std::vector<Complex> amps(std::size_t{1} << layout.size());
    amps.at(index) = 1.0;
    return StateVector(std::move(layout), std::move(amps));
  }

  // Single labeled qubit in state c0|0> + c1|1>.
  static StateVector qubit(std::string label, const Ket2 &ket) {
    return StateVector(RegisterLayout({std::move(label)}), {ket[0], ket[1]});
  }

  const RegisterLayout &layout() const noexcept { return layout_; }
  std::size_t num_qubits() const noexcept { return layout_.size(); }
  std::size_t dimension() const noexcept { return amps_.size(); }
  std::span<const Complex> amplitudes() const noexcept { return amps_; }
  const Complex &operator[](std::size_t i) const { return amps_[i]; }

  double norm_squared() const noexcept {
    double s = 0.0;
    for (const auto &a : amps_)
      s += std::norm(a);
    return s;
  }

  StateVector normalized() const {
    const double n = std::sqrt(norm_squared());
    if (n < impossible_probability)
      throw NumericalFailure("cannot normalize a zero state");
    std::vector<Complex> out(amps_);
    for (auto &a : out)
      a /= n;
    return StateVector(layout_, std::move(out));
  }

private:
  RegisterLayout layout_;
  std::vector<Complex> amps_;
};

// <a|b> for states on the same layout.
inline Complex inner_product(const StateVector &a, const StateVector &b) {
  if (a.layout() != b.layout())
    throw LabelError("inner product of states on different layouts");
  Complex s{};
  for (std::size_t i = 0; i < a.dimension(); ++i)
    s += std::conj(a[i]) * b[i];
  return s;
}

inline double fidelity(const StateVector &a, const StateVector &b) {
  return std::norm(inner_product(a, b));
}

// left's labels occupy the low bits of the result, right's the high bits.
inline StateVector tensor_product(const StateVector &left, const StateVector &right) {
  std::vector<std::string> labels = left.layout().labels();
  for (const auto &l : right.layout().labels()) {
    if (left.layout().contains(l))
      throw LabelError("label collision in tensor product: '" + l + "'");
    labels.push_back(l);
  }
  const std::size_t nl = left.num_qubits();
  std::vector<Complex> amps(left.dimension() * right.dimension());
  for (std::size_t j = 0; j < right.dimension(); ++j)
    for (std::size_t i = 0; i < left.dimension(); ++i)
      amps[i | (j << nl)] = left[i] * right[j];
  return StateVector(RegisterLayout(std::move(labels)), std::move(amps));
}

// Same state expressed on `target`, which must be a permutation of the
// state's labels.
inline StateVector reordered(const StateVector &state, const RegisterLayout &target) {
  if (target.size() != state.num_qubits())
    throw LabelError("reorder target has a different number of qubits");
  std::vector<std::size_t> dest(state.num_qubits());
  for (std::size_t k = 0; k < state.num_qubits(); ++k)
    dest[k] = target.index_of(state.layout().label(k));
  std::vector<Complex> amps(state.dimension());
  for (std::size_t i = 0; i < state.dimension(); ++i) {
    std::size_t j = 0;
    for (std::size_t k = 0; k < dest.size(); ++k)
      j |= ((i >> k) & 1U) << dest[k];
    amps[j] = state[i];
  }
  return StateVector(target, std::move(amps));
}

// Diagonal unitary over a subset of qubits. Entry `pattern` applies to
// basis states whose bit on targets[j] equals bit j of `pattern`.
struct PhaseTable {
  std::vector<Complex> entries;

  Complex operator[](std::size_t pattern) const { return entries.at(pattern); }
  std::size_t arity() const noexcept {
    return static_cast<std::size_t>(std::countr_zero(entries.size()));
  }
};

inline PhaseTable operator*(const PhaseTable &a, const PhaseTable &b) {
  if (a.entries.size() != b.entries.size())
    throw ConfigError("phase tables of different arity");
  PhaseTable out{a.entries};
  for (std::size_t i = 0; i < out.entries.size(); ++i)
    out.entries[i] *= b.entries[i];
  return out;
}

inline StateVector apply_diagonal_phase(const StateVector &state,
                                        std::span<const std::string_view> targets,
                                        const PhaseTable &table) {
  if (table.entries.size() != (std::size_t{1} << targets.size()))
    throw ConfigError("phase table size does not match " + std::to_string(targets.size()) +
                      " target qubit(s)");
  for (const auto &e : table.entries)
    if (std::abs(std::abs(e) - 1.0) > 1e-12)
      throw NonUnitaryError("phase table entry with modulus " + std::to_string(std::abs(e)));

  std::vector<std::size_t> bits(targets.size());
  for (std::size_t j = 0; j < targets.size(); ++j)
    bits[j] = state.layout().index_of(targets[j]);

  std::vector<Complex> amps(state.amplitudes().begin(), state.amplitudes().end());
  for (std::size_t i = 0; i < amps.size(); ++i) {
    std::size_t pattern = 0;
    for (std::size_t j = 0; j < bits.size(); ++j)
      pattern |= ((i >> bits[j]) & 1U) << j;
    amps[i] *= table.entries[pattern];
  }
  return StateVector(state.layout(), std::move(amps));
}

inline StateVector apply_diagonal_phase(const StateVector &state,
                                        std::initializer_list<std::string_view> targets,
                                        const PhaseTable &table) {
  return apply_diagonal_phase(state, std::span<const std::string_view>(targets.begin(), targets.size()),
                              table);
}

inline bool is_unitary(const Matrix2 &u, double tol = 1e-10) {
  for (std::size_t r = 0; r < 2; ++r)
    for (std::size_t c = 0; c < 2; ++c) {
      Complex s = std::conj(u[0][r]) * u[0][c] + std::conj(u[1][r]) * u[1][c];
      if (std::abs(s - (r == c ? 1.0 : 0.0)) > tol)
        return false;
    }
  return true;
}

inline StateVector apply_single_qubit(const StateVector &state, std::string_view target,
                                      const Matrix2 &u) {
  if (!is_unitary(u))
    throw NonUnitaryError("single-qubit gate is not unitary");
  const std::size_t mask = std::size_t{1} << state.layout().index_of(target);
  std::vector<Complex> amps(state.dimension());
  for (std::size_t i = 0; i < amps.size(); ++i) {
    if (i & mask)
      continue;
    const Complex x0 = state[i];
    const Complex x1 = state[i | mask];
    amps[i] = u[0][0] * x0 + u[0][1] * x1;
    amps[i | mask] = u[1][0] * x0 + u[1][1] * x1;
  }
  return StateVector(state.layout(), std::move(amps));
}

struct Projection {
  double probability = 0.0;
  // Renormalized post-measurement state; empty when the branch is impossible.
  std::optional<StateVector> state;
};

inline Projection project_qubit(const StateVector &state, std::string_view target,
                                const Ket2 &axis) {
  if (std::abs(std::norm(axis[0]) + std::norm(axis[1]) - 1.0) > 1e-12)
    throw ConfigError("projection axis is not normalized");
  const std::size_t mask = std::size_t{1} << state.layout().index_of(target);
  std::vector<Complex> amps(state.dimension());
  double prob = 0.0;
  for (std::size_t i = 0; i < amps.size(); ++i) {
    if (i & mask)
      continue;
    const Complex overlap = std::conj(axis[0]) * state[i] + std::conj(axis[1]) * state[i | mask];
    prob += std::norm(overlap);
    amps[i] = axis[0] * overlap;
    amps[i | mask] = axis[1] * overlap;
  }
  if (prob < impossible_probability)
    return {0.0, std::nullopt};
  const double scale = 1.0 / std::sqrt(prob);
  for (auto &a : amps)
    a *= scale;
  return {std::min(prob, 1.0), StateVector(state.layout(), std::move(amps))};
}

struct Sample {
  std::size_t outcome = 0;
  StateVector state;
};

// Born-rule measurement of `target` in the orthonormal basis {b0, b1}.
// Consumes exactly one draw from `rng`.
template <class Rng>
Sample born_sample(const StateVector &state, std::string_view target,
                   const std::array<Ket2, 2> &basis_kets, Rng &rng) {
  const Complex cross = std::conj(basis_kets[0][0]) * basis_kets[1][0] +
                        std::conj(basis_kets[0][1]) * basis_kets[1][1];
  if (std::abs(cross) > 1e-12)
    throw ConfigError("measurement basis is not orthogonal");
  Projection first = project_qubit(state, target, basis_kets[0]);
  const double u = uniform01(rng);
  if (u < first.probability && first.state)
    return {0, std::move(*first.state)};
  Projection second = project_qubit(state, target, basis_kets[1]);
  if (!second.state) // first branch carries all the weight
    return {0, std::move(*first.state)};
  return {1, std::move(*second.state)};
}

} // namespace fqc
