#pragma once

// Reflection of a single photon off a one-sided low-Q cavity holding a
// three-level atom, and the photon-atom interaction it induces.
//
// All frequencies and rates are angular (rad/s). The coupled-cavity
// coefficient is
//
//   r(w_p) = ([i(w_c - w_p) - k/2][i(w_0 - w_p) + g/2] + l^2)
//          / ([i(w_c - w_p) + k/2][i(w_0 - w_p) + g/2] + l^2)
//
// with k = kappa, g = gamma, l = lambda; setting l = 0 gives the empty
// cavity coefficient r0. In the weak-absorption regime only the phases
// phi = arg r and phi0 = arg r0 are used.

#include <cmath>
#include <complex>
#include <string>

#include "fqc/errors.hpp"
#include "fqc/qstate.hpp"

namespace fqc {

struct CavityParams {
  double omega_c = 0.0; // cavity field frequency
  double omega_p = 0.0; // photon frequency
  double omega_0 = 0.0; // atomic transition frequency
  double kappa = 0.0;   // cavity damping rate
  double gamma = 0.0;   // atomic decay rate
  double lambda = 0.0;  // atom-field coupling

  void validate() const {
    auto finite = [](double v) { return std::isfinite(v); };
    if (!(finite(omega_c) && finite(omega_p) && finite(omega_0) && finite(kappa) &&
          finite(gamma) && finite(lambda)))
      throw OutOfRangeError("cavity parameters must be finite");
    if (!(omega_c > 0 && omega_p > 0 && omega_0 > 0))
      throw OutOfRangeError("cavity frequencies must be positive");
    if (!(kappa > 0))
      throw OutOfRangeError("kappa must be positive");
    if (gamma < 0)
      throw OutOfRangeError("gamma must be non-negative");
    if (lambda < 0)
      throw OutOfRangeError("lambda must be non-negative");
  }

  // Resonant atom and cavity, photon detuned by -kappa/2, coupling kappa/2,
  // no atomic decay: the condition giving phi = pi, phi0 = pi/2.
  static CavityParams ideal(double omega_c, double kappa) {
    return {omega_c, omega_c - kappa / 2.0, omega_c, kappa, 0.0, kappa / 2.0};
  }

  // 87Rb D2 line in a fiber Fabry-Perot cavity: omega_0 = 2 pi c / 780 nm
  // and kappa = 2 pi x 53 MHz, tuned to the ideal condition.
  static CavityParams rubidium87() { return ideal(2.42e15, 2.0 * pi * 53.0e6); }
};

struct FaradayPhases {
  double phi = 0.0;  // coupled-cavity reflection phase
  double phi0 = 0.0; // empty-cavity reflection phase
  double r_modulus = 1.0;
  double r0_modulus = 1.0;

  // Faraday rotation angle Theta+ = phi - phi0.
  double rotation() const noexcept { return phi - phi0; }
};

inline Complex reflection_coefficient(const CavityParams &p) {
  p.validate();
  const Complex i{0.0, 1.0};
  const Complex atom = i * (p.omega_0 - p.omega_p) + p.gamma / 2.0;
  const double l2 = p.lambda * p.lambda;
  const Complex num = (i * (p.omega_c - p.omega_p) - p.kappa / 2.0) * atom + l2;
  const Complex den = (i * (p.omega_c - p.omega_p) + p.kappa / 2.0) * atom + l2;
  if (den == Complex{})
    throw SingularParametersError("reflection coefficient denominator vanishes");
  const Complex r = num / den;
  if (!std::isfinite(r.real()) || !std::isfinite(r.imag()))
    throw SingularParametersError("reflection coefficient is not finite");
  return r;
}

inline Complex empty_cavity_coefficient(const CavityParams &p) {
  if (!(p.kappa > 0))
    throw OutOfRangeError("kappa must be positive");
  const Complex i{0.0, 1.0};
  const double detuning = p.omega_c - p.omega_p;
  return (i * detuning - p.kappa / 2.0) / (i * detuning + p.kappa / 2.0);
}

namespace detail {
// arg in (-pi, pi]; arg(-1) is pi.
inline double principal_arg(Complex z) {
  const double a = std::arg(z);
  return a <= -pi ? a + 2.0 * pi : a;
}
} // namespace detail

inline FaradayPhases phases_from_params(const CavityParams &p) {
  const Complex r = reflection_coefficient(p);
  const Complex r0 = empty_cavity_coefficient(p);
  return {detail::principal_arg(r), detail::principal_arg(r0), std::abs(r), std::abs(r0)};
}

inline FaradayPhases ideal_phases() { return {pi, pi / 2.0, 1.0, 1.0}; }

// Rotation angle pi/2 + sigma, realized by shifting phi.
inline FaradayPhases perturbed_phases(double sigma) {
  return {pi + sigma, pi / 2.0, 1.0, 1.0};
}

// Phase table over (photon, atom), pattern = photon_bit | atom_bit << 1.
// A photon whose polarization matches the atom's coupled transition
// (L with g_L, R with g_R) picks up e^{i phi}; otherwise e^{i phi0}.
// Moduli are discarded.
inline PhaseTable interaction_table(const FaradayPhases &ph) {
  const Complex coupled = std::polar(1.0, ph.phi);
  const Complex empty = std::polar(1.0, ph.phi0);
  PhaseTable t{std::vector<Complex>(4)};
  t.entries[basis::R | basis::gL << 1] = empty;
  t.entries[basis::L | basis::gL << 1] = coupled;
  t.entries[basis::R | basis::gR << 1] = coupled;
  t.entries[basis::L | basis::gR << 1] = empty;
  return t;
}

// One photon reflecting off the cavity holding `atom`.
inline StateVector interact(const StateVector &state, std::string_view photon,
                            std::string_view atom, const FaradayPhases &ph) {
  return apply_diagonal_phase(state, {photon, atom}, interaction_table(ph));
}

} // namespace fqc
