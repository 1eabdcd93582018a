#pragma once

// Experimental imperfections: finite atom-detection efficiency eta_a and a
// Faraday rotation angle pi/2 + sigma. Forward models degrade ideal
// probabilities; the inverses recover them from observed frequencies.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "fqc/errors.hpp"
#include "fqc/qstate.hpp"

namespace fqc {

// How the leak probability enters the two-atom first stage.
enum class LeakModel {
  single,     // P'1 = P1 + (1 - P1) Pe, as for a single check
  compounded, // each of the two stage-1 atoms leaks independently
};

struct ImperfectionParams {
  double eta_a = 1.0;
  double sigma = 0.0;
  LeakModel leak_model = LeakModel::single;

  void validate() const {
    if (!(eta_a >= 0.0 && eta_a <= 1.0))
      throw OutOfRangeError("detection efficiency eta_a must lie in [0, 1], got " +
                            std::to_string(eta_a));
    if (!std::isfinite(sigma))
      throw OutOfRangeError("rotation error sigma must be finite");
  }

  // Soft limits: reported, not enforced.
  std::vector<std::string> warnings() const {
    std::vector<std::string> w;
    if (std::abs(sigma) >= pi / 4.0)
      w.push_back("|sigma| >= pi/4: leak probability exceeds 1/2 and inversion is ill-conditioned");
    return w;
  }
};

// Three atom detections, each succeeding with probability eta_a.
inline double detection_scaled_ptotal(double p_total, double eta_a) {
  return eta_a * eta_a * eta_a * p_total;
}

// |1 - e^{2 i sigma}|^2 / 4
inline double leak_probability(double sigma) {
  const double s = std::sin(sigma);
  return s * s;
}

// Effective leak for a stage with `atoms` independent checks.
inline double stage_leak_probability(double sigma, int atoms) {
  return 1.0 - std::pow(1.0 - leak_probability(sigma), atoms);
}

namespace detail {
inline double degrade_with_leak(double p, double leak) { return p + (1.0 - p) * leak; }

inline double invert_with_leak(double p_prime, double leak) {
  if (leak >= 1.0 - 1e-12)
    throw NonInvertibleError("leak probability " + std::to_string(leak) +
                             " leaves no information to invert");
  if (p_prime < leak - 1e-9)
    throw InconsistentObservation("observed probability " + std::to_string(p_prime) +
                                  " is below the leak floor " + std::to_string(leak));
  return std::clamp((p_prime - leak) / (1.0 - leak), 0.0, 1.0);
}
} // namespace detail

inline double degraded_parity_probability(double p, double sigma) {
  return std::clamp(detail::degrade_with_leak(p, leak_probability(sigma)), 0.0, 1.0);
}

inline double invert_parity_probability(double p_prime, double sigma) {
  return detail::invert_with_leak(p_prime, leak_probability(sigma));
}

inline int stage1_leak_atoms(LeakModel m) { return m == LeakModel::compounded ? 2 : 1; }

// Model prediction of the observed stage frequencies: stage 1 is seen
// with probability eta^2 P'1 (two detections), stage 2 given stage 1
// with eta P'2.
struct ObservedStages {
  double p1 = 0.0;
  double p2 = 0.0;
};

inline ObservedStages degrade_stages(double p1, double p2, const ImperfectionParams &imp) {
  imp.validate();
  const double leak1 = stage_leak_probability(imp.sigma, stage1_leak_atoms(imp.leak_model));
  const double leak2 = leak_probability(imp.sigma);
  return {imp.eta_a * imp.eta_a * detail::degrade_with_leak(p1, leak1),
          imp.eta_a * detail::degrade_with_leak(p2, leak2)};
}

// Undo detection losses (eta^2 on stage 1, eta on stage 2, eta^3 overall)
// and then the rotation-angle leak of each stage.
inline ObservedStages correct_stages(double p1_obs, double p2_obs, const ImperfectionParams &imp) {
  imp.validate();
  if (imp.eta_a <= 0.0)
    throw NonInvertibleError("detection efficiency 0 leaves no information to invert");
  const double leak1 = stage_leak_probability(imp.sigma, stage1_leak_atoms(imp.leak_model));
  const double leak2 = leak_probability(imp.sigma);
  return {detail::invert_with_leak(p1_obs / (imp.eta_a * imp.eta_a), leak1),
          detail::invert_with_leak(p2_obs / imp.eta_a, leak2)};
}

inline double recover_concurrence(double p1_obs, double p2_obs, const ImperfectionParams &imp) {
  const ObservedStages ideal = correct_stages(p1_obs, p2_obs, imp);
  return std::clamp(2.0 * std::sqrt(ideal.p1 * ideal.p2), 0.0, 1.0);
}

} // namespace fqc
