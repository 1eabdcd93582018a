#pragma once

// Reference concurrence, independent of the measurement protocol.
//
// Two-qubit vectors and matrices here use the ordering |00>, |01>, |10>,
// |11> with the first qubit most significant and |0> = |R>, |1> = |L>, so a
// TwoPhotonState maps to (alpha, beta, gamma, delta) directly.
//
// Mixed states follow Wootters: with rho~ = (sy x sy) rho* (sy x sy), the
// eigenvalues of rho rho~ are the squares of the eigenvalues of
// R = sqrt(sqrt(rho) rho~ sqrt(rho)), and
//   C(rho) = max(0, l1 - l2 - l3 - l4)
// with l_i the eigenvalues of R in decreasing order.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <string>

#include <Eigen/Dense>

#include "fqc/errors.hpp"
#include "fqc/protocol.hpp"
#include "fqc/qstate.hpp"

namespace fqc {

using Matrix4 = Eigen::Matrix<Complex, 4, 4>;
using Ket4 = std::array<Complex, 4>;

class DensityMatrix {
public:
  explicit DensityMatrix(Matrix4 rho, double tol = 1e-10) : rho_(std::move(rho)) {
    if (!rho_.allFinite())
      throw ConfigError("density matrix has non-finite entries");
    if ((rho_ - rho_.adjoint()).cwiseAbs().maxCoeff() > tol)
      throw ConfigError("density matrix is not Hermitian");
    if (std::abs(rho_.trace() - Complex{1.0}) > tol)
      throw ConfigError("density matrix trace is not 1");
    Eigen::SelfAdjointEigenSolver<Matrix4> es(rho_);
    if (es.eigenvalues().minCoeff() < -1e-9)
      throw ConfigError("density matrix is not positive semidefinite");
  }

  static DensityMatrix pure(const Ket4 &psi) {
    Eigen::Matrix<Complex, 4, 1> v;
    for (int i = 0; i < 4; ++i)
      v(i) = psi[static_cast<std::size_t>(i)];
    return DensityMatrix(v * v.adjoint());
  }

  // p |Phi+><Phi+| + (1 - p) I/4
  static DensityMatrix werner(double p) {
    const double h = 1.0 / std::sqrt(2.0);
    Matrix4 bell = pure({h, 0.0, 0.0, h}).matrix();
    return DensityMatrix(p * bell + (1.0 - p) * Matrix4::Identity() / 4.0);
  }

  const Matrix4 &matrix() const noexcept { return rho_; }

private:
  Matrix4 rho_;
};

inline Ket4 as_ket(const TwoPhotonState &s) { return {s.alpha, s.beta, s.gamma, s.delta}; }

// 2|alpha delta - beta gamma|
inline double concurrence_pure(const TwoPhotonState &s) {
  return std::min(1.0, 2.0 * std::abs(s.alpha * s.delta - s.beta * s.gamma));
}

inline const Matrix4 &sigma_y_sigma_y() {
  static const Matrix4 m = [] {
    Eigen::Matrix<Complex, 2, 2> sy;
    sy << Complex{0.0}, Complex{0.0, -1.0}, Complex{0.0, 1.0}, Complex{0.0};
    Matrix4 out;
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c)
        out(r, c) = sy(r / 2, c / 2) * sy(r % 2, c % 2);
    return out;
  }();
  return m;
}

// |<psi*| sy x sy |psi>|
inline double concurrence_pure_general(const Ket4 &psi) {
  double n = 0.0;
  for (const auto &a : psi)
    n += std::norm(a);
  if (std::abs(n - 1.0) > 1e-10)
    throw ConfigError("state vector is not normalized");
  const Matrix4 &yy = sigma_y_sigma_y();
  Complex s{};
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c)
      s += psi[static_cast<std::size_t>(r)] * yy(r, c) * psi[static_cast<std::size_t>(c)];
  return std::min(1.0, std::abs(s));
}

inline Matrix4 spin_flip(const DensityMatrix &rho) {
  const Matrix4 &yy = sigma_y_sigma_y();
  return yy * rho.matrix().conjugate() * yy;
}

inline std::array<Complex, 4> eigenvalues_4x4(const Matrix4 &m) {
  if (!m.allFinite())
    throw NumericalFailure("eigenvalue input has non-finite entries");
  Eigen::ComplexEigenSolver<Matrix4> solver;
  solver.setMaxIterations(1000);
  solver.compute(m, false);
  if (solver.info() != Eigen::Success)
    throw NumericalFailure("eigenvalue iteration did not converge");
  std::array<Complex, 4> out;
  for (int i = 0; i < 4; ++i)
    out[static_cast<std::size_t>(i)] = solver.eigenvalues()(i);
  return out;
}

// The lambda_i are taken as the singular values of tau = W^T (sy x sy) W,
// where rho = W W^dagger (Wootters' decomposition form). They equal the
// square roots of the eigenvalues of rho rho~, but near-zero values come
// out at O(eps) instead of O(sqrt(eps)), which matters for rank-deficient
// rho. The eigenvalues of rho rho~ are still computed as a sanity guard.
inline double concurrence_mixed(const DensityMatrix &rho) {
  const auto ev = eigenvalues_4x4(rho.matrix() * spin_flip(rho));
  for (const auto &e : ev)
    if (e.real() < -1e-9)
      throw NumericalFailure("negative eigenvalue " + std::to_string(e.real()) +
                             " of rho * spin_flip(rho)");

  Eigen::SelfAdjointEigenSolver<Matrix4> es(rho.matrix());
  if (es.info() != Eigen::Success)
    throw NumericalFailure("eigendecomposition of rho did not converge");
  const Eigen::Vector4d w = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  const Matrix4 W = es.eigenvectors() * w.cast<Complex>().asDiagonal();
  const Matrix4 tau = W.transpose() * sigma_y_sigma_y() * W;
  Eigen::JacobiSVD<Matrix4> svd(tau);
  std::array<double, 4> lambda;
  for (int i = 0; i < 4; ++i)
    lambda[static_cast<std::size_t>(i)] = svd.singularValues()(i);
  std::sort(lambda.begin(), lambda.end(), std::greater<>());
  return std::clamp(lambda[0] - lambda[1] - lambda[2] - lambda[3], 0.0, 1.0);
}

} // namespace fqc
