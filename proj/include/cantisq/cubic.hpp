#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>

#include <Eigen/Eigenvalues>

namespace cantisq {

using cplx = std::complex<double>;

/// Roots of a real monic cubic lambda^3 + a2 lambda^2 + a1 lambda + a0.
struct CubicRoots {
  std::array<cplx, 3> lambda{};
  bool is_degenerate = false;
  double residual = 0.0;  // max |p(lambda_i)|
};

struct MonicCubic {
  double a2 = 0.0, a1 = 0.0, a0 = 0.0;

  template <typename T>
  T operator()(T x) const { return ((x + a2) * x + a1) * x + a0; }
  template <typename T>
  T derivative(T x) const { return (3.0 * x + 2.0 * a2) * x + a1; }

  /// Largest coefficient magnitude expressed as a root scale.
  double root_scale() const {
    return std::max({std::abs(a2), std::sqrt(std::abs(a1)), std::cbrt(std::abs(a0))});
  }
};

/// Companion-matrix eigenvalues followed by one Newton step per root.
/// Eigenvalue solvers split an exact triple root by about eps^(1/3) ~ 6e-6,
/// so roots closer than degeneracy_tol (relative) are flagged as coincident.
inline CubicRoots solve_cubic(const MonicCubic& p, double degeneracy_tol = 1e-4) {
  Eigen::Matrix3d companion;
  companion << 0.0, 0.0, -p.a0,
               1.0, 0.0, -p.a1,
               0.0, 1.0, -p.a2;
  Eigen::EigenSolver<Eigen::Matrix3d> es(companion, /*computeEigenvectors=*/false);

  CubicRoots out;
  for (int i = 0; i < 3; ++i) {
    cplx z = es.eigenvalues()[i];
    const cplx dp = p.derivative(z);
    if (std::abs(dp) > 0.0) {
      const cplx step = p(z) / dp;
      if (std::isfinite(step.real()) && std::isfinite(step.imag())) z -= step;
    }
    out.lambda[static_cast<std::size_t>(i)] = z;
  }

  // Real coefficients: snap numerically-real roots and force exact conjugate pairs.
  const double scale = std::max(p.root_scale(), 1e-300);
  for (auto& z : out.lambda)
    if (std::abs(z.imag()) < 1e-13 * scale) z = {z.real(), 0.0};
  std::sort(out.lambda.begin(), out.lambda.end(), [](const cplx& a, const cplx& b) {
    if (a.real() != b.real()) return a.real() > b.real();
    return a.imag() > b.imag();
  });
  for (std::size_t i = 0; i + 1 < 3; ++i) {
    auto& a = out.lambda[i];
    auto& b = out.lambda[i + 1];
    if (a.imag() != 0.0 && b.imag() != 0.0 && std::abs(a.real() - b.real()) < 1e-10 * scale) {
      const double re = 0.5 * (a.real() + b.real());
      const double im = 0.5 * (std::abs(a.imag()) + std::abs(b.imag()));
      a = {re, im};
      b = {re, -im};
    }
  }

  double largest = 0.0;
  for (const auto& z : out.lambda) {
    out.residual = std::max(out.residual, std::abs(p(z)));
    largest = std::max(largest, std::abs(z));
  }
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = i + 1; j < 3; ++j)
      if (std::abs(out.lambda[i] - out.lambda[j]) <= degeneracy_tol * largest) out.is_degenerate = true;
  return out;
}

}  // namespace cantisq
