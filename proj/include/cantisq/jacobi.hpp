#pragma once

// Cyclic Jacobi eigensolver for small dense symmetric matrices.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <vector>

#include "cantisq/status.hpp"

namespace cantisq {

/// Row-major square matrix with value semantics.
template <typename T>
class SquareMatrix {
 public:
  SquareMatrix() = default;
  explicit SquareMatrix(std::size_t n, T fill = T{}) : n_(n), data_(n * n, fill) {}

  static SquareMatrix identity(std::size_t n) {
    SquareMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T{1};
    return m;
  }

  std::size_t size() const { return n_; }
  T& operator()(std::size_t r, std::size_t c) { return data_[r * n_ + c]; }
  const T& operator()(std::size_t r, std::size_t c) const { return data_[r * n_ + c]; }

 private:
  std::size_t n_ = 0;
  std::vector<T> data_;
};

template <typename T>
struct SymmetricEigen {
  std::vector<T> values;  // ascending
  SquareMatrix<T> vectors;  // column i pairs with values[i]
  int sweeps = 0;
};

/// Diagonalizes a symmetric matrix by cyclic Jacobi rotations. Converges when
/// the off-diagonal Frobenius norm falls below `tol` times the total norm.
template <typename T>
SymmetricEigen<T> jacobi_eigen(SquareMatrix<T> a, T tol = T(1e-15), int max_sweeps = 100) {
  const std::size_t n = a.size();
  SquareMatrix<T> v = SquareMatrix<T>::identity(n);

  auto off_norm = [&] {
    T s{};
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) s += 2 * a(p, q) * a(p, q);
    return std::sqrt(s);
  };
  T total{};
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q < n; ++q) total += a(p, q) * a(p, q);
  total = std::sqrt(total);

  int sweep = 0;
  for (; sweep < max_sweeps; ++sweep) {
    if (off_norm() <= tol * total) break;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const T apq = a(p, q);
        if (apq == T{}) continue;
        // Rotation angle from the stable tangent formula.
        const T theta = (a(q, q) - a(p, p)) / (2 * apq);
        const T t = (theta >= 0 ? T{1} : T{-1}) / (std::abs(theta) + std::sqrt(theta * theta + 1));
        const T c = 1 / std::sqrt(t * t + 1);
        const T s = t * c;

        for (std::size_t k = 0; k < n; ++k) {
          const T akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const T apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        a(p, q) = a(q, p) = T{};
        for (std::size_t k = 0; k < n; ++k) {
          const T vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  if (sweep == max_sweeps && off_norm() > tol * total)
    throw NumericalError("jacobi_eigen: no convergence");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return a(i, i) < a(j, j); });

  SymmetricEigen<T> out;
  out.sweeps = sweep;
  out.values.resize(n);
  out.vectors = SquareMatrix<T>(n);
  for (std::size_t c = 0; c < n; ++c) {
    out.values[c] = a(order[c], order[c]);
    for (std::size_t r = 0; r < n; ++r) out.vectors(r, c) = v(r, order[c]);
  }
  return out;
}

}  // namespace cantisq
