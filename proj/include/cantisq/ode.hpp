#pragma once

// Adaptive Dormand-Prince 5(4) integrator for small fixed-size systems.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <utility>

#include "cantisq/status.hpp"

namespace cantisq::ode {

template <std::size_t N>
using State = std::array<double, N>;

struct Tolerances {
  double rtol = 1e-10;
  double atol = 1e-14;
  std::size_t max_steps = 2'000'000;
};

struct Stats {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
};

namespace detail {

template <std::size_t N>
State<N> axpy(const State<N>& y, double h, std::initializer_list<std::pair<double, const State<N>*>> terms) {
  State<N> out = y;
  for (const auto& [c, k] : terms)
    if (c != 0.0)
      for (std::size_t i = 0; i < N; ++i) out[i] += h * c * (*k)[i];
  return out;
}

}  // namespace detail

/// Integrates y' = f(t, y) from t0 to t1 (t1 >= t0). f returns State<N>.
template <std::size_t N, typename Rhs>
State<N> integrate(Rhs&& f, State<N> y, double t0, double t1, const Tolerances& tol = {},
                   Stats* stats = nullptr) {
  // Dormand-Prince tableau.
  constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  constexpr double a21 = 1.0 / 5;
  constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                   a65 = -5103.0 / 18656;
  constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                   e6 = 22.0 / 525, e7 = -1.0 / 40;

  Stats local;
  if (t1 <= t0) return y;

  double t = t0;
  double h = std::min(t1 - t0, 1e-3 * (t1 - t0) + 1e-300);
  State<N> k1 = f(t, y);
  bool done = false;
  while (!done) {
    if (local.accepted + local.rejected >= tol.max_steps)
      throw NumericalError("ode::integrate: step budget exhausted");
    const bool last = t + h >= t1;
    if (last) h = t1 - t;
    if (h <= std::abs(t) * 1e-15) throw NumericalError("ode::integrate: step size underflow");

    const State<N> k2 = f(t + c2 * h, detail::axpy<N>(y, h, {{a21, &k1}}));
    const State<N> k3 = f(t + c3 * h, detail::axpy<N>(y, h, {{a31, &k1}, {a32, &k2}}));
    const State<N> k4 = f(t + c4 * h, detail::axpy<N>(y, h, {{a41, &k1}, {a42, &k2}, {a43, &k3}}));
    const State<N> k5 =
        f(t + c5 * h, detail::axpy<N>(y, h, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
    const State<N> k6 =
        f(t + h, detail::axpy<N>(y, h, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}));
    const State<N> y5 = detail::axpy<N>(y, h, {{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
    const State<N> k7 = f(t + h, y5);

    double err = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      const double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
      const double sc = tol.atol + tol.rtol * std::max(std::abs(y[i]), std::abs(y5[i]));
      if (!std::isfinite(e) || !std::isfinite(y5[i])) throw NumericalError("ode::integrate: non-finite state");
      err = std::max(err, std::abs(e) / sc);
    }

    if (err <= 1.0) {
      t = last ? t1 : t + h;
      done = last;
      y = y5;
      k1 = k7;  // first-same-as-last
      ++local.accepted;
    } else {
      ++local.rejected;
    }
    const double factor = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
    h *= factor;
  }
  if (stats) *stats = local;
  return y;
}

}  // namespace cantisq::ode
