#pragma once

// Squeezing dynamics under cantilever phase noise: the single-mode quadrature
// variance, the two-mode variance sum with its characteristic cubic, the
// entanglement window, and an ODE route to the cubic's residue sum.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "cantisq/cubic.hpp"
#include "cantisq/ode.hpp"
#include "cantisq/parallel.hpp"
#include "cantisq/quantities.hpp"
#include "cantisq/status.hpp"

namespace cantisq {

inline constexpr double max_exponent = 700.0;
inline constexpr double vacuum_variance = 0.25;  // (dx1)^2 of the vacuum
inline constexpr double separability_bound = 2.0;

/// exp with the argument clamped to +-max_exponent; sets `clamped` when it bites.
inline double clamped_exp(double x, bool& clamped) {
  if (x > max_exponent) {
    clamped = true;
    return std::exp(max_exponent);
  }
  return std::exp(std::max(x, -max_exponent));
}

inline cplx clamped_exp(cplx z, bool& clamped) {
  return clamped_exp(z.real(), clamped) * cplx(std::cos(z.imag()), std::sin(z.imag()));
}

// --- single mode ----------------------------------------------------------------

struct SingleModePoint {
  double t = 0.0;
  double u = 0.0;
  double variance = vacuum_variance;
  bool inside_window = false;
  bool clamped = false;
};

/// (dx1)^2 = e^{-2u}/4 + e^{2u} D t / 8 with u = 2 C t.
inline SingleModePoint single_mode_variance(double C, double D, double t) {
  if (!(C > 0.0)) throw ValidationError("single_mode_variance: C must be > 0");
  if (!(D >= 0.0)) throw ValidationError("single_mode_variance: D must be >= 0");
  if (!(t >= 0.0)) throw ValidationError("single_mode_variance: t must be >= 0");
  SingleModePoint p;
  p.t = t;
  p.u = 2.0 * C * t;
  p.variance = 0.25 * clamped_exp(-2.0 * p.u, p.clamped) + 0.125 * clamped_exp(2.0 * p.u, p.clamped) * D * t;
  p.inside_window = validity_window(C, D).contains(t);
  return p;
}

inline SingleModePoint single_mode_variance_at_u(double C, double D, double u) {
  return single_mode_variance(C, D, u / (2.0 * C));
}

struct OptimalSqueezing {
  enum class Kind {
    interior,         // unique interior minimum found
    no_interior_min,  // D = 0: variance decreases forever
    at_origin,        // noise so strong the vacuum is already optimal
  };
  Kind kind = Kind::interior;
  double u_star = 0.0;
  double min_variance = vacuum_variance;
  bool outside_window_regime = false;  // D >= 2C, the closed form is outside its domain
};

/// Minimizes the single-mode variance over u >= 0. The variance is strictly
/// convex in u, so its stationarity condition, written in log form
///   ln(D/(16C)) + 4u + ln(1+2u) + ln 2 = 0,
/// is increasing and is solved with a bracketed Newton iteration.
inline OptimalSqueezing optimal_single_mode_squeezing(double C, double D, double u_tol = 1e-12) {
  if (!(C > 0.0)) throw ValidationError("optimal_single_mode_squeezing: C must be > 0");
  if (!(D >= 0.0)) throw ValidationError("optimal_single_mode_squeezing: D must be >= 0");
  OptimalSqueezing out;
  out.outside_window_regime = D >= 2.0 * C;
  if (D == 0.0) {
    out.kind = OptimalSqueezing::Kind::no_interior_min;
    out.u_star = std::numeric_limits<double>::infinity();
    out.min_variance = 0.0;
    return out;
  }
  const double log_a = std::log(D / (16.0 * C));
  auto g = [&](double u) { return log_a + 4.0 * u + std::log1p(2.0 * u) + std::numbers::ln2; };
  auto dg = [](double u) { return 4.0 + 2.0 / (1.0 + 2.0 * u); };
  if (g(0.0) >= 0.0) {
    out.kind = OptimalSqueezing::Kind::at_origin;
    out.u_star = 0.0;
    out.min_variance = vacuum_variance;
    return out;
  }
  double lo = 0.0, hi = 1.0;
  while (g(hi) < 0.0) hi *= 2.0;
  double u = 0.5 * (lo + hi);
  for (int iter = 0; iter < 200; ++iter) {
    const double gu = g(u);
    if (gu < 0.0) lo = u; else hi = u;
    double next = u - gu / dg(u);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    const bool done = std::abs(next - u) <= u_tol * std::max(1.0, u);
    u = next;
    if (done || hi - lo <= u_tol) break;
  }
  out.u_star = u;
  out.min_variance = single_mode_variance_at_u(C, D, u).variance;
  return out;
}

// --- two mode -------------------------------------------------------------------

struct CouplingRoot {
  cplx value;               // C_k0 = sqrt(4 C_k^2 - D^2) / 2, imaginary when overdamped
  bool overdamped = false;  // D > 2|C_k|
  bool branch_point = false;  // D == 2|C_k|, C_k0 = 0
};

inline CouplingRoot c_k0(double C_k, double D) {
  if (C_k == 0.0) throw ValidationError("c_k0: C_k must be nonzero");
  CouplingRoot r;
  const double disc = 4.0 * C_k * C_k - D * D;
  r.value = 0.5 * std::sqrt(cplx(disc, 0.0));
  r.overdamped = disc < 0.0;
  r.branch_point = disc == 0.0;
  return r;
}

/// lambda^3 + 5D lambda^2 + (4D^2 - C_k0^2) lambda - 2 C_k0^2 D.
inline MonicCubic characteristic_cubic(double D, cplx C_k0) {
  const double c2 = (C_k0 * C_k0).real();
  return {5.0 * D, 4.0 * D * D - c2, -2.0 * c2 * D};
}

inline CubicRoots cubic_roots(double D, cplx C_k0) {
  if (!(D >= 0.0)) throw ValidationError("cubic_roots: D must be >= 0");
  return solve_cubic(characteristic_cubic(D, C_k0));
}

/// sum_i e^{lambda_i t} 2 C_k0 (lambda_i + 4D) / prod_{j != i} (lambda_i - lambda_j).
/// Visits the roots in the given order; the value is symmetric in that order.
inline cplx residue_sum(std::span<const cplx, 3> roots, double D, cplx C_k0, double t, bool& clamped) {
  cplx total = 0.0;
  for (std::size_t i = 0; i < 3; ++i) {
    cplx denom = 1.0;
    for (std::size_t j = 0; j < 3; ++j)
      if (j != i) denom *= roots[i] - roots[j];
    total += clamped_exp(roots[i] * t, clamped) * 2.0 * C_k0 * (roots[i] + 4.0 * D) / denom;
  }
  return total;
}

/// The residue sum as the solution of the third-order linear ODE whose
/// characteristic polynomial is the cubic. Regular for coincident roots.
/// Integrates z''' = -5D z'' - (4D^2 - C_k0^2) z' + 2 C_k0^2 D z with
/// z(0) = 0, z'(0) = 1, z''(0) = -D and returns 2 C_k0 z(t).
inline cplx laplace_ode_oracle(double D, cplx C_k0, double t, double rtol = 1e-10) {
  if (!(t >= 0.0)) throw ValidationError("laplace_ode_oracle: t must be >= 0");
  const double c2 = (C_k0 * C_k0).real();
  const double scale = std::max(D, std::sqrt(std::abs(c2)));
  if (!(scale > 0.0)) return 0.0;  // D = C_k0 = 0: prefactor vanishes
  // Dimensionless time tau = scale t and w = (scale z, z', z''/scale).
  const double d = D / scale;
  const double q = c2 / (scale * scale);
  auto rhs = [d, q](double, const ode::State<3>& w) -> ode::State<3> {
    return {w[1], w[2], -5.0 * d * w[2] - (4.0 * d * d - q) * w[1] + 2.0 * q * d * w[0]};
  };
  ode::Tolerances tol;
  tol.rtol = rtol;
  tol.atol = 1e-15;
  const auto w = ode::integrate<3>(rhs, ode::State<3>{0.0, 1.0, -d}, 0.0, scale * t, tol);
  return 2.0 * C_k0 * (w[0] / scale);
}

struct TwoModePoint {
  enum class Path { closed_form, ode_oracle };
  double t = 0.0;
  double u = 0.0;
  double sum = separability_bound;
  double imag_residue = 0.0;
  double rounding = 0.0;  // bound on the cancellation error in sum
  Path path = Path::closed_form;
  bool overdamped = false;
  bool clamped = false;

  bool entangled() const { return sum < separability_bound; }
};

/// Two-mode variance sum for fixed (C_k, D). Roots and C_k0 are computed once.
class TwoModeModel {
 public:
  TwoModeModel(double C_k, double D) : C_k_(std::abs(C_k)), D_(D), root_(c_k0(C_k, D)) {
    if (!(D >= 0.0)) throw ValidationError("two_mode_variance_sum: D must be >= 0");
    roots_ = cubic_roots(D, root_.value);
    use_oracle_ = roots_.is_degenerate || root_.overdamped;
  }

  double C_k() const { return C_k_; }
  double D() const { return D_; }
  const CouplingRoot& coupling_root() const { return root_; }
  const CubicRoots& roots() const { return roots_; }
  bool uses_oracle() const { return use_oracle_; }

  /// u = 2 |C_k0| t.
  double u_of_t(double t) const { return 2.0 * std::abs(root_.value) * t; }
  double t_of_u(double u) const {
    const double c = std::abs(root_.value);
    if (!(c > 0.0)) throw ValidationError("two-mode u axis undefined at C_k0 = 0");
    return u / (2.0 * c);
  }

  /// e^{-Dt/2} { D t sinhc(C_k0 t) + 2 cosh(C_k0 t) }, with sinhc(x) = sinh(x)/x.
  cplx damped_term(double t, bool& clamped) const {
    const cplx x = root_.value * t;
    const cplx sinhc = std::abs(x) < 1e-4 ? 1.0 + x * x / 6.0 + x * x * x * x / 120.0
                                          : (clamped_exp(x, clamped) - clamped_exp(-x, clamped)) / (2.0 * x);
    const cplx cosh = 0.5 * (clamped_exp(x, clamped) + clamped_exp(-x, clamped));
    return clamped_exp(-0.5 * D_ * t, clamped) * (D_ * t * sinhc + 2.0 * cosh);
  }

  cplx closed_form_residue(double t, bool& clamped) const {
    return residue_sum(roots_.lambda, D_, root_.value, t, clamped);
  }

  TwoModePoint at_t(double t) const {
    if (!(t >= 0.0)) throw ValidationError("two_mode_variance_sum: t must be >= 0");
    TwoModePoint p;
    p.t = t;
    p.u = u_of_t(t);
    p.overdamped = root_.overdamped;
    cplx residue;
    if (use_oracle_) {
      p.path = TwoModePoint::Path::ode_oracle;
      residue = laplace_ode_oracle(D_, root_.value, t);
    } else {
      residue = closed_form_residue(t, p.clamped);
    }
    const cplx first = damped_term(t, p.clamped);
    const cplx total = first - residue;
    p.sum = total.real();
    p.imag_residue = std::abs(total.imag());
    p.rounding = std::max(std::abs(first), std::abs(residue)) * (use_oracle_ ? 1e-9 : 1e-13);
    // The overdamped branch is intrinsically complex; everywhere else the
    // imaginary part must be rounding noise.
    if (!root_.overdamped) {
      const double ref = std::max({std::abs(total.real()), std::abs(first), std::abs(residue)});
      if (p.imag_residue > 1e-9 * ref)
        throw NumericalError("two_mode_variance_sum: imaginary residue exceeds tolerance");
    }
    return p;
  }

  TwoModePoint at_u(double u) const { return at_t(t_of_u(u)); }

 private:
  double C_k_;
  double D_;
  CouplingRoot root_;
  CubicRoots roots_;
  bool use_oracle_ = false;
};

inline TwoModePoint two_mode_variance_sum(double C_k, double D, double t) {
  return TwoModeModel(C_k, D).at_t(t);
}

// --- entanglement window ----------------------------------------------------------

struct EntanglementWindow {
  enum class Status {
    finite,      // sum < 2 on (t_enter, t_exit)
    open,        // sum < 2 from t_enter on, as far as rounding lets it be followed
    empty,       // sum never drops below 2
    unphysical,  // the closed form turns negative before re-crossing 2
    overdamped,  // D > 2|C_k|, the variance sum is not real-valued
  };
  Status status = Status::empty;
  double t_enter = 0.0;
  double t_exit = std::numeric_limits<double>::infinity();

  bool has_window() const { return status == Status::finite || status == Status::open; }
};

inline std::string_view to_string(EntanglementWindow::Status s) {
  using S = EntanglementWindow::Status;
  switch (s) {
    case S::finite: return "finite";
    case S::open: return "open";
    case S::empty: return "empty";
    case S::unphysical: return "unphysical";
    case S::overdamped: return "overdamped";
  }
  return "?";
}

namespace detail {

/// Bisects f(t) - level on [a, b] where the sign changes, to relative width rtol.
template <typename F>
double bisect_crossing(F&& f, double level, double a, double b, double rtol) {
  const bool a_below = f(a) < level;
  for (int i = 0; i < 200 && (b - a) > rtol * std::max(std::abs(a), std::abs(b)); ++i) {
    const double m = 0.5 * (a + b);
    if ((f(m) < level) == a_below) a = m; else b = m;
  }
  return 0.5 * (a + b);
}

}  // namespace detail

/// First time interval on which the two-mode variance sum is below 2.
inline EntanglementWindow entanglement_window(double C_k, double D, double rtol = 1e-9) {
  const TwoModeModel model(C_k, D);
  EntanglementWindow w;
  const auto& root = model.coupling_root();
  if (root.overdamped) {
    w.status = EntanglementWindow::Status::overdamped;
    return w;
  }
  auto sum = [&](double t) { return model.at_t(t).sum; };

  const double rate = std::max(D, std::abs(root.value));
  const double dt = 0.02 / rate;
  // Scan until the exponentials would hit the clamp, or until cancellation
  // between the growing terms leaves the sum unresolved.
  const double horizon = 0.9 * max_exponent / rate;
  constexpr double resolution = 1e-7;

  // The slope at t = 0 is -2 C_k0 < 0, but scan rather than assume it.
  double t_prev = 0.0;
  double t = dt;
  TwoModePoint p = model.at_t(t);
  if (p.sum < separability_bound) {
    w.t_enter = 0.0;
  } else {
    while (p.sum >= separability_bound && t < horizon && p.rounding < resolution) {
      t_prev = t;
      t += dt;
      p = model.at_t(t);
    }
    if (p.sum >= separability_bound) {
      w.status = EntanglementWindow::Status::empty;
      return w;
    }
    w.t_enter = detail::bisect_crossing(sum, separability_bound, t_prev, t, rtol);
  }

  while (p.sum < separability_bound && t < horizon && p.rounding < resolution) {
    if (p.sum < -p.rounding) {
      w.status = EntanglementWindow::Status::unphysical;
      w.t_exit = std::numeric_limits<double>::infinity();
      return w;
    }
    t_prev = t;
    t += dt;
    p = model.at_t(t);
  }
  if (p.sum < separability_bound) {
    // Not re-crossed while the sum is resolvable: below 2 as far as it can be followed.
    w.status = p.sum < -p.rounding ? EntanglementWindow::Status::unphysical : EntanglementWindow::Status::open;
    return w;
  }
  w.status = EntanglementWindow::Status::finite;
  w.t_exit = detail::bisect_crossing(sum, separability_bound, t_prev, t, rtol);
  return w;
}

// --- traces -----------------------------------------------------------------------

struct TracePoint {
  double t = 0.0;
  double u = 0.0;
  double value = 0.0;
  bool inside_window = true;  // single mode: D < 1/t < 2C; two mode: always true
  bool clamped = false;
};

struct VarianceTrace {
  enum class Kind { single_mode, two_mode };
  Kind kind = Kind::single_mode;
  std::vector<TracePoint> points;
  std::vector<double> threshold_crossings;  // t where value crosses 1/4 or 2

  double threshold() const { return kind == Kind::single_mode ? vacuum_variance : separability_bound; }
};

/// Evenly spaced u grid on [u_min, u_max], count >= 2.
inline std::vector<double> linear_grid(double lo, double hi, std::size_t count) {
  if (count < 2) throw ValidationError("grid needs at least 2 points");
  if (!(hi > lo) || !std::isfinite(lo) || !std::isfinite(hi))
    throw ValidationError("grid range must be finite and increasing");
  std::vector<double> g(count);
  for (std::size_t i = 0; i < count; ++i)
    g[i] = i + 1 == count ? hi : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
  return g;
}

namespace detail {

template <typename F>
std::vector<double> refine_crossings(const std::vector<TracePoint>& pts, double level, F&& value_at_t) {
  std::vector<double> out;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    const bool a = pts[i - 1].value < level;
    const bool b = pts[i].value < level;
    // A trace that starts exactly on the level (vacuum at t = 0) is not a crossing.
    if (a != b && !(i == 1 && pts[0].value == level)) out.push_back(bisect_crossing(value_at_t, level, pts[i - 1].t, pts[i].t, 1e-12));
  }
  return out;
}

}  // namespace detail

inline VarianceTrace single_mode_trace(double C, double D, std::span<const double> u_grid) {
  VarianceTrace tr;
  tr.kind = VarianceTrace::Kind::single_mode;
  tr.points.resize(u_grid.size());
  parallel_for(u_grid.size(), [&](std::size_t i) {
    const auto p = single_mode_variance_at_u(C, D, u_grid[i]);
    tr.points[i] = {p.t, p.u, p.variance, p.inside_window, p.clamped};
  });
  tr.threshold_crossings = detail::refine_crossings(
      tr.points, tr.threshold(), [&](double t) { return single_mode_variance(C, D, t).variance; });
  return tr;
}

inline VarianceTrace two_mode_trace(double C_k, double D, std::span<const double> u_grid) {
  const TwoModeModel model(C_k, D);
  VarianceTrace tr;
  tr.kind = VarianceTrace::Kind::two_mode;
  tr.points.resize(u_grid.size());
  parallel_for(u_grid.size(), [&](std::size_t i) {
    const auto p = model.at_u(u_grid[i]);
    tr.points[i] = {p.t, p.u, p.sum, true, p.clamped};
  });
  tr.threshold_crossings =
      detail::refine_crossings(tr.points, tr.threshold(), [&](double t) { return model.at_t(t).sum; });
  return tr;
}

}  // namespace cantisq
