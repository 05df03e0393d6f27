#pragma once

// Exact evolution in a truncated Fock basis. Used as an independent check on
// the classical-pump squeezing formulas and to probe a quantized pump at low
// occupation.
//
// Hamiltonians are stored as H / hbar in rad/s. With a real coupling C the
// squeezed quadrature of -C (b^2 + b^dag^2) sits at -pi/4; the pump phase
// argument rotates the coupling so that the default squeezes x1 (and s1, s2).

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <numbers>
#include <span>
#include <vector>

#include <Eigen/Sparse>

#include "cantisq/status.hpp"

namespace cantisq::fock {

using cplx = std::complex<double>;
using Operator = Eigen::SparseMatrix<cplx, Eigen::RowMajor>;
using Vector = Eigen::VectorXcd;

/// Pump phase that makes x1 = (b + b^dag)/2 the squeezed quadrature.
inline constexpr double squeeze_x1_phase = -std::numbers::pi / 2.0;

inline constexpr double default_tail_threshold = 1e-6;
inline constexpr double max_norm_deficit = 1e-8;

/// Product basis of one or two bosonic modes, index = n0 * (cut1 + 1) + n1.
struct Basis {
  std::array<int, 2> cutoffs{0, 0};  // n_max per mode; second is 0 for one mode
  int modes = 1;

  static Basis single(int n_max) { return {{n_max, 0}, 1}; }
  static Basis pair(int n_max0, int n_max1) { return {{n_max0, n_max1}, 2}; }

  std::size_t dim() const {
    return static_cast<std::size_t>(cutoffs[0] + 1) * static_cast<std::size_t>(cutoffs[1] + 1);
  }
  std::size_t index(int n0, int n1 = 0) const {
    return static_cast<std::size_t>(n0) * static_cast<std::size_t>(cutoffs[1] + 1) + static_cast<std::size_t>(n1);
  }
  std::array<int, 2> occupations(std::size_t i) const {
    const auto w = static_cast<std::size_t>(cutoffs[1] + 1);
    return {static_cast<int>(i / w), static_cast<int>(i % w)};
  }
};

struct TruncatedState {
  Basis basis;
  Vector amplitudes;
  double norm_deficit = 0.0;  // 1 - <psi|psi>
  double tail_mass = 0.0;     // probability in the top 10 % of levels of any mode
  bool cutoff_limited = false;

  double probability(int n0, int n1 = 0) const { return std::norm(amplitudes(static_cast<Eigen::Index>(basis.index(n0, n1)))); }
};

// --- operators ------------------------------------------------------------------

/// Annihilation operator of `mode` in the product basis.
inline Operator lowering(const Basis& basis, int mode) {
  std::vector<Eigen::Triplet<cplx>> t;
  for (std::size_t i = 0; i < basis.dim(); ++i) {
    auto n = basis.occupations(i);
    const int k = n[static_cast<std::size_t>(mode)];
    if (k == 0) continue;
    n[static_cast<std::size_t>(mode)] = k - 1;
    t.emplace_back(static_cast<int>(basis.index(n[0], n[1])), static_cast<int>(i), std::sqrt(double(k)));
  }
  Operator op(static_cast<Eigen::Index>(basis.dim()), static_cast<Eigen::Index>(basis.dim()));
  op.setFromTriplets(t.begin(), t.end());
  return op;
}

inline Operator adjoint(const Operator& op) { return Operator(op.adjoint()); }

/// H/hbar = -C (e^{i phase} b^2 + e^{-i phase} b^dag^2).
inline Operator single_mode_hamiltonian(double C, int n_max, double phase = squeeze_x1_phase) {
  const auto basis = Basis::single(n_max);
  const Operator b = lowering(basis, 0);
  const Operator b2 = b * b;
  const cplx w = std::polar(1.0, phase);
  return Operator(-C * (w * b2 + std::conj(w) * adjoint(b2)));
}

/// H/hbar = -C_k (e^{i phase} b+ b- + e^{-i phase} b+^dag b-^dag).
inline Operator two_mode_hamiltonian(double C_k, int n_max, double phase = squeeze_x1_phase) {
  const auto basis = Basis::pair(n_max, n_max);
  const Operator pair = lowering(basis, 0) * lowering(basis, 1);
  const cplx w = std::polar(1.0, phase);
  return Operator(-C_k * (w * pair + std::conj(w) * adjoint(pair)));
}

/// H/hbar = g (a b^dag^2 + a^dag b^2); mode 0 is the cantilever, mode 1 the molecule.
inline Operator pump_hamiltonian(double g, int pump_max, int molecule_max) {
  const auto basis = Basis::pair(pump_max, molecule_max);
  const Operator a = lowering(basis, 0);
  const Operator b = lowering(basis, 1);
  const Operator ab2dag = a * adjoint(b * b);
  return Operator(g * (ab2dag + adjoint(ab2dag)));
}

// --- states ---------------------------------------------------------------------

inline Vector vacuum(const Basis& basis) {
  Vector v = Vector::Zero(static_cast<Eigen::Index>(basis.dim()));
  v(0) = 1.0;
  return v;
}

/// Coherent state in mode 0 (truncated at its cutoff) times vacuum in mode 1.
inline Vector coherent_times_vacuum(const Basis& basis, cplx alpha) {
  Vector v = Vector::Zero(static_cast<Eigen::Index>(basis.dim()));
  // c_n = e^{-|alpha|^2/2} alpha^n / sqrt(n!)
  cplx c = std::exp(-0.5 * std::norm(alpha));
  for (int n = 0; n <= basis.cutoffs[0]; ++n) {
    if (n > 0) c *= alpha / std::sqrt(double(n));
    v(static_cast<Eigen::Index>(basis.index(n, 0))) = c;
  }
  return v;
}

inline double tail_mass(const Basis& basis, const Vector& psi) {
  std::array<int, 2> first_top{};
  for (std::size_t m = 0; m < 2; ++m) {
    const int levels = basis.cutoffs[m] + 1;
    first_top[m] = levels - std::max(1, levels / 10);
  }
  double tail = 0.0;
  for (std::size_t i = 0; i < basis.dim(); ++i) {
    const auto n = basis.occupations(i);
    const bool top0 = n[0] >= first_top[0];
    const bool top1 = basis.modes == 2 && n[1] >= first_top[1];
    if (top0 || top1) tail += std::norm(psi(static_cast<Eigen::Index>(i)));
  }
  return tail;
}

inline TruncatedState make_state(const Basis& basis, Vector psi, double tail_threshold = default_tail_threshold) {
  TruncatedState s;
  s.basis = basis;
  s.norm_deficit = 1.0 - psi.squaredNorm();
  s.tail_mass = tail_mass(basis, psi);
  s.cutoff_limited = s.tail_mass > tail_threshold;
  s.amplitudes = std::move(psi);
  return s;
}

// --- propagation ----------------------------------------------------------------

/// Max absolute row sum, an upper bound on the spectral norm of a Hermitian matrix.
inline double row_sum_norm(const Operator& h) {
  double m = 0.0;
  for (Eigen::Index r = 0; r < h.outerSize(); ++r) {
    double s = 0.0;
    for (Operator::InnerIterator it(h, r); it; ++it) s += std::abs(it.value());
    m = std::max(m, s);
  }
  return m;
}

struct PropagationOptions {
  double max_norm_step = 0.05;  // ||H|| dt per step
  double series_tol = 1e-17;
};

/// psi <- exp(-i H t) psi, applied as fixed steps of a Taylor series summed to
/// rounding level. The norm is monitored and never renormalized.
inline void propagate(const Operator& h, Vector& psi, double t, const PropagationOptions& opt = {}) {
  if (!(t >= 0.0)) throw ValidationError("propagate: t must be >= 0");
  if (t == 0.0) return;
  const double hn = row_sum_norm(h);
  if (hn == 0.0) return;
  const auto steps = static_cast<long>(std::ceil(hn * t / opt.max_norm_step));
  const double dt = t / static_cast<double>(steps);
  const double norm0 = psi.squaredNorm();
  Vector term(psi.size());
  for (long s = 0; s < steps; ++s) {
    term = psi;
    for (int k = 1; k < 60; ++k) {
      term = (h * term) * cplx(0.0, -dt / k);
      psi += term;
      if (term.norm() <= opt.series_tol * psi.norm()) break;
    }
  }
  if (std::abs(psi.squaredNorm() - norm0) > max_norm_deficit)
    throw NumericalError("propagate: norm drift exceeds 1e-8");
}

// --- observables ----------------------------------------------------------------

inline double expectation_real(const Operator& op, const Vector& psi) { return psi.dot(op * psi).real(); }

/// Variance of a Hermitian operator, <O^2> - <O>^2 with <O^2> = ||O psi||^2.
inline double variance(const Operator& op, const Vector& psi) {
  const Vector o = op * psi;
  const double mean = psi.dot(o).real();
  return o.squaredNorm() - mean * mean;
}

/// x_theta = (b e^{-i theta} + b^dag e^{i theta}) / 2 on `mode`.
inline Operator quadrature(const Basis& basis, int mode, double theta = 0.0) {
  const Operator b = lowering(basis, mode);
  const cplx w = std::polar(1.0, -theta);
  return Operator(0.5 * (w * b + std::conj(w) * adjoint(b)));
}

inline double quadrature_variance(const TruncatedState& s, int mode = 0, double theta = 0.0) {
  return variance(quadrature(s.basis, mode, theta), s.amplitudes);
}

struct TwoModeVariances {
  double s1 = 0.0;
  double s2 = 0.0;
  double sum() const { return s1 + s2; }
};

/// s1 = (b+ + b- + h.c.) / sqrt 2, s2 = (b+ - b+^dag - b- + b-^dag) / (i sqrt 2).
inline TwoModeVariances two_mode_quadrature_variances(const TruncatedState& s) {
  const Operator bp = lowering(s.basis, 0);
  const Operator bm = lowering(s.basis, 1);
  const Operator bpd = adjoint(bp);
  const Operator bmd = adjoint(bm);
  const double r = 1.0 / std::numbers::sqrt2;
  const Operator s1 = r * (bp + bm + bpd + bmd);
  const Operator s2 = cplx(0.0, -r) * (bp - bpd - bm + bmd);
  return {variance(s1, s.amplitudes), variance(s2, s.amplitudes)};
}

inline double occupation(const TruncatedState& s, int mode) {
  double n = 0.0;
  for (std::size_t i = 0; i < s.basis.dim(); ++i)
    n += s.basis.occupations(i)[static_cast<std::size_t>(mode)] * std::norm(s.amplitudes(static_cast<Eigen::Index>(i)));
  return n;
}

// --- runs -----------------------------------------------------------------------

inline TruncatedState evolve_single_mode(double C, double t, int n_max = 60, double phase = squeeze_x1_phase) {
  if (n_max < 2) throw ValidationError("evolve_single_mode: n_max must be >= 2");
  const auto basis = Basis::single(n_max);
  Vector psi = vacuum(basis);
  propagate(single_mode_hamiltonian(C, n_max, phase), psi, t);
  return make_state(basis, std::move(psi));
}

inline TruncatedState evolve_two_mode(double C_k, double t, int n_max = 40, double phase = squeeze_x1_phase) {
  if (n_max < 1) throw ValidationError("evolve_two_mode: n_max must be >= 1");
  const auto basis = Basis::pair(n_max, n_max);
  Vector psi = vacuum(basis);
  propagate(two_mode_hamiltonian(C_k, n_max, phase), psi, t);
  return make_state(basis, std::move(psi));
}

struct PumpCutoffs {
  int pump = 0;      // 0 picks nbar + 10 sqrt(nbar) + 20
  int molecule = 40;
};

struct PumpSample {
  double t = 0.0;
  double u = 0.0;                    // 2 g |alpha0| t
  double variance = 0.25;            // molecule x1
  double classical_variance = 0.25;  // e^{-2u}/4
  double pump_occupation = 0.0;      // <a^dag a>
  double excitation = 0.0;           // <a^dag a> + <b^dag b>/2
  double norm_deficit = 0.0;
  double tail_mass = 0.0;
};

struct PumpReport {
  double g = 0.0;
  double alpha0 = 0.0;
  PumpCutoffs cutoffs;
  std::vector<PumpSample> samples;
  double max_excitation_drift = 0.0;
  bool cutoff_limited = false;
  bool squeezed = false;  // variance < 1/4 at some sample
};

/// Cantilever treated as a quantum mode in a coherent state of amplitude
/// alpha0 (phase chosen so x1 of the molecule is squeezed), molecule in vacuum,
/// H = hbar g (a b^dag^2 + a^dag b^2). `times` must be ascending.
inline PumpReport quantized_pump_run(double g, double alpha0, std::span<const double> times,
                                     PumpCutoffs cutoffs = {}) {
  if (!(alpha0 >= 0.0)) throw ValidationError("quantized_pump_run: alpha0 must be >= 0");
  if (!std::is_sorted(times.begin(), times.end()) || (!times.empty() && times.front() < 0.0))
    throw ValidationError("quantized_pump_run: times must be ascending and >= 0");
  const double nbar = alpha0 * alpha0;
  if (cutoffs.pump <= 0) cutoffs.pump = static_cast<int>(std::ceil(nbar + 10.0 * std::sqrt(nbar) + 20.0));
  const auto basis = Basis::pair(cutoffs.pump, cutoffs.molecule);
  const Operator h = pump_hamiltonian(g, cutoffs.pump, cutoffs.molecule);
  const Operator x1 = quadrature(basis, 1, 0.0);

  Vector psi = coherent_times_vacuum(basis, cplx(0.0, -alpha0));
  PumpReport rep;
  rep.g = g;
  rep.alpha0 = alpha0;
  rep.cutoffs = cutoffs;
  double now = 0.0;
  const auto initial = make_state(basis, psi);
  const double excitation0 = occupation(initial, 0) + 0.5 * occupation(initial, 1);
  for (std::size_t i = 0; i < times.size(); ++i) {
    propagate(h, psi, times[i] - now);
    now = times[i];
    const auto state = make_state(basis, psi);
    PumpSample s;
    s.t = now;
    s.u = 2.0 * g * alpha0 * now;
    s.variance = variance(x1, psi);
    s.classical_variance = 0.25 * std::exp(-2.0 * s.u);
    s.pump_occupation = occupation(state, 0);
    s.excitation = s.pump_occupation + 0.5 * occupation(state, 1);
    s.norm_deficit = state.norm_deficit;
    s.tail_mass = state.tail_mass;
    rep.max_excitation_drift = std::max(rep.max_excitation_drift, std::abs(s.excitation - excitation0));
    rep.cutoff_limited = rep.cutoff_limited || state.cutoff_limited;
    rep.squeezed = rep.squeezed || s.variance < 0.25;
    rep.samples.push_back(s);
  }
  return rep;
}

}  // namespace cantisq::fock
