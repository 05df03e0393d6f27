#pragma once

// Equilibrium and small oscillations of N dipoles in a harmonic axial trap.
//
// Internally the chain is solved in natural units: lengths in
// L = (A / (m w^2))^{1/5} with A = d^2 / (4 pi eps0), energies in A / L^3. In
// those units U = sum_{i<j} |xi_i - xi_j|^-3 + 1/2 sum_i xi_i^2, which is
// convex on the ordered region, so damped Newton converges from any ordered
// start.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numbers>
#include <span>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include "cantisq/jacobi.hpp"
#include "cantisq/quantities.hpp"
#include "cantisq/status.hpp"

namespace cantisq {

struct EnergyGradient {
  double energy = 0.0;            // J
  std::vector<double> gradient;   // N per coordinate
};

namespace lattice_detail {

inline void require_distinct(std::span<const double> x) {
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = i + 1; j < x.size(); ++j)
      if (x[i] == x[j]) throw ValidationError("chain_energy: coincident molecule positions");
}

/// Energy and gradient of U(x) = a sum |xi - xj|^-3 + k/2 sum xi^2.
inline EnergyGradient energy_gradient(std::span<const double> x, double a, double k) {
  require_distinct(x);
  EnergyGradient out;
  out.gradient.assign(x.size(), 0.0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    out.energy += 0.5 * k * x[i] * x[i];
    out.gradient[i] += k * x[i];
    for (std::size_t j = i + 1; j < x.size(); ++j) {
      const double r = x[i] - x[j];
      const double ar = std::abs(r);
      out.energy += a / (ar * ar * ar);
      // d/dxi |r|^-3 = -3 sign(r) |r|^-4
      const double f = -3.0 * a * std::copysign(1.0, r) / (ar * ar * ar * ar);
      out.gradient[i] += f;
      out.gradient[j] -= f;
    }
  }
  return out;
}

/// U(y) - U(x) for two orderings-compatible configurations, summed from the
/// displacements so that the difference keeps full relative precision even
/// when it is far below the rounding error of U itself.
inline double energy_change(std::span<const double> x, std::span<const double> y, double a, double k) {
  const std::size_t n = x.size();
  std::vector<double> d(n);
  for (std::size_t i = 0; i < n; ++i) d[i] = y[i] - x[i];  // exact for nearby values
  double change = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    change += 0.5 * k * d[i] * (2.0 * x[i] + d[i]);
    for (std::size_t j = i + 1; j < n; ++j) {
      const double r = x[i] - x[j];
      const double p = std::abs(r);
      const double q = std::abs(y[i] - y[j]);
      const double dp = std::copysign(1.0, r) * (d[i] - d[j]);  // q - p
      // q^-3 - p^-3 = -(q - p)(p^2 + p q + q^2) / (p^3 q^3)
      change -= a * dp * (p * p + p * q + q * q) / (p * p * p * q * q * q);
    }
  }
  return change;
}

inline SquareMatrix<double> hessian(std::span<const double> x, double a, double k) {
  require_distinct(x);
  const std::size_t n = x.size();
  SquareMatrix<double> h(n);
  for (std::size_t i = 0; i < n; ++i) {
    h(i, i) += k;
    for (std::size_t j = i + 1; j < n; ++j) {
      const double ar = std::abs(x[i] - x[j]);
      const double c = 12.0 * a / std::pow(ar, 5);
      h(i, i) += c;
      h(j, j) += c;
      h(i, j) -= c;
      h(j, i) -= c;
    }
  }
  return h;
}

inline bool strictly_increasing(std::span<const double> x) {
  return std::adjacent_find(x.begin(), x.end(), std::greater_equal<>()) == x.end();
}

}  // namespace lattice_detail

/// U = (d^2 / 4 pi eps0) sum_{i<j} |xi - xj|^-3 + m w_t^2 / 2 sum xi^2, with gradient.
inline EnergyGradient chain_energy(std::span<const double> positions, const MoleculeSpecies& species,
                                   double trap_omega_t, const PhysicalConstants& k = codata) {
  return lattice_detail::energy_gradient(positions, dipole_strength(species.dipole, species.dipole, k),
                                         species.mass * trap_omega_t * trap_omega_t);
}

inline SquareMatrix<double> chain_hessian(std::span<const double> positions, const MoleculeSpecies& species,
                                          double trap_omega_t, const PhysicalConstants& k = codata) {
  return lattice_detail::hessian(positions, dipole_strength(species.dipole, species.dipole, k),
                                 species.mass * trap_omega_t * trap_omega_t);
}

struct ChainConfiguration {
  std::vector<double> positions;  // m, ascending
  MoleculeSpecies species;
  double trap_omega_t = 0.0;
  double gradient_norm = 0.0;     // max |dU/dx_i|, N
  double force_tolerance = 0.0;   // N
  bool converged = false;
  int iterations = 0;
  std::vector<double> energy_history;  // J, one entry per accepted iterate

  double mean_spacing() const {
    if (positions.size() < 2) return 0.0;
    return (positions.back() - positions.front()) / static_cast<double>(positions.size() - 1);
  }

  /// Spacing at the middle of the chain (average of the two central bonds for odd N).
  double central_spacing() const {
    const std::size_t n = positions.size();
    if (n < 2) return 0.0;
    if (n % 2 == 0) return positions[n / 2] - positions[n / 2 - 1];
    if (n == 3) return 0.5 * (positions[2] - positions[0]);
    return 0.5 * (positions[n / 2 + 1] - positions[n / 2 - 1]);
  }
};

/// Natural length (A / (m w^2))^{1/5}.
inline double chain_length_unit(const MoleculeSpecies& species, double trap_omega_t,
                                const PhysicalConstants& k = codata) {
  const double a = dipole_strength(species.dipole, species.dipole, k);
  return std::pow(a / (species.mass * trap_omega_t * trap_omega_t), 0.2);
}

struct EquilibriumOptions {
  double relative_force_tol = 1e-12;
  int max_iterations = 200;
};

namespace lattice_detail {

struct NaturalSolution {
  std::vector<double> xi;
  std::vector<double> energy_history;
  double max_force = 0.0;
  double force_scale = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Minimizes sum |xi_i - xi_j|^-3 + 1/2 sum xi^2.
inline NaturalSolution solve_natural(int n, const EquilibriumOptions& opt) {
  NaturalSolution sol;
  if (n == 1) {
    sol.xi = {0.0};
    sol.energy_history = {0.0};
    sol.converged = true;
    return sol;
  }
  // Uniform lattice at the two-body spacing 6^{1/5}, centred.
  const double s2 = std::pow(6.0, 0.2);
  std::vector<double> x(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) x[static_cast<std::size_t>(i)] = s2 * (i - 0.5 * (n - 1));
  // Exact rescale: U(lambda) = lambda^-3 U_dip + lambda^2 U_trap.
  {
    const auto dip = energy_gradient(x, 1.0, 0.0).energy;
    double trap = 0.0;
    for (double v : x) trap += 0.5 * v * v;
    const double lambda = std::pow(1.5 * dip / trap, 0.2);
    for (double& v : x) v *= lambda;
  }

  auto eg = energy_gradient(x, 1.0, 1.0);
  // Tracked as the start value plus exact decrements, so the history is monotone.
  double energy = eg.energy;
  sol.energy_history.push_back(energy);
  auto max_abs = [](const std::vector<double>& g) {
    double m = 0.0;
    for (double v : g) m = std::max(m, std::abs(v));
    return m;
  };
  auto force_scale = [&] {
    const double s = (x.back() - x.front()) / (n - 1);
    return 1.0 / std::pow(s, 4);
  };

  const auto un = static_cast<Eigen::Index>(n);
  for (int it = 0; it < opt.max_iterations; ++it) {
    sol.max_force = max_abs(eg.gradient);
    sol.force_scale = force_scale();
    if (sol.max_force < opt.relative_force_tol * sol.force_scale) {
      sol.converged = true;
      break;
    }
    const auto h = hessian(x, 1.0, 1.0);
    Eigen::MatrixXd hm(un, un);
    Eigen::VectorXd g(un);
    for (Eigen::Index i = 0; i < un; ++i) {
      g(i) = eg.gradient[static_cast<std::size_t>(i)];
      for (Eigen::Index j = 0; j < un; ++j) hm(i, j) = h(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
    }
    Eigen::LLT<Eigen::MatrixXd> llt(hm);
    if (llt.info() != Eigen::Success) throw NumericalError("equilibrium_positions: Hessian not positive definite");
    const Eigen::VectorXd step = llt.solve(-g);
    const double slope = g.dot(step);

    // Backtracking: keep ordering, require sufficient decrease of the exactly
    // differenced energy.
    double alpha = 1.0;
    bool accepted = false;
    for (int ls = 0; ls < 60; ++ls, alpha *= 0.5) {
      std::vector<double> trial(x);
      for (std::size_t i = 0; i < trial.size(); ++i) trial[i] += alpha * step(static_cast<Eigen::Index>(i));
      if (!strictly_increasing(trial) || trial == x) continue;
      const double change = energy_change(x, trial, 1.0, 1.0);
      if (change < 0.0 && change <= 1e-4 * alpha * slope) {
        eg = energy_gradient(trial, 1.0, 1.0);
        energy += change;
        x = std::move(trial);
        accepted = true;
        break;
      }
    }
    sol.iterations = it + 1;
    if (!accepted) break;  // no representable descent step left
    sol.energy_history.push_back(energy);
  }
  if (!sol.converged) {
    sol.max_force = max_abs(eg.gradient);
    sol.force_scale = force_scale();
    sol.converged = sol.max_force < opt.relative_force_tol * sol.force_scale;
  }
  sol.xi = std::move(x);
  return sol;
}

}  // namespace lattice_detail

inline ChainConfiguration equilibrium_positions(int N, const MoleculeSpecies& species, double trap_omega_t,
                                                const EquilibriumOptions& opt = {},
                                                const PhysicalConstants& k = codata) {
  if (N < 1) throw ValidationError("equilibrium_positions: N must be >= 1");
  if (!(trap_omega_t > 0.0)) throw ValidationError("equilibrium_positions: trap frequency must be > 0");
  validate(species);

  const auto sol = lattice_detail::solve_natural(N, opt);
  if (!sol.converged) throw NumericalError("equilibrium_positions: no convergence within iteration cap");

  const double L = chain_length_unit(species, trap_omega_t, k);
  const double a = dipole_strength(species.dipole, species.dipole, k);
  const double energy_unit = a / (L * L * L);
  const double force_unit = a / std::pow(L, 4);

  ChainConfiguration cfg;
  cfg.species = species;
  cfg.trap_omega_t = trap_omega_t;
  cfg.positions.reserve(sol.xi.size());
  for (double v : sol.xi) cfg.positions.push_back(v * L);
  if (!lattice_detail::strictly_increasing(cfg.positions))
    throw NumericalError("equilibrium_positions: ordering violated");
  for (double e : sol.energy_history) cfg.energy_history.push_back(e * energy_unit);
  cfg.iterations = sol.iterations;
  cfg.converged = true;
  cfg.force_tolerance = opt.relative_force_tol * sol.force_scale * force_unit;
  const auto eg = chain_energy(cfg.positions, species, trap_omega_t, k);
  for (double g : eg.gradient) cfg.gradient_norm = std::max(cfg.gradient_norm, std::abs(g));
  return cfg;
}

/// Trap frequency at which the N-molecule chain has the requested central
/// spacing. Exact: the equilibrium shape is trap-independent in natural units.
inline double trap_for_central_spacing(int N, const MoleculeSpecies& species, double spacing,
                                       const PhysicalConstants& k = codata) {
  if (N < 2) throw ValidationError("trap_for_central_spacing: N must be >= 2");
  if (!(spacing > 0.0)) throw ValidationError("trap_for_central_spacing: spacing must be > 0");
  ChainConfiguration natural;
  natural.positions = lattice_detail::solve_natural(N, {}).xi;
  const double L = spacing / natural.central_spacing();
  const double a = dipole_strength(species.dipole, species.dipole, k);
  return std::sqrt(a / (species.mass * std::pow(L, 5)));
}

// --- normal modes ---------------------------------------------------------------

struct NormalModeSpectrum {
  std::vector<double> frequencies;        // rad/s, ascending
  SquareMatrix<double> mode_vectors;      // column n is mode n, unit norm
  std::vector<double> effective_wavenumbers;  // rad/m, from the central third
  double reference_spacing = 0.0;          // m, spacing used for k assignment
};

/// Phase advance per site (k l, in [0, pi]) from sign changes of the mode shape
/// over the central third of the chain. Crossing positions are interpolated.
/// Near the zone edge the staggered shape (-1)^i v_i is the smooth one, so the
/// count is taken on whichever of v and its staggered form changes sign less,
/// and k l = pi - q l for the staggered case.
inline double central_phase_per_site(const SquareMatrix<double>& vectors, std::size_t mode) {
  const std::size_t n = vectors.size();
  if (n < 3) {
    if (n == 2) return vectors(0, mode) * vectors(1, mode) < 0.0 ? std::numbers::pi : 0.0;
    return 0.0;
  }
  const std::size_t lo = n / 3;
  const std::size_t hi = std::max(lo + 2, n - n / 3);  // exclusive
  auto phase = [&](bool staggered) {
    std::vector<double> crossings;
    for (std::size_t i = lo; i + 1 < hi; ++i) {
      double a = vectors(i, mode), b = vectors(i + 1, mode);
      if (staggered) (i % 2 ? a : b) *= -1.0;
      if ((a < 0.0) != (b < 0.0) && a != b) crossings.push_back(static_cast<double>(i) + a / (a - b));
    }
    double kl;
    if (crossings.size() >= 2)
      kl = std::numbers::pi * static_cast<double>(crossings.size() - 1) / (crossings.back() - crossings.front());
    else
      kl = std::numbers::pi * static_cast<double>(crossings.size()) / static_cast<double>(hi - lo);
    return std::pair{crossings.size(), std::min(std::numbers::pi, kl)};
  };
  const auto [direct_count, direct] = phase(false);
  const auto [stag_count, stag] = phase(true);
  return direct_count <= stag_count ? direct : std::numbers::pi - stag;
}

inline NormalModeSpectrum hessian_modes(const ChainConfiguration& cfg, const PhysicalConstants& k = codata) {
  if (!cfg.converged) throw ValidationError("hessian_modes: configuration is not at equilibrium");
  const std::size_t n = cfg.positions.size();
  auto h = chain_hessian(cfg.positions, cfg.species, cfg.trap_omega_t, k);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) h(i, j) /= cfg.species.mass;
  const auto eig = jacobi_eigen(std::move(h));

  const double top = std::max(std::abs(eig.values.front()), std::abs(eig.values.back()));
  NormalModeSpectrum out;
  out.mode_vectors = eig.vectors;
  out.reference_spacing = cfg.central_spacing();
  for (double lam : eig.values) {
    if (lam < -1e-10 * top) throw NumericalError("hessian_modes: negative curvature, not a minimum");
    out.frequencies.push_back(std::sqrt(std::max(lam, 0.0)));
  }
  for (std::size_t m = 0; m < n; ++m) {
    const double kl = central_phase_per_site(out.mode_vectors, m);
    out.effective_wavenumbers.push_back(out.reference_spacing > 0.0 ? kl / out.reference_spacing : 0.0);
  }
  return out;
}

struct ModeComparison {
  std::size_t index = 0;
  double omega_numeric = 0.0;   // rad/s
  double k_effective = 0.0;     // rad/m
  double omega_analytic = 0.0;  // rad/s
  double relative_error = 0.0;
  bool upper_half = false;      // k l >= pi/2
  bool excluded = false;        // k = 0 or too little weight in the central third
};

struct DispersionReport {
  double spacing = 0.0;  // m
  double omega0 = 0.0;   // rad/s
  std::vector<ModeComparison> modes;

  /// Largest relative error over included upper-half-band modes.
  double max_upper_error() const {
    double m = 0.0;
    for (const auto& c : modes)
      if (c.upper_half && !c.excluded) m = std::max(m, c.relative_error);
    return m;
  }
  std::size_t upper_count() const {
    return static_cast<std::size_t>(
        std::count_if(modes.begin(), modes.end(), [](const auto& c) { return c.upper_half && !c.excluded; }));
  }
};

/// Compares each numerical mode with 2 w0 |sin(k l / 2)| at its assigned k,
/// using the crystal's spacing (normally the chain's central spacing).
inline DispersionReport dispersion_compare(const NormalModeSpectrum& spectrum, const CrystalSetup& crystal,
                                           const PhysicalConstants& k = codata) {
  DispersionReport rep;
  rep.spacing = crystal.spacing_l;
  rep.omega0 = phonon_frequency_scale(crystal, k);
  const std::size_t n = spectrum.frequencies.size();
  const std::size_t lo = n / 3;
  const std::size_t hi = std::max(lo + 2, n - n / 3);
  for (std::size_t m = 0; m < n; ++m) {
    ModeComparison c;
    c.index = m;
    c.omega_numeric = spectrum.frequencies[m];
    const double kl = std::min(std::numbers::pi, spectrum.effective_wavenumbers[m] * spectrum.reference_spacing);
    c.k_effective = kl / crystal.spacing_l;
    c.omega_analytic = phonon_dispersion(crystal, c.k_effective, k);
    c.upper_half = kl >= std::numbers::pi / 2.0;
    double central_weight = 0.0;
    for (std::size_t i = lo; i < std::min(hi, n); ++i)
      central_weight += spectrum.mode_vectors(i, m) * spectrum.mode_vectors(i, m);
    c.excluded = kl == 0.0 || central_weight < 0.15;
    c.relative_error = c.omega_analytic > 0.0 ? std::abs(c.omega_numeric - c.omega_analytic) / c.omega_analytic
                                              : std::numeric_limits<double>::infinity();
    rep.modes.push_back(c);
  }
  return rep;
}

}  // namespace cantisq
