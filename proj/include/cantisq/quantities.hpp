#pragma once

// Physical parameters of the cantilever/molecule system and the closed-form
// couplings, frequencies and validity windows derived from them. SI units
// throughout; frequencies are angular.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <variant>

#include "cantisq/constants.hpp"
#include "cantisq/status.hpp"

namespace cantisq {

struct Kelvin {
  double value = 0.0;
  bool operator==(const Kelvin&) const = default;
};

/// Mean number of thermal quanta in the cantilever mode.
struct Quanta {
  double value = 0.0;
  bool operator==(const Quanta&) const = default;
};

struct CantileverParams {
  double omega_c = 0.0;    // rad/s
  double m_c = 0.0;        // kg
  double damping_D = 0.0;  // 1/s
  double d_c = 0.0;        // C m
  std::variant<Kelvin, Quanta> occupation = Quanta{};

  bool operator==(const CantileverParams&) const = default;
};

struct MoleculeSpecies {
  std::string name;
  double mass = 0.0;    // kg
  double dipole = 0.0;  // C m

  bool operator==(const MoleculeSpecies&) const = default;
};

struct SingleMoleculeSetup {
  MoleculeSpecies species;
  double trap_omega_t = 0.0;  // rad/s, bare trap
  double distance_R = 0.0;    // m

  bool operator==(const SingleMoleculeSetup&) const = default;
};

struct CrystalSetup {
  MoleculeSpecies species;
  double spacing_l = 0.0;     // m
  int count_N = 2;
  double distance_R = 0.0;    // m
  double trap_omega_t = 0.0;  // rad/s, axial trap for the numerical chain

  bool operator==(const CrystalSetup&) const = default;
};

namespace species {

/// SrO with the literature dipole moment of 8.9 D.
inline MoleculeSpecies SrO() {
  return {"SrO", 103.62 * units::atomic_mass, 8.9 * units::debye};
}

}  // namespace species

// --- invariant checks --------------------------------------------------------

inline void validate(const CantileverParams& c) {
  if (!(c.omega_c > 0.0)) throw ValidationError("cantilever.omega_c must be > 0");
  if (!(c.m_c > 0.0)) throw ValidationError("cantilever.m_c must be > 0");
  if (!(c.damping_D >= 0.0)) throw ValidationError("cantilever.damping_D must be >= 0");
  if (!(c.d_c >= 0.0)) throw ValidationError("cantilever.d_c must be >= 0");
  if (const auto* t = std::get_if<Kelvin>(&c.occupation); t && !(t->value >= 0.0))
    throw ValidationError("cantilever.T_c must be >= 0");
  if (const auto* n = std::get_if<Quanta>(&c.occupation); n && !(n->value >= 0.0))
    throw ValidationError("cantilever.N_bar must be >= 0");
}

inline void validate(const MoleculeSpecies& s) {
  if (!(s.mass > 0.0)) throw ValidationError("species.mass must be > 0");
  if (!(s.dipole > 0.0)) throw ValidationError("species.dipole must be > 0");
}

inline void validate(const SingleMoleculeSetup& s) {
  validate(s.species);
  if (!(s.trap_omega_t >= 0.0)) throw ValidationError("setup.trap_omega_t must be >= 0");
  if (!(s.distance_R > 0.0)) throw ValidationError("setup.distance_R must be > 0");
}

inline void validate(const CrystalSetup& s) {
  validate(s.species);
  if (!(s.spacing_l > 0.0)) throw ValidationError("setup.spacing_l must be > 0");
  if (s.count_N < 2) throw ValidationError("setup.count_N must be >= 2");
  if (!(s.distance_R > 0.0)) throw ValidationError("setup.distance_R must be > 0");
  if (!(s.trap_omega_t >= 0.0)) throw ValidationError("setup.trap_omega_t must be >= 0");
}

// --- helpers -----------------------------------------------------------------

/// Dipole-dipole energy scale d^2 / (4 pi eps0) in J m^3.
inline double dipole_strength(double dipole_a, double dipole_b,
                              const PhysicalConstants& k = codata) {
  return dipole_a * dipole_b / (4.0 * std::numbers::pi * k.epsilon0);
}

/// Ground-state positional spread sqrt(hbar / (2 m omega)).
inline double zero_point_length(double mass, double omega, const PhysicalConstants& k = codata) {
  if (!(omega > 0.0)) return std::numeric_limits<double>::infinity();
  return std::sqrt(k.hbar / (2.0 * mass * omega));
}

// --- operations --------------------------------------------------------------

inline double thermal_occupation(const CantileverParams& c, const PhysicalConstants& k = codata) {
  if (const auto* t = std::get_if<Kelvin>(&c.occupation))
    return k.kB * t->value / (k.hbar * c.omega_c);
  return std::get<Quanta>(c.occupation).value;
}

/// Trap frequency tightened by the static cantilever dipole field.
inline double shifted_trap_frequency(const SingleMoleculeSetup& s, const CantileverParams& c,
                                     const PhysicalConstants& k = codata) {
  const double R = s.distance_R;
  const double stiffening =
      3.0 * s.species.dipole * c.d_c / (std::numbers::pi * k.epsilon0 * s.species.mass * std::pow(R, 5));
  return std::sqrt(s.trap_omega_t * s.trap_omega_t + stiffening);
}

/// Parametric squeezing rate C for a single molecule, evaluated with an
/// explicit shifted trap frequency (the worked example pins it directly).
inline double single_mode_coupling(const SingleMoleculeSetup& s, const CantileverParams& c,
                                   double shifted_trap, const PhysicalConstants& k = codata) {
  if (!(shifted_trap > 0.0))
    throw NumericalError("single_mode_coupling: shifted trap frequency is zero (free molecule)");
  const double nbar = thermal_occupation(c, k);
  const double R = s.distance_R;
  const double geometric = 15.0 * s.species.dipole * c.d_c /
                           (4.0 * std::numbers::pi * k.epsilon0 * s.species.mass * shifted_trap * std::pow(R, 6));
  return std::sqrt(nbar) * geometric * zero_point_length(c.m_c, c.omega_c, k);
}

inline double single_mode_coupling(const SingleMoleculeSetup& s, const CantileverParams& c,
                                   const PhysicalConstants& k = codata) {
  return single_mode_coupling(s, c, shifted_trap_frequency(s, c, k), k);
}

/// R against the larger of the two zero-point lengths: > 100 valid, > 10 marginal.
inline Validity hierarchy(const SingleMoleculeSetup& s, const CantileverParams& c,
                          const PhysicalConstants& k = codata) {
  const double x_m = zero_point_length(s.species.mass, shifted_trap_frequency(s, c, k), k);
  const double x_c = zero_point_length(c.m_c, c.omega_c, k);
  const double ratio = s.distance_R / std::max(x_m, x_c);
  if (ratio > 100.0) return Validity::valid;
  if (ratio > 10.0) return Validity::marginal;
  return Validity::violated;
}

/// omega_0 = d_m sqrt(3 / (2 pi eps0 m l^5)).
inline double phonon_frequency_scale(const CrystalSetup& cr, const PhysicalConstants& k = codata) {
  const auto& sp = cr.species;
  return sp.dipole *
         std::sqrt(3.0 / (2.0 * std::numbers::pi * k.epsilon0 * sp.mass * std::pow(cr.spacing_l, 5)));
}

inline double zone_edge(const CrystalSetup& cr) { return std::numbers::pi / cr.spacing_l; }

inline double phonon_dispersion(const CrystalSetup& cr, double k_wave,
                                const PhysicalConstants& k = codata) {
  // Small slack so k = pi/l computed in floating point is accepted.
  if (std::abs(k_wave) > zone_edge(cr) * (1.0 + 1e-12))
    throw ValidationError("phonon_dispersion: |k| outside the first Brillouin zone");
  return 2.0 * phonon_frequency_scale(cr, k) * std::abs(std::sin(k_wave * cr.spacing_l / 2.0));
}

/// N l / R < 0.1 and zero-point spread at omega_0 below l / 10 for valid.
inline Validity hierarchy(const CrystalSetup& cr, const PhysicalConstants& k = codata) {
  const double extent = cr.count_N * cr.spacing_l / cr.distance_R;
  const double spread = zero_point_length(cr.species.mass, phonon_frequency_scale(cr, k), k) / cr.spacing_l;
  const double worst = std::max(extent, spread);
  if (worst < 0.1) return Validity::valid;
  if (worst < 1.0) return Validity::marginal;
  return Validity::violated;
}

struct ShiftedPhonon {
  double omega_k = 0.0;
  double omega_k_shifted = 0.0;
  double relative_shift = 0.0;
  Validity status = Validity::valid;  // marginal once the shift exceeds 10 %
};

inline ShiftedPhonon shifted_phonon_frequency(const CrystalSetup& cr, const CantileverParams& c,
                                              double k_wave, const PhysicalConstants& k = codata) {
  ShiftedPhonon out;
  out.omega_k = phonon_dispersion(cr, k_wave, k);
  if (!(out.omega_k > 0.0))
    throw NumericalError("shifted_phonon_frequency: omega_k = 0, perturbative shift is singular");
  const auto& sp = cr.species;
  const double shift = sp.dipole * c.d_c /
                       (4.0 * std::numbers::pi * k.epsilon0 * sp.mass * out.omega_k * out.omega_k *
                        std::pow(cr.distance_R, 5));
  out.omega_k_shifted = out.omega_k + shift;
  out.relative_shift = shift / out.omega_k;
  out.status = out.relative_shift > 0.1 ? Validity::marginal : Validity::valid;
  return out;
}

struct TwoModeCoupling {
  double per_quantum = 0.0;  // C_k', signed (negative for positive inputs)
  double pumped = 0.0;       // C_k = sqrt(N) C_k'
  double omega_k_shifted = 0.0;

  double magnitude() const { return std::abs(pumped); }
};

inline TwoModeCoupling two_mode_coupling_for_frequency(const CrystalSetup& cr,
                                                       const CantileverParams& c, double shifted_phonon,
                                                       const PhysicalConstants& k = codata) {
  if (!(shifted_phonon > 0.0))
    throw NumericalError("two_mode_coupling: shifted phonon frequency is zero");
  const auto& sp = cr.species;
  TwoModeCoupling out;
  out.omega_k_shifted = shifted_phonon;
  out.per_quantum = -3.0 * sp.dipole * c.d_c /
                    (2.0 * std::numbers::pi * k.epsilon0 * sp.mass * shifted_phonon *
                     std::pow(cr.distance_R, 6)) *
                    zero_point_length(c.m_c, c.omega_c, k);
  out.pumped = std::sqrt(thermal_occupation(c, k)) * out.per_quantum;
  return out;
}

/// C_k' and C_k for the mode at wavenumber k, using the shifted phonon frequency.
inline TwoModeCoupling two_mode_coupling(const CrystalSetup& cr, const CantileverParams& c,
                                         double k_wave, const PhysicalConstants& k = codata) {
  return two_mode_coupling_for_frequency(cr, c, shifted_phonon_frequency(cr, c, k_wave, k).omega_k_shifted,
                                         k);
}

/// Cantilever frequency that drives the target mode at parametric resonance.
inline double resonance_frequency(double target) {
  if (!(target > 0.0)) throw ValidationError("resonance_frequency: target must be > 0");
  return 2.0 * target;
}

inline double resonance_detuning(const CantileverParams& c, double target) {
  return c.omega_c - resonance_frequency(target);
}

/// Times with D < 1/t < 2C.
struct TimeWindow {
  double t_min = 0.0;
  double t_max = std::numeric_limits<double>::infinity();
  bool empty = false;

  bool contains(double t) const { return !empty && t > t_min && t < t_max; }
};

inline TimeWindow validity_window(double C, double D) {
  if (!(C > 0.0)) throw ValidationError("validity_window: C must be > 0");
  TimeWindow w;
  w.t_min = 1.0 / (2.0 * C);
  w.t_max = D > 0.0 ? 1.0 / D : std::numeric_limits<double>::infinity();
  w.empty = D >= 2.0 * C;
  return w;
}

}  // namespace cantisq
