#pragma once

#include <numbers>

namespace cantisq {

/// CODATA 2018 exact/recommended values, SI units.
struct PhysicalConstants {
  double hbar = 1.054571817e-34;        // J s
  double epsilon0 = 8.8541878128e-12;   // F/m
  double kB = 1.380649e-23;             // J/K
};

inline constexpr PhysicalConstants codata{};

namespace units {

inline constexpr double debye = 3.33564095198152e-30;      // C m
inline constexpr double atomic_mass = 1.66053906660e-27;   // kg
inline constexpr double micrometre = 1e-6;
inline constexpr double nanometre = 1e-9;

// Every "MHz" in the worked examples is read as 10^6 rad/s.
inline constexpr double mega_rad_per_s = 1e6;

inline constexpr double to_mega_rad(double omega) { return omega / mega_rad_per_s; }
inline constexpr double from_mega_rad(double mrad) { return mrad * mega_rad_per_s; }
inline constexpr double angular_to_cyclic(double omega) {
  return omega / (2.0 * std::numbers::pi);
}
inline constexpr double cyclic_to_angular(double f) { return 2.0 * std::numbers::pi * f; }

inline constexpr const char* convention =
    "frequencies are angular (rad/s); MHz labels denote 1e6 rad/s; rates in 1/s";

}  // namespace units
}  // namespace cantisq
