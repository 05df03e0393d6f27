#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "cantisq/quantities.hpp"

using namespace cantisq;

namespace {

CantileverParams example_cantilever(double omega_c = 4.0e6) { return {omega_c, 1.0e-16, 1.0, 2.1e-23, Quanta{100.0}}; }

SingleMoleculeSetup example_single(double trap = 0.0) { return {species::SrO(), trap, 2.0e-6}; }

CrystalSetup example_crystal() { return {species::SrO(), 200e-9, 4, 2.0e-6, 0.0}; }

}  // namespace

TEST(ThermalOccupation, ZeroTemperature) {
  CantileverParams c = example_cantilever();
  c.occupation = Kelvin{0.0};
  EXPECT_EQ(thermal_occupation(c), 0.0);
}

TEST(ThermalOccupation, DirectValue) { EXPECT_EQ(thermal_occupation(example_cantilever()), 100.0); }

TEST(ThermalOccupation, TemperatureDefinition) {
  CantileverParams c = example_cantilever();
  c.occupation = Kelvin{100.0 * codata.hbar * c.omega_c / codata.kB};
  EXPECT_NEAR(thermal_occupation(c), 100.0, 1e-12);
}

TEST(ThermalOccupation, LinearInTemperatureInverseInFrequency) {
  CantileverParams c = example_cantilever();
  c.occupation = Kelvin{0.3};
  const double n1 = thermal_occupation(c);
  c.occupation = Kelvin{0.9};
  EXPECT_NEAR(thermal_occupation(c) / n1, 3.0, 1e-14);
  c.omega_c *= 2.0;
  EXPECT_NEAR(thermal_occupation(c) / n1, 1.5, 1e-14);
}

TEST(ShiftedTrap, NoCantileverDipole) {
  auto c = example_cantilever();
  c.d_c = 0.0;
  EXPECT_EQ(shifted_trap_frequency(example_single(1.234e6), c), 1.234e6);
}

TEST(ShiftedTrap, PowerLawInR) {
  auto s = example_single();
  const double w1 = shifted_trap_frequency(s, example_cantilever());
  s.distance_R *= 10.0;
  EXPECT_NEAR(shifted_trap_frequency(s, example_cantilever()) / w1, std::pow(10.0, -2.5), 1e-14);
}

TEST(ShiftedTrap, WorkedExampleValue) {
  // Direct formula evaluation with an independent constant set.
  const double dm = 8.9 * 3.33564095198152e-30, m = 103.62 * 1.66053906660e-27;
  const double expect = std::sqrt(3.0 * dm * 2.1e-23 / (std::numbers::pi * 8.8541878128e-12 * m * std::pow(2e-6, 5)));
  const double w = shifted_trap_frequency(example_single(), example_cantilever());
  EXPECT_NEAR(w, expect, 1e-12 * expect);
  // Same order of magnitude as the stated 2e6 rad/s.
  EXPECT_GT(w, 2.0e6 / 10.0);
  EXPECT_LT(w, 2.0e6 * 10.0);
}

TEST(ShiftedTrap, Monotonicity) {
  auto c = example_cantilever();
  auto s = example_single(1e6);
  double prev = shifted_trap_frequency(s, c);
  for (int i = 1; i <= 20; ++i) {
    s.distance_R = 2e-6 * (1.0 + 0.1 * i);
    const double w = shifted_trap_frequency(s, c);
    EXPECT_LT(w, prev);
    prev = w;
  }
  s = example_single(1e6);
  const double base = shifted_trap_frequency(s, c);
  c.d_c *= 1.5;
  EXPECT_GT(shifted_trap_frequency(s, c), base);
  c = example_cantilever();
  s.species.dipole *= 1.5;
  EXPECT_GT(shifted_trap_frequency(s, c), base);
}

TEST(SingleModeCoupling, ZeroOccupation) {
  auto c = example_cantilever();
  c.occupation = Quanta{0.0};
  EXPECT_EQ(single_mode_coupling(example_single(), c, 2e6), 0.0);
}

TEST(SingleModeCoupling, SqrtScaling) {
  auto c = example_cantilever();
  const double c1 = single_mode_coupling(example_single(), c, 2e6);
  c.occupation = Quanta{400.0};
  EXPECT_NEAR(single_mode_coupling(example_single(), c, 2e6) / c1, 2.0, 1e-14);
}

TEST(SingleModeCoupling, FreeMoleculeIsAnError) {
  auto c = example_cantilever();
  c.d_c = 0.0;
  EXPECT_THROW(single_mode_coupling(example_single(0.0), c), NumericalError);
}

TEST(SingleModeCoupling, WorkedExampleWithinFactorFive) {
  const double C = single_mode_coupling(example_single(), example_cantilever(), 2e6);
  EXPECT_GT(C, 20.4 / 5.0);
  EXPECT_LT(C, 20.4 * 5.0);
}

TEST(SingleModeCoupling, InverseSixthPowerAtFixedFrequency) {
  auto s = example_single();
  const double c1 = single_mode_coupling(s, example_cantilever(), 2e6);
  s.distance_R *= 2.0;
  EXPECT_NEAR(single_mode_coupling(s, example_cantilever(), 2e6) / c1, 1.0 / 64.0, 1e-15);
}

TEST(SingleModeCoupling, UnitSystemInvariance) {
  // Same physics in micrometres, microseconds, 1e-20 kg and 1e-25 C.
  const double Lu = 1e-6, Tu = 1e-6, Mu = 1e-20, Qu = 1e-25;
  PhysicalConstants k;
  k.hbar = codata.hbar / (Mu * Lu * Lu / Tu);
  k.epsilon0 = codata.epsilon0 / (Qu * Qu * Tu * Tu / (Mu * Lu * Lu * Lu));
  k.kB = codata.kB / (Mu * Lu * Lu / (Tu * Tu));  // per kelvin

  const auto sp = species::SrO();
  CantileverParams c = example_cantilever();
  c.occupation = Kelvin{0.05};
  SingleMoleculeSetup s{sp, 1.0e6, 2.0e-6};

  CantileverParams c2{c.omega_c * Tu, c.m_c / Mu, c.damping_D * Tu, c.d_c / (Qu * Lu), Kelvin{0.05}};
  SingleMoleculeSetup s2{{sp.name, sp.mass / Mu, sp.dipole / (Qu * Lu)}, s.trap_omega_t * Tu, s.distance_R / Lu};

  const double C_si = single_mode_coupling(s, c);
  const double C_new = single_mode_coupling(s2, c2, k);
  EXPECT_NEAR(C_new / Tu, C_si, 1e-12 * C_si);
  EXPECT_NEAR(shifted_trap_frequency(s2, c2, k) / Tu, shifted_trap_frequency(s, c), 1e-12 * shifted_trap_frequency(s, c));
}

TEST(PhononDispersion, EdgeAndCentre) {
  const auto cr = example_crystal();
  EXPECT_EQ(phonon_dispersion(cr, 0.0), 0.0);
  EXPECT_NEAR(phonon_dispersion(cr, zone_edge(cr)), 2.0 * phonon_frequency_scale(cr), 1e-9);
  EXPECT_THROW(phonon_dispersion(cr, 1.01 * zone_edge(cr)), ValidationError);
}

TEST(PhononDispersion, SymmetricAndNondecreasing) {
  const auto cr = example_crystal();
  double prev = -1.0;
  for (int i = 0; i <= 100; ++i) {
    const double k = zone_edge(cr) * i / 100.0;
    const double w = phonon_dispersion(cr, k);
    EXPECT_EQ(w, phonon_dispersion(cr, -k));
    EXPECT_GE(w, prev);
    prev = w;
  }
}

TEST(PhononDispersion, FrequencyScaleFormula) {
  const auto cr = example_crystal();
  const auto& sp = cr.species;
  const double expect = sp.dipole * std::sqrt(3.0 / (2.0 * std::numbers::pi * codata.epsilon0 * sp.mass * std::pow(200e-9, 5)));
  EXPECT_NEAR(phonon_frequency_scale(cr), expect, 1e-12 * expect);
  EXPECT_GT(expect, 4e6 / 5.0);
  EXPECT_LT(expect, 4e6 * 5.0);
}

TEST(ShiftedPhonon, NoDipoleNoShift) {
  auto c = example_cantilever(2e6);
  c.d_c = 0.0;
  const auto cr = example_crystal();
  const auto s = shifted_phonon_frequency(cr, c, zone_edge(cr));
  EXPECT_EQ(s.omega_k_shifted, s.omega_k);
}

TEST(ShiftedPhonon, InverseFifthPower) {
  auto cr = example_crystal();
  const auto c = example_cantilever(2e6);
  const auto a = shifted_phonon_frequency(cr, c, zone_edge(cr));
  cr.distance_R *= 2.0;
  const auto b = shifted_phonon_frequency(cr, c, zone_edge(cr));
  EXPECT_NEAR((b.omega_k_shifted - b.omega_k) / (a.omega_k_shifted - a.omega_k), 1.0 / 32.0, 1e-6);
}

TEST(ShiftedPhonon, SlightShiftAtZoneEdge) {
  const auto cr = example_crystal();
  const auto s = shifted_phonon_frequency(cr, example_cantilever(2e6), zone_edge(cr));
  EXPECT_LT(s.relative_shift, 1e-5);
  EXPECT_EQ(s.status, Validity::valid);
  EXPECT_THROW(shifted_phonon_frequency(cr, example_cantilever(2e6), 0.0), NumericalError);
}

TEST(ShiftedPhonon, LargeShiftIsMarginal) {
  auto cr = example_crystal();
  cr.distance_R = 50e-9;
  auto c = example_cantilever(2e6);
  c.d_c = 1e-20;
  EXPECT_EQ(shifted_phonon_frequency(cr, c, 0.05 * zone_edge(cr)).status, Validity::marginal);
}

TEST(TwoModeCoupling, SignAndScaling) {
  const auto cr = example_crystal();
  auto c = example_cantilever(2e6);
  const auto k = two_mode_coupling(cr, c, zone_edge(cr));
  EXPECT_LT(k.per_quantum, 0.0);
  EXPECT_NEAR(k.pumped, 10.0 * k.per_quantum, 1e-12 * std::abs(k.pumped));
  EXPECT_GT(k.magnitude(), 6.2 / 5.0);
  EXPECT_LT(k.magnitude(), 6.2 * 5.0);
  c.occupation = Quanta{0.0};
  EXPECT_EQ(two_mode_coupling(cr, c, zone_edge(cr)).pumped, 0.0);
  EXPECT_THROW(two_mode_coupling_for_frequency(cr, c, 0.0), NumericalError);
}

TEST(TwoModeCoupling, InverseSixthPowerAtFixedFrequency) {
  auto cr = example_crystal();
  const auto c = example_cantilever(2e6);
  const double a = two_mode_coupling_for_frequency(cr, c, 1.9e6).pumped;
  cr.distance_R *= 2.0;
  EXPECT_NEAR(two_mode_coupling_for_frequency(cr, c, 1.9e6).pumped / a, 1.0 / 64.0, 1e-15);
}

TEST(Resonance, DoublesTarget) {
  EXPECT_EQ(resonance_frequency(2e6), 4e6);
  EXPECT_THROW(resonance_frequency(0.0), ValidationError);
  EXPECT_EQ(resonance_detuning(example_cantilever(4e6), 2e6), 0.0);
  EXPECT_EQ(resonance_detuning(example_cantilever(4.1e6), 2e6), 1e5);
}

TEST(ValidityWindow, WorkedExample) {
  const auto w = validity_window(20.4, 1.0);
  EXPECT_DOUBLE_EQ(w.t_min, 1.0 / 40.8);
  EXPECT_EQ(w.t_max, 1.0);
  EXPECT_FALSE(w.empty);
  EXPECT_TRUE(w.contains(0.5));
  EXPECT_FALSE(w.contains(0.01));
}

TEST(ValidityWindow, NoDampingAndBoundary) {
  const auto w = validity_window(20.4, 0.0);
  EXPECT_TRUE(std::isinf(w.t_max));
  EXPECT_TRUE(validity_window(20.4, 40.8).empty);
  EXPECT_THROW(validity_window(0.0, 1.0), ValidationError);
}

TEST(Hierarchy, SingleMolecule) {
  EXPECT_EQ(hierarchy(example_single(2e6), example_cantilever()), Validity::valid);
}

TEST(Hierarchy, CrystalLengthRatio) {
  auto cr = example_crystal();
  EXPECT_EQ(hierarchy(cr), Validity::marginal);  // N l / R = 0.4
  cr.distance_R = 10e-6;
  EXPECT_EQ(hierarchy(cr), Validity::valid);
  cr.count_N = 30;
  cr.distance_R = 2e-6;
  EXPECT_EQ(hierarchy(cr), Validity::violated);
}

TEST(Validation, RejectsBadParameters) {
  auto c = example_cantilever();
  c.m_c = 0.0;
  EXPECT_THROW(validate(c), ValidationError);
  c = example_cantilever();
  c.damping_D = -1.0;
  EXPECT_THROW(validate(c), ValidationError);
  auto s = example_single();
  s.distance_R = 0.0;
  EXPECT_THROW(validate(s), ValidationError);
  auto cr = example_crystal();
  cr.count_N = 1;
  EXPECT_THROW(validate(cr), ValidationError);
}
