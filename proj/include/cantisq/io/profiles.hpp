#pragma once

// Shipped run profiles, stored as config text.

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cantisq/io/config.hpp"
#include "cantisq/status.hpp"

namespace cantisq::io {

struct Profile {
  std::string_view name;
  std::string_view summary;
  std::string_view text;
};

inline const std::vector<Profile>& profiles() {
  static const std::vector<Profile> list = {
      {"fig2", "single molecule, C = 20.4, D = 1 and D = 0 curves vs u",
       "name = fig2\n"
       "scenario = single-mode\n"
       "cantilever.omega_c = 4.0e6\n"
       "cantilever.m_c = 1.0e-16\n"
       "cantilever.damping_D = 1.0\n"
       "cantilever.d_c = 2.1e-23\n"
       "cantilever.N_bar = 100\n"
       "setup.distance_R = 2.0e-6\n"
       "setup.omega_t_shifted = 2.0e6\n"
       "coupling.C = 20.4\n"
       "grid.axis = u\n"
       "grid.min = 0\n"
       "grid.max = 3\n"
       "grid.points = 301\n"},
      {"fig3", "SrO crystal, C_k = 6.2, D = 1 and D = 0 variance sums vs u",
       "name = fig3\n"
       "scenario = two-mode\n"
       "cantilever.omega_c = 2.0e6\n"
       "cantilever.m_c = 1.0e-16\n"
       "cantilever.damping_D = 1.0\n"
       "cantilever.d_c = 2.1e-23\n"
       "cantilever.N_bar = 100\n"
       "setup.distance_R = 2.0e-6\n"
       "setup.spacing_l = 200e-9\n"
       "setup.count_N = 4\n"
       "coupling.C = 6.2\n"
       "grid.axis = u\n"
       "grid.min = 0\n"
       "grid.max = 6\n"
       "grid.points = 601\n"},
      {"lattice-n30", "30-molecule SrO chain at 200 nm central spacing, normal modes",
       "name = lattice-n30\n"
       "scenario = lattice\n"
       "setup.spacing_l = 200e-9\n"
       "setup.count_N = 30\n"
       "lattice.target_spacing = 200e-9\n"},
      {"oracle-single", "truncated Fock evolution, single mode, D = 0",
       "name = oracle-single\n"
       "scenario = oracle\n"
       "oracle.mode = single\n"
       "coupling.C = 20.4\n"
       "grid.min = 0\n"
       "grid.max = 1\n"
       "grid.points = 11\n"},
      {"oracle-two", "truncated Fock evolution, two modes, D = 0",
       "name = oracle-two\n"
       "scenario = oracle\n"
       "oracle.mode = two\n"
       "coupling.C = 6.2\n"
       "grid.min = 0\n"
       "grid.max = 1\n"
       "grid.points = 6\n"},
      {"oracle-pump", "quantized cantilever pump, N = 16",
       "name = oracle-pump\n"
       "scenario = oracle\n"
       "oracle.mode = pump\n"
       "oracle.pump_nbar = 16\n"
       "coupling.C = 20.4\n"
       "grid.min = 0\n"
       "grid.max = 0.5\n"
       "grid.points = 11\n"},
      {"sweep-R", "single molecule, distance R over 1..4 um, bare trap 0",
       "name = sweep-R\n"
       "scenario = sweep\n"
       "sweep.target = single-mode\n"
       "sweep.axis = setup.distance_R\n"
       "sweep.min = 1e-6\n"
       "sweep.max = 4e-6\n"
       "sweep.points = 31\n"},
      {"sweep-D", "crystal, damping D over 0..3 C_k at C_k = 6.2",
       "name = sweep-D\n"
       "scenario = sweep\n"
       "sweep.target = two-mode\n"
       "sweep.axis = cantilever.damping_D\n"
       "sweep.min = 0\n"
       "sweep.max = 18.6\n"
       "sweep.points = 94\n"
       "cantilever.omega_c = 2.0e6\n"
       "coupling.C = 6.2\n"},
      {"sweep-Nbar", "single molecule, occupation 1..400",
       "name = sweep-Nbar\n"
       "scenario = sweep\n"
       "sweep.target = single-mode\n"
       "sweep.axis = cantilever.N_bar\n"
       "sweep.min = 1\n"
       "sweep.max = 400\n"
       "sweep.points = 41\n"
       "setup.omega_t_shifted = 2.0e6\n"},
  };
  return list;
}

inline const Profile* find_profile(std::string_view name) {
  for (const auto& p : profiles())
    if (p.name == name) return &p;
  return nullptr;
}

inline RunConfig load_profile(std::string_view name) {
  const auto* p = find_profile(name);
  if (!p) throw ValidationError("unknown profile '" + std::string(name) + "'");
  return parse_config(p->text);
}

}  // namespace cantisq::io
