// Prints the single-molecule and crystal figures of merit for the default setup.

#include <cstdio>

#include "cantisq/dynamics.hpp"
#include "cantisq/io/scenario.hpp"
#include "cantisq/quantities.hpp"

int main() {
  using namespace cantisq;
  const auto cfg = io::default_config();
  const auto setup = cfg.single_setup();

  const double w = shifted_trap_frequency(setup, cfg.cantilever);
  const double C = single_mode_coupling(setup, cfg.cantilever, w);
  const auto best = optimal_single_mode_squeezing(C, cfg.cantilever.damping_D);
  std::printf("shifted trap %.4e rad/s, C = %.4f /s\n", w, C);
  std::printf("best squeezing u* = %.4f, variance %.4f (vacuum 0.25)\n", best.u_star, best.min_variance);

  const double Ck = 6.2;
  for (double D : {0.0, 1.0, 4.0, 8.0}) {
    const auto win = entanglement_window(Ck, D);
    const std::string st(to_string(win.status));
    if (win.has_window())
      std::printf("C_k = %.1f D = %.1f: %s window [%.4f, %.4f] s\n", Ck, D, st.c_str(), win.t_enter, win.t_exit);
    else
      std::printf("C_k = %.1f D = %.1f: no window (%s)\n", Ck, D, st.c_str());
  }
  std::printf("\n%s", io::worked_example_report().text.c_str());
}
