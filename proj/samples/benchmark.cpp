// Single-photon benchmark of the symmetric MOS cavity, and where the
// dissipative coupling peaks.
#include <cstdio>

#include "optomech/optomech.hpp"

using namespace optomech;

int main() {
  mos::MosConfig cfg;  // t = 0.014, t_m = 0.1, l = 100 um, lambda = 850 nm
  const auto sp = mos::two_port_setpoint(cfg);
  std::printf("membrane offset  %.4f nm\n", sp.delta_x * 1e9);
  std::printf("T_sym            %.4f\n", sp.T_sym);
  std::printf("finesse          %.1f\n", sp.finesse);

  noise::CavityDrive drive;
  drive.k = cfg.k();
  drive.l = cfg.l;
  std::printf("cooperativity    %.3f\n", noise::cooperativity(drive, noise::MosCooperativity{cfg.t, cfg.t_m}));

  const auto op = mos::operating_point_at_phi(cfg, cfg.phi0());
  std::printf("at Phi0: g_gamma0 = %.4e rad/s/m, gamma = %.4e rad/s, g_omega0 = %.1e\n", op.g_gamma0, op.gamma,
              op.g_omega0);

  const auto z = mos::zero_dispersive_locus(cfg.t, cfg.t_m);
  std::printf("exact zero-dispersive offset (psi*-pi)/2 = %.6f, Phi0 = %.6f\n", z.half_offset_hi(), cfg.phi0());
}
