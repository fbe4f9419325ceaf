#include "qdiss/cli/builtins.hpp"

#include <string>

namespace qdiss::cli {
namespace {

// Two asymmetry modes (charge Z, neutron N) of a dinuclear system.
#define QDISS_DNS_BASE                      \
  "labels = [\"Z\", \"N\"]\n"               \
  "mass_hbar2_per_MeV = [461.6344, 461.6344]\n" \
  "omega_MeV = [2.9468, 2.9288]\n"          \
  "nu_MeV = [[0, -1869],\n"                 \
  "          [-1869, 0]]\n"                 \
  "lambda_MeV = [[2, 0],\n"                 \
  "              [0, 2]]\n"                 \
  "initial_var_q = [1e-4, 1e-3]\n"

// Two inverted-barrier modes.
#define QDISS_BARRIER_BASE                  \
  "labels = [\"q1\", \"q2\"]\n"             \
  "kind = [\"inverted_barrier\", \"inverted_barrier\"]\n" \
  "mass_hbar2_per_MeV = [2.5, 60]\n"        \
  "omega_MeV = [1.7, 0.6]\n"                \
  "nu_MeV = [[0, 7],\n"                     \
  "          [7, 0]]\n"                     \
  "lambda_MeV = [[2.5, 0],\n"               \
  "              [0, 0.6]]\n"               \
  "T_MeV = 0.1\n"                           \
  "initial_mean = [-6, 9, 0, 0]\n"          \
  "initial_var_q = [0.4, 0.07]\n"           \
  "penetration_mode = 1\n"

#define QDISS_MEANS "initial_mean = [0.0385, 0, 0.0067, 0]\n"

const std::vector<BuiltinScenario> kBuiltins = {
    {"fig1", "Z/N variances at T = 5 MeV; compare off_diagonal_D = \"zeroed\"",
     "name = \"fig1\"\n"
     "description = \"asymmetry modes at T = 5 MeV, full diffusion matrix\"\n"
     QDISS_DNS_BASE
     "T_MeV = 5\n"
     "t_end_s = 30e-22\n"},
    {"fig2", "mean decay for nu_NZ = 3000, -1869, -3000 MeV",
     "name = \"fig2\"\n"
     "description = \"mean values for three nu_NZ couplings\"\n"
     QDISS_DNS_BASE QDISS_MEANS
     "T_MeV = 2\n"
     "t_end_s = 30e-22\n"
     "sweep = \"nu_MeV[1,2]=3000,-1869,-3000\"\n"},
    {"fig3", "sigma_NZ for nu_NZ = 3000, -1869, -3000 MeV",
     "name = \"fig3\"\n"
     "description = \"cross-mode variance for three nu_NZ couplings\"\n"
     QDISS_DNS_BASE
     "T_MeV = 2\n"
     "t_end_s = 30e-22\n"
     "sweep = \"nu_MeV[1,2]=3000,-1869,-3000\"\n"},
    {"fig4", "mean decay for hbar lambda = 3, 2, 1.6 MeV",
     "name = \"fig4\"\n"
     "description = \"mean values for three diagonal friction strengths\"\n"
     QDISS_DNS_BASE QDISS_MEANS
     "T_MeV = 2\n"
     "t_end_s = 30e-22\n"
     "sweep = \"lambda_MeV[1,1]+lambda_MeV[2,2]=3,2,1.6\"\n"},
    {"fig5", "sigma_NZ for hbar lambda = 3, 2, 1.6 MeV",
     "name = \"fig5\"\n"
     "description = \"cross-mode variance for three diagonal friction strengths\"\n"
     QDISS_DNS_BASE
     "T_MeV = 2\n"
     "t_end_s = 30e-22\n"
     "sweep = \"lambda_MeV[1,1]+lambda_MeV[2,2]=3,2,1.6\"\n"},
    {"fig6", "mean decay for kappa_NZ = 33e38, 20e38, 0 MeV^-1 s^-2",
     "name = \"fig6\"\n"
     "description = \"mean values for three kinetic couplings\"\n"
     QDISS_DNS_BASE QDISS_MEANS
     "T_MeV = 2\n"
     "t_end_s = 30e-22\n"
     "sweep = \"kappa_per_MeV_s2[1,2]=33e38,20e38,0\"\n"},
    {"fig7", "sigma_NZ for kappa_NZ = 33e38, 20e38, 0 MeV^-1 s^-2",
     "name = \"fig7\"\n"
     "description = \"cross-mode variance for three kinetic couplings\"\n"
     QDISS_DNS_BASE
     "T_MeV = 2\n"
     "t_end_s = 30e-22\n"
     "sweep = \"kappa_per_MeV_s2[1,2]=33e38,20e38,0\"\n"},
    {"fig8", "variance ratio and chi_NZ at T = 0.02 MeV with alpha_ZN = 33e38 MeV^-1 s^-2",
     "name = \"fig8\"\n"
     "description = \"low-temperature run with a momentum-space phase coupling\"\n"
     QDISS_DNS_BASE
     "alpha_per_MeV_s2 = [[0, 33e38],\n"
     "                    [-33e38, 0]]\n"
     "T_MeV = 0.02\n"
     "t_end_s = 2e-22\n"},
    {"fig9", "density frames of a packet on a two-dimensional barrier",
     "name = \"fig9\"\n"
     "description = \"coordinate density on a two-dimensional parabolic barrier\"\n"
     QDISS_BARRIER_BASE
     "t_end_s = 50e-22\n"
     "density_times_s = [0, 2e-22, 10e-22, 50e-22]\n"
     "density_modes = [1, 2]\n"
     "density_q_range = [[-12, 6],\n"
     "                   [-3, 3]]\n"
     "density_points = 61\n"},
    {"fig10", "penetration probability for hbar lambda_22 = 0.3 ... 4 MeV",
     "name = \"fig10\"\n"
     "description = \"barrier penetration for five friction strengths of the second mode\"\n"
     QDISS_BARRIER_BASE
     "t_end_s = 100e-22\n"
     "sweep = \"lambda_MeV[2,2]=0.3,0.6,1.0,2.0,4.0\"\n"},
};

#undef QDISS_DNS_BASE
#undef QDISS_BARRIER_BASE
#undef QDISS_MEANS

}  // namespace

const std::vector<BuiltinScenario>& builtin_scenarios() { return kBuiltins; }

const BuiltinScenario* find_builtin(std::string_view name) {
  for (const auto& b : kBuiltins) {
    if (b.name == name) return &b;
  }
  return nullptr;
}

ConfigDocument load_builtin(std::string_view name) {
  const BuiltinScenario* b = find_builtin(name);
  if (!b) throw ConfigError("unknown scenario '" + std::string(name) + "' (see 'scenarios list')");
  return ConfigDocument::parse(b->text, "builtin:" + std::string(name));
}

}  // namespace qdiss::cli
