#pragma once

#include <iosfwd>

#include "qdiss/cli/scenario.hpp"
#include "qdiss/validation.hpp"

namespace qdiss::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitInput = 1,       // I/O, usage or config parse failure
  kExitValidation = 2,  // parameters rejected by validation
  kExitNumerical = 3,   // numerical procedure failed
};

/// Hamiltonian and dissipation checks, fundamental constraints, stability
/// and algebraic residuals for one scenario. Stability is a required check
/// only when every mode is an oscillator.
ValidationReport validate_scenario(const ScenarioConfig& cfg);

/// Entry point shared by the executable and the tests.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qdiss::cli
