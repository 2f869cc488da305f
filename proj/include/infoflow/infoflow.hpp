#pragma once

// Umbrella header for the numerical core. The command-line layer lives in
// infoflow/cli_runner.hpp and pulls in CLI11 and nlohmann/json.

#include "infoflow/errors.hpp"
#include "infoflow/prob_core.hpp"
#include "infoflow/random.hpp"
#include "infoflow/mesh.hpp"
#include "infoflow/dynamics.hpp"
#include "infoflow/discretization.hpp"
#include "infoflow/ambiguity.hpp"
#include "infoflow/flow.hpp"
#include "infoflow/report.hpp"
#include "infoflow/noise_lab.hpp"
