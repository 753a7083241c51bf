#pragma once

// Umbrella header: exact plane-wave and incoming scattering solutions of the
// 1+1-d Dirac equation with a Klein step, finite-norm packets by quadrature,
// and Bohmian trajectories of the probability current.

#include "kleinflow/amplitude.hpp"
#include "kleinflow/bohmian.hpp"
#include "kleinflow/config.hpp"
#include "kleinflow/csv.hpp"
#include "kleinflow/diagnostics.hpp"
#include "kleinflow/dispersion.hpp"
#include "kleinflow/errors.hpp"
#include "kleinflow/free_modes.hpp"
#include "kleinflow/parallel.hpp"
#include "kleinflow/quadrature.hpp"
#include "kleinflow/rng.hpp"
#include "kleinflow/runner.hpp"
#include "kleinflow/spinor.hpp"
#include "kleinflow/step_modes.hpp"
#include "kleinflow/svg.hpp"
#include "kleinflow/wave_packets.hpp"
