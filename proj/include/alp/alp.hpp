#pragma once

// Umbrella header: adaptive lattice-based motion planning for linearly
// parameterizable systems with uncertain parameters.

#include "alp/box.hpp"
#include "alp/bvp.hpp"
#include "alp/dynamics.hpp"
#include "alp/errors.hpp"
#include "alp/harness.hpp"
#include "alp/identifier.hpp"
#include "alp/io.hpp"
#include "alp/lattice.hpp"
#include "alp/params.hpp"
#include "alp/planner.hpp"
#include "alp/presets.hpp"
#include "alp/primitives.hpp"
#include "alp/quadrotor.hpp"
#include "alp/scenario.hpp"
#include "alp/svg.hpp"
#include "alp/tube_control.hpp"
#include "alp/workspace.hpp"
