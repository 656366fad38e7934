#pragma once

// Umbrella header for the fixed-time consensus toolkit.

#include "ftc/disturbance.hpp"
#include "ftc/errors.hpp"
#include "ftc/graph.hpp"
#include "ftc/integrator.hpp"
#include "ftc/metrics.hpp"
#include "ftc/numeric.hpp"
#include "ftc/protocol.hpp"
#include "ftc/scalar.hpp"
#include "ftc/scenario.hpp"
#include "ftc/simulation.hpp"
#include "ftc/trajectory.hpp"
