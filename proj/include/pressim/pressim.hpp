#pragma once

#include "pressim/calibration.hpp"
#include "pressim/control.hpp"
#include "pressim/errors.hpp"
#include "pressim/estimator.hpp"
#include "pressim/geometry.hpp"
#include "pressim/harness.hpp"
#include "pressim/metrics.hpp"
#include "pressim/pressure.hpp"
#include "pressim/pressure_io.hpp"
#include "pressim/scenario_io.hpp"
#include "pressim/sim.hpp"
