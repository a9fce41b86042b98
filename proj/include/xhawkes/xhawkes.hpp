#pragma once

#include "xhawkes/calibration.hpp"
#include "xhawkes/core.hpp"
#include "xhawkes/expectation.hpp"
#include "xhawkes/ingest.hpp"
#include "xhawkes/intensity.hpp"
#include "xhawkes/nelder_mead.hpp"
#include "xhawkes/planner.hpp"
#include "xhawkes/rng.hpp"
#include "xhawkes/simulation.hpp"
#include "xhawkes/validation.hpp"
