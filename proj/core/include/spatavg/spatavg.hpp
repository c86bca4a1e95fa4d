#pragma once

#include "spatavg/data_model.hpp"
#include "spatavg/delta_stats.hpp"
#include "spatavg/error.hpp"
#include "spatavg/linalg.hpp"
#include "spatavg/mc_sim.hpp"
#include "spatavg/moments.hpp"
#include "spatavg/oa_solver.hpp"
#include "spatavg/panel_io.hpp"
#include "spatavg/rng.hpp"
#include "spatavg/synthetic.hpp"
#include "spatavg/version.hpp"
