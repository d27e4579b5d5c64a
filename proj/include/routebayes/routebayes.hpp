#pragma once

#include "routebayes/bayes_core.hpp"
#include "routebayes/error.hpp"
#include "routebayes/network_planner.hpp"
#include "routebayes/rm_sim.hpp"
#include "routebayes/rng.hpp"
#include "routebayes/route_economics.hpp"
#include "routebayes/scenario_io.hpp"
#include "routebayes/weight_optimizer.hpp"
