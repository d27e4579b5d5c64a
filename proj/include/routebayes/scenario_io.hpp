#pragma once
// Scenario ingestion, pipeline orchestration and report emission.

#include "routebayes/pipeline.hpp"
#include "routebayes/report_format.hpp"
#include "routebayes/scenario.hpp"
