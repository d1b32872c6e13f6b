#pragma once

// Online clustering with delays: metric spaces, arrival processes, the
// DGreedy online algorithm, the exact offline oracle and analytic bounds.

#include "ocd/error.hpp"
#include "ocd/rng.hpp"
#include "ocd/metric.hpp"
#include "ocd/arrivals.hpp"
#include "ocd/radius.hpp"
#include "ocd/clustering.hpp"
#include "ocd/dgreedy.hpp"
#include "ocd/audit.hpp"
#include "ocd/oracle.hpp"
#include "ocd/bounds.hpp"
#include "ocd/stats.hpp"
#include "ocd/io.hpp"
#include "ocd/experiment.hpp"
