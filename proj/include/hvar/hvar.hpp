#pragma once

#include "hvar/baselines.hpp"
#include "hvar/evaluation.hpp"
#include "hvar/io.hpp"
#include "hvar/parallel.hpp"
#include "hvar/penalty.hpp"
#include "hvar/prox.hpp"
#include "hvar/simulation.hpp"
#include "hvar/solver.hpp"
#include "hvar/timeseries.hpp"
#include "hvar/types.hpp"
