#pragma once

#include "insider/analysis.hpp"
#include "insider/experiments.hpp"
#include "insider/model.hpp"
#include "insider/numeric.hpp"
#include "insider/parallel.hpp"
#include "insider/report.hpp"
#include "insider/rng.hpp"
#include "insider/stochastic.hpp"
#include "insider/strategies.hpp"
