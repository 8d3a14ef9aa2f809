#pragma once

// Umbrella header: the confidence-distribution calculus for ensembles of
// calibrated binary classifiers.

#include "ensemble_bounds/bounds.hpp"
#include "ensemble_bounds/canonical.hpp"
#include "ensemble_bounds/combine.hpp"
#include "ensemble_bounds/csv.hpp"
#include "ensemble_bounds/distribution.hpp"
#include "ensemble_bounds/entropy.hpp"
#include "ensemble_bounds/errors.hpp"
#include "ensemble_bounds/json_io.hpp"
#include "ensemble_bounds/rng.hpp"
#include "ensemble_bounds/simulate.hpp"
