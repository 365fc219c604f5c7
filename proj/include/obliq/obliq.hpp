#pragma once

// Umbrella header for the oblique-error slope estimation library.

#include "obliq/errors.hpp"
#include "obliq/estimators.hpp"
#include "obliq/io.hpp"
#include "obliq/measurement_error.hpp"
#include "obliq/oblique.hpp"
#include "obliq/reference_values.hpp"
#include "obliq/rng.hpp"
#include "obliq/simulation.hpp"
#include "obliq/summary_stats.hpp"
#include "obliq/tables.hpp"
