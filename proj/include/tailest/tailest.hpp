#pragma once

// Umbrella header: the whole tailest library.
//
// tailest estimates the extreme value index, tail scale, and extreme
// quantiles of heavy-tailed samples from their top order statistics, carries
// the matching first-order asymptotics (AMSE decomposition, optimal level,
// relative efficiencies), and ships a deterministic seeded Monte Carlo
// harness for studying the estimators' finite-sample behaviour.

#include "asymptotics.hpp"
#include "csv.hpp"
#include "estimators.hpp"
#include "report_json.hpp"
#include "rng.hpp"
#include "sample.hpp"
#include "simulation.hpp"
#include "types.hpp"
