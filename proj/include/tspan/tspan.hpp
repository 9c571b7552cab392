#pragma once

// Umbrella header: finite metric spaces, injective hulls as polyhedral
// complexes, metric trees, exact Gromov-Hausdorff search, relation extension
// with certified bounds, text formats, fixtures, and random generators.

#include "tspan/metric_space.hpp"
#include "tspan/tight_span.hpp"
#include "tspan/tree.hpp"
#include "tspan/gh.hpp"
#include "tspan/extension.hpp"
#include "tspan/io.hpp"
#include "tspan/fixtures.hpp"
#include "tspan/random_gen.hpp"
