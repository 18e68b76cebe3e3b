#pragma once

// Umbrella header.

#include "fpsearch/errors.hpp"
#include "fpsearch/experiments.hpp"
#include "fpsearch/laws.hpp"
#include "fpsearch/layout.hpp"
#include "fpsearch/measured.hpp"
#include "fpsearch/op_tree.hpp"
#include "fpsearch/quadrature.hpp"
#include "fpsearch/rng.hpp"
#include "fpsearch/state.hpp"
#include "fpsearch/target_set.hpp"
#include "fpsearch/tolerances.hpp"
#include "fpsearch/unitary.hpp"
