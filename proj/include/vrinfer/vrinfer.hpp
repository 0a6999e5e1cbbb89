#pragma once

// Convenience umbrella: the whole library in one include.

#include "vrinfer/anthro.hpp"
#include "vrinfer/attacks.hpp"
#include "vrinfer/behavior.hpp"
#include "vrinfer/defense.hpp"
#include "vrinfer/device.hpp"
#include "vrinfer/env.hpp"
#include "vrinfer/evaluate.hpp"
#include "vrinfer/features.hpp"
#include "vrinfer/harness.hpp"
#include "vrinfer/io.hpp"
#include "vrinfer/layout.hpp"
#include "vrinfer/models.hpp"
#include "vrinfer/population.hpp"
#include "vrinfer/puzzles.hpp"
#include "vrinfer/rng.hpp"
#include "vrinfer/scenario.hpp"
#include "vrinfer/simulate.hpp"
#include "vrinfer/stats.hpp"
#include "vrinfer/types.hpp"
