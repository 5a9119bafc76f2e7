#pragma once

// Umbrella header: the joint law of (position, running maximum) of the
// reflected next-neighbor walk, in four mutually checking routes — exact
// dynamic programming over dyadic rationals, closed-form and trigonometric
// evaluators, limit-regime series and quadrature, and seeded Monte Carlo.

#include "walkmax/asymptotics.hpp"
#include "walkmax/closed_form.hpp"
#include "walkmax/core_model.hpp"
#include "walkmax/distributions.hpp"
#include "walkmax/dyadic.hpp"
#include "walkmax/monte_carlo.hpp"
#include "walkmax/serialize.hpp"
#include "walkmax/verify.hpp"
