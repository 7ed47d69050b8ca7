#pragma once

#include "sfb/errors.hpp"
#include "sfb/interaction.hpp"
#include "sfb/moments.hpp"
#include "sfb/norms.hpp"
#include "sfb/optimize.hpp"
#include "sfb/quadrature.hpp"
#include "sfb/rng.hpp"
#include "sfb/sequences.hpp"
#include "sfb/special.hpp"
#include "sfb/types.hpp"
