#pragma once

// Umbrella header (the JSON layer, resolab/io.hpp, is separate because it
// needs nlohmann/json).

#include "resolab/errors.hpp"
#include "resolab/identities.hpp"
#include "resolab/jost.hpp"
#include "resolab/neumann.hpp"
#include "resolab/potential.hpp"
#include "resolab/quadrature.hpp"
#include "resolab/spectrum.hpp"
#include "resolab/uniqueness.hpp"
