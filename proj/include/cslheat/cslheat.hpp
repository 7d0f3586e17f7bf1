#pragma once

// Umbrella header for the numerical library. The command-line layer
// (cslheat/cli.hpp) additionally needs OpenSSL and is not included here.

#include "cslheat/analysis.hpp"
#include "cslheat/core.hpp"
#include "cslheat/geometry.hpp"
#include "cslheat/heating.hpp"
#include "cslheat/lattice.hpp"
#include "cslheat/lattice_check.hpp"
#include "cslheat/parallel.hpp"
#include "cslheat/quadrature.hpp"
#include "cslheat/spec_io.hpp"
#include "cslheat/special_functions.hpp"
#include "cslheat/summation.hpp"
