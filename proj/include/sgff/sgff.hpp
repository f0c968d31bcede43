#pragma once

// Umbrella header.

#include "sgff/axioms.hpp"
#include "sgff/config.hpp"
#include "sgff/correlators.hpp"
#include "sgff/errors.hpp"
#include "sgff/form_factors.hpp"
#include "sgff/minkowski.hpp"
#include "sgff/operators.hpp"
#include "sgff/quadrature.hpp"
#include "sgff/rapidity.hpp"
#include "sgff/scattering.hpp"
#include "sgff/special_functions.hpp"
