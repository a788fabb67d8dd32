#pragma once

#include "propfrac/errors.hpp"
#include "propfrac/expr.hpp"
#include "propfrac/fracderiv.hpp"
#include "propfrac/fracint.hpp"
#include "propfrac/gamma.hpp"
#include "propfrac/jet.hpp"
#include "propfrac/kernels.hpp"
#include "propfrac/opspec.hpp"
#include "propfrac/oracles.hpp"
#include "propfrac/propderiv.hpp"
#include "propfrac/quadrature.hpp"
#include "propfrac/verify.hpp"
