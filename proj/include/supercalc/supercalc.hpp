#pragma once

#include "supercalc/djops.hpp"
#include "supercalc/error.hpp"
#include "supercalc/expression.hpp"
#include "supercalc/grassmann.hpp"
#include "supercalc/oracle.hpp"
#include "supercalc/polynomial.hpp"
#include "supercalc/pullback.hpp"
#include "supercalc/rational.hpp"
#include "supercalc/scalar.hpp"
