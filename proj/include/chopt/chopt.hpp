#pragma once

#include "chopt/analytic.hpp"
#include "chopt/chmetrics.hpp"
#include "chopt/error.hpp"
#include "chopt/optimizer.hpp"
#include "chopt/polynomial.hpp"
#include "chopt/states.hpp"
