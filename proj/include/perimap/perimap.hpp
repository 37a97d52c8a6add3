#pragma once

#include "perimap/error.hpp"
#include "perimap/numtheory.hpp"
#include "perimap/polynomial.hpp"
#include "perimap/ffield.hpp"
#include "perimap/dynamics.hpp"
#include "perimap/predictors.hpp"
#include "perimap/stats.hpp"
#include "perimap/report.hpp"
