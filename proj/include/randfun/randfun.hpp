#pragma once

#include "randfun/covariance.hpp"
#include "randfun/error.hpp"
#include "randfun/experiments_analytic.hpp"
#include "randfun/experiments_zeros.hpp"
#include "randfun/growth.hpp"
#include "randfun/polynomial.hpp"
#include "randfun/report.hpp"
#include "randfun/rng.hpp"
#include "randfun/sampling.hpp"
#include "randfun/sequence.hpp"
#include "randfun/stats.hpp"
#include "randfun/zeros.hpp"
