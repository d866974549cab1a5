#pragma once

#include "l1metrics/special_functions.hpp"
#include "l1metrics/rng.hpp"
#include "l1metrics/quadrature.hpp"
#include "l1metrics/distributions.hpp"
#include "l1metrics/joints.hpp"
#include "l1metrics/abs_diff.hpp"
#include "l1metrics/gini.hpp"
#include "l1metrics/simple_metrics.hpp"
#include "l1metrics/transport.hpp"
#include "l1metrics/oracle.hpp"
#include "l1metrics/fixtures.hpp"
#include "l1metrics/io.hpp"
