#pragma once

#include "mrp/approx.hpp"
#include "mrp/bounds.hpp"
#include "mrp/exact_dp.hpp"
#include "mrp/generate.hpp"
#include "mrp/io.hpp"
#include "mrp/log_reliability.hpp"
#include "mrp/model.hpp"
#include "mrp/oracle.hpp"
#include "mrp/reductions.hpp"
#include "mrp/rounding.hpp"
