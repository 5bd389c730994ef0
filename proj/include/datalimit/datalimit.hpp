#pragma once

#include "datalimit/closed_form.hpp"
#include "datalimit/emit.hpp"
#include "datalimit/errors.hpp"
#include "datalimit/link_model.hpp"
#include "datalimit/numerics.hpp"
#include "datalimit/planner.hpp"
#include "datalimit/quadrature.hpp"
#include "datalimit/units.hpp"
