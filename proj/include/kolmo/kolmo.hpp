#pragma once

#include "kolmo/types.hpp"
#include "kolmo/system.hpp"
#include "kolmo/roots.hpp"
#include "kolmo/quadrature.hpp"
#include "kolmo/specfun.hpp"
#include "kolmo/linearize.hpp"
#include "kolmo/equilibrium.hpp"
#include "kolmo/lyapunov.hpp"
#include "kolmo/catalog.hpp"
#include "kolmo/bound.hpp"
#include "kolmo/flow.hpp"
#include "kolmo/contour.hpp"
#include "kolmo/analysis.hpp"
#include "kolmo/portrait.hpp"
#include "kolmo/report_json.hpp"
