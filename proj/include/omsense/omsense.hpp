#pragma once

#include "omsense/cubic.hpp"
#include "omsense/dynamics.hpp"
#include "omsense/error.hpp"
#include "omsense/grid.hpp"
#include "omsense/ode.hpp"
#include "omsense/params.hpp"
#include "omsense/sensing.hpp"
#include "omsense/spectrum.hpp"
#include "omsense/steadystate.hpp"
