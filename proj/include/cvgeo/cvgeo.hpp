#pragma once

#include "cvgeo/closed_form.hpp"
#include "cvgeo/connection.hpp"
#include "cvgeo/containment.hpp"
#include "cvgeo/format.hpp"
#include "cvgeo/geodesic_flow.hpp"
#include "cvgeo/ode.hpp"
#include "cvgeo/random.hpp"
#include "cvgeo/space.hpp"
#include "cvgeo/surfaces.hpp"
#include "cvgeo/symmetry.hpp"
#include "cvgeo/types.hpp"
