#pragma once

#include "semilin/cells.hpp"
#include "semilin/context.hpp"
#include "semilin/error.hpp"
#include "semilin/exactmath.hpp"
#include "semilin/frobenius.hpp"
#include "semilin/genfunc.hpp"
#include "semilin/integer.hpp"
#include "semilin/io.hpp"
#include "semilin/lattice.hpp"
#include "semilin/lp.hpp"
#include "semilin/polyhedra.hpp"
#include "semilin/presburger.hpp"
#include "semilin/semilinear.hpp"
#include "semilin/vrep.hpp"
