#pragma once

#include "sdg/convergence.hpp"
#include "sdg/dg_reference.hpp"
#include "sdg/ivp.hpp"
#include "sdg/multilevel.hpp"
#include "sdg/operators.hpp"
#include "sdg/parallel.hpp"
#include "sdg/problems.hpp"
#include "sdg/radau.hpp"
#include "sdg/schemes.hpp"
#include "sdg/stability.hpp"
#include "sdg/types.hpp"
