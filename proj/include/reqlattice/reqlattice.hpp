#pragma once

#include "reqlattice/error.hpp"
#include "reqlattice/model.hpp"
#include "reqlattice/algebra.hpp"
#include "reqlattice/refinement.hpp"
#include "reqlattice/analysis.hpp"
#include "reqlattice/io.hpp"
