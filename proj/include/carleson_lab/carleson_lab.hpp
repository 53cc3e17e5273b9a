#pragma once

#include "carleson_lab/core.hpp"
#include "carleson_lab/geometry.hpp"
#include "carleson_lab/quadrature.hpp"
#include "carleson_lab/lattice.hpp"
#include "carleson_lab/measures.hpp"
#include "carleson_lab/spaces.hpp"
#include "carleson_lab/carleson.hpp"
#include "carleson_lab/operators.hpp"
