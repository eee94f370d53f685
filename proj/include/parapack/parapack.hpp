#pragma once

#include "parapack/density.hpp"
#include "parapack/errors.hpp"
#include "parapack/geometry.hpp"
#include "parapack/hull.hpp"
#include "parapack/hullvol.hpp"
#include "parapack/io.hpp"
#include "parapack/packing.hpp"
#include "parapack/packing_set.hpp"
#include "parapack/polygon.hpp"
#include "parapack/predicates.hpp"
#include "parapack/search.hpp"
#include "parapack/svg.hpp"
#include "parapack/tolerance.hpp"
#include "parapack/vec.hpp"
