#pragma once

#include "qgeom/algebra.hpp"
#include "qgeom/bounds.hpp"
#include "qgeom/error.hpp"
#include "qgeom/interferometer.hpp"
#include "qgeom/io.hpp"
#include "qgeom/noise.hpp"
#include "qgeom/planck_units.hpp"
#include "qgeom/rng.hpp"
#include "qgeom/spectral.hpp"
#include "qgeom/spin.hpp"
#include "qgeom/version.hpp"
