#pragma once

// Everything at once; the individual headers are self-contained.
#include "rtgap/errors.hpp"
#include "rtgap/group.hpp"
#include "rtgap/quadrature.hpp"
#include "rtgap/regions.hpp"
#include "rtgap/root_system.hpp"
#include "rtgap/slice.hpp"
#include "rtgap/spherical.hpp"
#include "rtgap/weyl.hpp"
#include "rtgap/weyl_law.hpp"
