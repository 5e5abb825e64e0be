#pragma once

#include "errors.hpp"
#include "fock.hpp"
#include "hyperbolic.hpp"
#include "numerics.hpp"
#include "parallel.hpp"
#include "planar.hpp"
#include "report.hpp"
#include "series.hpp"
#include "sphere.hpp"
#include "weierstrass.hpp"
