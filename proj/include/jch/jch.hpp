// Umbrella header

#pragma once

#include "jch/model.hpp"
#include "jch/jacobi.hpp"
#include "jch/poly_roots.hpp"
#include "jch/spectral.hpp"
#include "jch/dynamics.hpp"
#include "jch/entanglement.hpp"
#include "jch/experiments.hpp"
