#pragma once

#include "heatseries/bounds.hpp"
#include "heatseries/decomposition.hpp"
#include "heatseries/eigen.hpp"
#include "heatseries/experiments.hpp"
#include "heatseries/io.hpp"
#include "heatseries/kernel_approx.hpp"
#include "heatseries/moments.hpp"
#include "heatseries/multi_index.hpp"
#include "heatseries/quadrature.hpp"
#include "heatseries/reference.hpp"
#include "heatseries/signed_log.hpp"
#include "heatseries/specfun.hpp"
