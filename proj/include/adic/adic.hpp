#pragma once

// Umbrella header for the adic toolkit: exact multiplicative-order stability
// certificates, arithmetic-progression witnesses for coprime bases, and
// piecewise-constant weight analysis (A_r / reverse Holder / A_1 / RH_inf
// characteristics, adic BMO oscillation, doubling-ratio scans).

#include "adic/errors.hpp"
#include "adic/intervals.hpp"
#include "adic/io.hpp"
#include "adic/modarith.hpp"
#include "adic/numeric.hpp"
#include "adic/progressions.hpp"
#include "adic/stability.hpp"
#include "adic/step_weight.hpp"
#include "adic/weights.hpp"
