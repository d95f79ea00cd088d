#pragma once

// Umbrella header: squeezing of a driven optomechanical mirror fed with
// broadband squeezed vacuum. Steady states, stability, interaction-picture
// variances by spectral quadrature, and parameter sweeps.

#include "optosqueeze/constants.hpp"
#include "optosqueeze/errors.hpp"
#include "optosqueeze/params.hpp"
#include "optosqueeze/cubic.hpp"
#include "optosqueeze/stability.hpp"
#include "optosqueeze/steady_state.hpp"
#include "optosqueeze/quadrature.hpp"
#include "optosqueeze/spectrum.hpp"
#include "optosqueeze/sweep.hpp"
#include "optosqueeze/presets.hpp"
#include "optosqueeze/config.hpp"
#include "optosqueeze/output.hpp"
