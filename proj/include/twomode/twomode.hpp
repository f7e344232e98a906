#pragma once

// Two coupled harmonic oscillators with opposite-sign sectors: analytic
// normal modes, exact Gaussian covariance evolution, and truncated
// Fock-space diagonalization, with cross-engine validation.

#include "twomode/config.hpp"
#include "twomode/envelopes.hpp"
#include "twomode/errors.hpp"
#include "twomode/fock.hpp"
#include "twomode/gaussian.hpp"
#include "twomode/model.hpp"
#include "twomode/normal_modes.hpp"
#include "twomode/run.hpp"
#include "twomode/series.hpp"
#include "twomode/version.hpp"
