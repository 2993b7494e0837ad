#pragma once

#include "gpcq/energy.hpp"
#include "gpcq/equations.hpp"
#include "gpcq/errors.hpp"
#include "gpcq/fft.hpp"
#include "gpcq/grid.hpp"
#include "gpcq/initial_data.hpp"
#include "gpcq/integrator.hpp"
#include "gpcq/io.hpp"
#include "gpcq/parallel.hpp"
#include "gpcq/perturbation.hpp"
#include "gpcq/rng.hpp"
#include "gpcq/spectral.hpp"
#include "gpcq/strichartz.hpp"
