#pragma once

// Umbrella header: kernels, signals, quadrature and means, sampling series,
// Orlicz metrics and the experiment drivers.

#include "kantorovich/errors.hpp"
#include "kantorovich/quadrature.hpp"
#include "kantorovich/kernels.hpp"
#include "kantorovich/signals.hpp"
#include "kantorovich/signal_file.hpp"
#include "kantorovich/means.hpp"
#include "kantorovich/operators.hpp"
#include "kantorovich/orlicz.hpp"
#include "kantorovich/experiment.hpp"
