#pragma once

// Umbrella header.

#include "ampint/core/dump.hpp"
#include "ampint/core/error.hpp"
#include "ampint/core/fft.hpp"
#include "ampint/core/grid.hpp"
#include "ampint/core/parallel.hpp"
#include "ampint/core/rng.hpp"
#include "ampint/core/units.hpp"
#include "ampint/fields/autocorrelation.hpp"
#include "ampint/fields/envelope_io.hpp"
#include "ampint/fields/phase_diffusion.hpp"
#include "ampint/fields/pulse_train.hpp"
#include "ampint/fields/thermal.hpp"
#include "ampint/fields/types.hpp"
#include "ampint/homodyne/detection.hpp"
#include "ampint/homodyne/kernel.hpp"
#include "ampint/homodyne/local_oscillator.hpp"
#include "ampint/homodyne/noise.hpp"
#include "ampint/homodyne/quantum_cw.hpp"
#include "ampint/homodyne/single_photon.hpp"
#include "ampint/homodyne/trace.hpp"
#include "ampint/optics/optics.hpp"
#include "ampint/oracles/qcw.hpp"
#include "ampint/oracles/spectral.hpp"
#include "ampint/oracles/visibility.hpp"
#include "ampint/signal/power.hpp"
#include "ampint/signal/processing.hpp"
#include "ampint/signal/serialize.hpp"
#include "ampint/signal/visibility.hpp"
