#pragma once

// Umbrella header.

#include "tmr/accuracy.hpp"
#include "tmr/config_io.hpp"
#include "tmr/error.hpp"
#include "tmr/filter.hpp"
#include "tmr/kernel.hpp"
#include "tmr/kernel_io.hpp"
#include "tmr/mode.hpp"
#include "tmr/mode_io.hpp"
#include "tmr/reconstruct.hpp"
#include "tmr/report.hpp"
#include "tmr/result_io.hpp"
#include "tmr/rng.hpp"
#include "tmr/samplers.hpp"
#include "tmr/shapes.hpp"
#include "tmr/simulate.hpp"
#include "tmr/spectrum.hpp"
#include "tmr/sweep.hpp"
#include "tmr/waveform_io.hpp"
