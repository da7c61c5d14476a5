#pragma once

// Umbrella header for the co-prime sampling receiver library.

#include "scs/fft.hpp"
#include "scs/grid.hpp"
#include "scs/random.hpp"
#include "scs/recovery.hpp"
#include "scs/sampling.hpp"
#include "scs/signal.hpp"
#include "scs/spectral.hpp"
#include "scs/types.hpp"
