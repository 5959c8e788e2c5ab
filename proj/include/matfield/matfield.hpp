// Umbrella header: the full library surface.

#pragma once

#include "matfield/calculus.hpp"
#include "matfield/core.hpp"
#include "matfield/decompose.hpp"
#include "matfield/eigenfield.hpp"
#include "matfield/evolve.hpp"
#include "matfield/extremal.hpp"
#include "matfield/fft.hpp"
#include "matfield/identities.hpp"
#include "matfield/io.hpp"
#include "matfield/parallel.hpp"
#include "matfield/rng.hpp"
