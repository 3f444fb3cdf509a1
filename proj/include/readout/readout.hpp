#pragma once

// Umbrella header for the quantum-memory readout library.

#include "gaussian.hpp"
#include "optimize.hpp"
#include "oracle.hpp"
#include "protocols.hpp"
#include "sweep.hpp"
#include "temporal.hpp"
