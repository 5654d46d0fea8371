#pragma once

// Umbrella header.

#include "wrhss/analysis.hpp"
#include "wrhss/banded.hpp"
#include "wrhss/core.hpp"
#include "wrhss/dense.hpp"
#include "wrhss/drivers.hpp"
#include "wrhss/dst.hpp"
#include "wrhss/eig.hpp"
#include "wrhss/gmres.hpp"
#include "wrhss/kronecker.hpp"
#include "wrhss/problem.hpp"
#include "wrhss/shifted_solvers.hpp"
#include "wrhss/splittings.hpp"
#include "wrhss/threading.hpp"
#include "wrhss/tridiagonal.hpp"
#include "wrhss/waveform.hpp"
