#pragma once

#include "mfx/analytic_spectra.hpp"
#include "mfx/error.hpp"
#include "mfx/legendre.hpp"
#include "mfx/measures.hpp"
#include "mfx/partition.hpp"
#include "mfx/sampling.hpp"
#include "mfx/spectra_report.hpp"
#include "mfx/symbolic_space.hpp"
