#pragma once

#include "aperiodic/error.hpp"
#include "aperiodic/summation.hpp"
#include "aperiodic/zroot5.hpp"
#include "aperiodic/points.hpp"
#include "aperiodic/random.hpp"
#include "aperiodic/inflate.hpp"
#include "aperiodic/cps.hpp"
#include "aperiodic/combs.hpp"
#include "aperiodic/eberlein.hpp"
#include "aperiodic/spectra.hpp"
#include "aperiodic/stochastic.hpp"
