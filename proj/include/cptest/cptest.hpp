#pragma once
// SPDX-License-Identifier: Apache-2.0
//
// Umbrella header for the change point test library: anti-symmetric kernel
// U-statistics, the half-jackknife multiplier bootstrap, a CUSUM baseline,
// scenario generators and the Monte Carlo harness.

#include "cptest/bootstrap.hpp"
#include "cptest/config.hpp"
#include "cptest/csv.hpp"
#include "cptest/cusum.hpp"
#include "cptest/datagen.hpp"
#include "cptest/errors.hpp"
#include "cptest/experiments.hpp"
#include "cptest/kernels.hpp"
#include "cptest/matrix.hpp"
#include "cptest/parallel.hpp"
#include "cptest/rng.hpp"
#include "cptest/serialize.hpp"
#include "cptest/teststat.hpp"
