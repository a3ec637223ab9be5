// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "irs/channel.hpp"
#include "irs/fbl.hpp"
#include "irs/metrics_csi.hpp"
#include "irs/metrics_nocsi.hpp"
#include "irs/montecarlo.hpp"
#include "irs/numerics.hpp"
#include "irs/sweep.hpp"
#include "irs/system.hpp"
