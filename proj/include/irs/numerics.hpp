// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "irs/numerics/bessel.hpp"
#include "irs/numerics/gamma.hpp"
#include "irs/numerics/hypergeometric.hpp"
#include "irs/numerics/normal.hpp"
#include "irs/numerics/quadrature.hpp"
