// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "mimonoma/beamforming.hpp"
#include "mimonoma/channel.hpp"
#include "mimonoma/clustering.hpp"
#include "mimonoma/harness.hpp"
#include "mimonoma/io.hpp"
#include "mimonoma/metrics.hpp"
#include "mimonoma/power.hpp"
#include "mimonoma/scenario.hpp"
#include "mimonoma/types.hpp"
#include "mimonoma/units.hpp"
