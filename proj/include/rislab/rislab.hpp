#pragma once

#include "rislab/model.hpp"
#include "rislab/random.hpp"
#include "rislab/channel.hpp"
#include "rislab/metrics.hpp"
#include "rislab/objective.hpp"
#include "rislab/search.hpp"
#include "rislab/baselines.hpp"
#include "rislab/bounds.hpp"
#include "rislab/harness.hpp"
