#pragma once

#include "madc/bitstring.hpp"
#include "madc/design.hpp"
#include "madc/engine.hpp"
#include "madc/error.hpp"
#include "madc/keyed_hash.hpp"
#include "madc/metrics.hpp"
#include "madc/mra.hpp"
#include "madc/rational.hpp"
#include "madc/simulation.hpp"
#include "madc/subsets.hpp"
#include "madc/topology.hpp"
