#pragma once
// Umbrella header for the whole library.

#include "laser/clickstream.hpp"
#include "laser/common.hpp"
#include "laser/date.hpp"
#include "laser/eval.hpp"
#include "laser/features.hpp"
#include "laser/geo.hpp"
#include "laser/kg.hpp"
#include "laser/lambdamart.hpp"
#include "laser/metrics.hpp"
#include "laser/pipeline.hpp"
#include "laser/skipgram.hpp"
#include "laser/tsv.hpp"
#include "laser/walks.hpp"
