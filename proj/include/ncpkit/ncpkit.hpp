#pragma once

#include "aclcut.hpp"
#include "association.hpp"
#include "compare.hpp"
#include "egonet.hpp"
#include "generators.hpp"
#include "graph.hpp"
#include "ingest.hpp"
#include "io.hpp"
#include "lfr.hpp"
#include "linalg.hpp"
#include "movcut.hpp"
#include "parallel.hpp"
#include "quality.hpp"
#include "random.hpp"
#include "rank.hpp"
#include "sweep.hpp"
