#pragma once

#include "netcg/dataset.hpp"
#include "netcg/estimate.hpp"
#include "netcg/evaluate.hpp"
#include "netcg/graph.hpp"
#include "netcg/json_io.hpp"
#include "netcg/logistic.hpp"
#include "netcg/manifest.hpp"
#include "netcg/model.hpp"
#include "netcg/parallel.hpp"
#include "netcg/rng.hpp"
#include "netcg/sampler.hpp"
#include "netcg/search.hpp"
#include "netcg/simulate.hpp"
