#pragma once

#include "complexity.hpp"
#include "dataset.hpp"
#include "graph.hpp"
#include "localfit.hpp"
#include "model_io.hpp"
#include "sampling.hpp"
#include "scoring.hpp"
#include "search.hpp"
