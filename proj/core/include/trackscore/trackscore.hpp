#pragma once

#include "trackscore/baselines.hpp"
#include "trackscore/errors.hpp"
#include "trackscore/optimize.hpp"
#include "trackscore/path.hpp"
#include "trackscore/path_io.hpp"
#include "trackscore/random.hpp"
#include "trackscore/scoring.hpp"
#include "trackscore/signature.hpp"
#include "trackscore/stochastic.hpp"
#include "trackscore/tensor.hpp"
#include "trackscore/tensor_io.hpp"
