#pragma once

#include "freeprob/errors.hpp"
#include "freeprob/exactcomb.hpp"
#include "freeprob/freeconv.hpp"
#include "freeprob/io.hpp"
#include "freeprob/moments.hpp"
#include "freeprob/rational_polynomial.hpp"
#include "freeprob/rmtlab.hpp"
#include "freeprob/rng.hpp"
#include "freeprob/specfun.hpp"
#include "freeprob/verify.hpp"
