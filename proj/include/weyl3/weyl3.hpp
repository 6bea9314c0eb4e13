#pragma once

#include "weyl3/errors.hpp"
#include "weyl3/polynomial.hpp"
#include "weyl3/linalg.hpp"
#include "weyl3/coeffs.hpp"
#include "weyl3/regularization.hpp"
#include "weyl3/propagator.hpp"
#include "weyl3/boundary.hpp"
#include "weyl3/problem.hpp"
#include "weyl3/weyl_core.hpp"
#include "weyl3/halfline.hpp"
#include "weyl3/bvp.hpp"
#include "weyl3/spectra.hpp"
#include "weyl3/mappings.hpp"
#include "weyl3/parallel.hpp"
#include "weyl3/io.hpp"
