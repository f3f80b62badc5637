#pragma once

#include "fatmax/affine.hpp"
#include "fatmax/bounds.hpp"
#include "fatmax/compose.hpp"
#include "fatmax/core.hpp"
#include "fatmax/covering.hpp"
#include "fatmax/dims.hpp"
#include "fatmax/disambig.hpp"
#include "fatmax/generators.hpp"
#include "fatmax/io.hpp"
#include "fatmax/lp.hpp"
#include "fatmax/report.hpp"
#include "fatmax/rng.hpp"
