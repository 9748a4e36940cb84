#pragma once

#include "slnoise/dynamics.hpp"
#include "slnoise/ensemble.hpp"
#include "slnoise/errors.hpp"
#include "slnoise/kernels.hpp"
#include "slnoise/noise.hpp"
#include "slnoise/rng.hpp"
#include "slnoise/schemes.hpp"
