#pragma once

#include "rgbw/baseline.hpp"
#include "rgbw/cfa.hpp"
#include "rgbw/error.hpp"
#include "rgbw/evaluate.hpp"
#include "rgbw/image.hpp"
#include "rgbw/io/pattern_file.hpp"
#include "rgbw/io/raster.hpp"
#include "rgbw/io/tensor_file.hpp"
#include "rgbw/metrics.hpp"
#include "rgbw/parallel.hpp"
#include "rgbw/solver.hpp"
#include "rgbw/tensor.hpp"
#include "rgbw/tuning.hpp"
#include "rgbw/tv.hpp"
