#pragma once

#include "dataset.hpp"
#include "decomposition.hpp"
#include "error.hpp"
#include "evaluation.hpp"
#include "fitting.hpp"
#include "illumination.hpp"
#include "image.hpp"
#include "istd.hpp"
#include "lab.hpp"
#include "morphology.hpp"
#include "parallel.hpp"
#include "png_io.hpp"
#include "resize.hpp"
#include "serialize.hpp"
