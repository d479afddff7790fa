#pragma once

#include "icv/asymptotics.hpp"
#include "icv/cross_validation.hpp"
#include "icv/error.hpp"
#include "icv/estimation.hpp"
#include "icv/gaussian_mixture.hpp"
#include "icv/ingest.hpp"
#include "icv/local_icv.hpp"
#include "icv/minimize.hpp"
#include "icv/normal_mixture.hpp"
#include "icv/pairwise.hpp"
#include "icv/selection_kernel.hpp"
#include "icv/simulation.hpp"
#include "icv/spline.hpp"
#include "icv/stats.hpp"
