#pragma once

#include "medax/affine_fit.hpp"
#include "medax/angles.hpp"
#include "medax/ball.hpp"
#include "medax/carleson.hpp"
#include "medax/coarse_diff.hpp"
#include "medax/csv.hpp"
#include "medax/detector.hpp"
#include "medax/experiment.hpp"
#include "medax/parallel.hpp"
#include "medax/point.hpp"
#include "medax/report.hpp"
#include "medax/rng.hpp"
#include "medax/sampling.hpp"
#include "medax/scenes.hpp"
#include "medax/simplex.hpp"
#include "medax/site_set.hpp"
#include "medax/svg.hpp"
#include "medax/version.hpp"
