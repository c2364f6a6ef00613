#pragma once

#include "metricgeo/classify.hpp"
#include "metricgeo/concave.hpp"
#include "metricgeo/errors.hpp"
#include "metricgeo/experiments.hpp"
#include "metricgeo/hyperbolicity.hpp"
#include "metricgeo/io.hpp"
#include "metricgeo/metric_space.hpp"
#include "metricgeo/transform.hpp"
