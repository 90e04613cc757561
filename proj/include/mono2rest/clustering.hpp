// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "mono2rest/clustering/brute_force.hpp"
#include "mono2rest/clustering/nsga3.hpp"
#include "mono2rest/clustering/objectives.hpp"
#include "mono2rest/clustering/operators.hpp"
#include "mono2rest/clustering/pareto.hpp"
#include "mono2rest/clustering/reference_points.hpp"
