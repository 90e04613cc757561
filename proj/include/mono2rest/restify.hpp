// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "mono2rest/restify/api_tree.hpp"
#include "mono2rest/restify/classify.hpp"
#include "mono2rest/restify/exposure.hpp"
#include "mono2rest/restify/openapi.hpp"
#include "mono2rest/restify/pos.hpp"
