// Copyright 2026 The wmplab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "wmp/anchors.hpp"
#include "wmp/attractor.hpp"
#include "wmp/bisect.hpp"
#include "wmp/branch.hpp"
#include "wmp/closest_approach.hpp"
#include "wmp/errors.hpp"
#include "wmp/geometry.hpp"
#include "wmp/interval.hpp"
#include "wmp/map.hpp"
#include "wmp/markov.hpp"
#include "wmp/nice.hpp"
#include "wmp/parallel.hpp"
#include "wmp/real.hpp"
#include "wmp/return_structure.hpp"
#include "wmp/rng.hpp"
