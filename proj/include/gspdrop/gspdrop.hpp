// SPDX-FileCopyrightText: 2026 The gspdrop Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef GSPDROP_GSPDROP_HPP
#define GSPDROP_GSPDROP_HPP

#include "gspdrop/attack.hpp"
#include "gspdrop/error.hpp"
#include "gspdrop/features.hpp"
#include "gspdrop/graph.hpp"
#include "gspdrop/io.hpp"
#include "gspdrop/presets.hpp"
#include "gspdrop/ranking.hpp"
#include "gspdrop/regression.hpp"
#include "gspdrop/stats.hpp"
#include "gspdrop/types.hpp"

#endif  // GSPDROP_GSPDROP_HPP
