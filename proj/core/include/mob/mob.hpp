// Copyright (C) 2026 The MoB Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "mob/bounds.hpp"
#include "mob/covering.hpp"
#include "mob/embedding.hpp"
#include "mob/error.hpp"
#include "mob/hausdorff.hpp"
#include "mob/io.hpp"
#include "mob/oracle.hpp"
#include "mob/synth.hpp"
