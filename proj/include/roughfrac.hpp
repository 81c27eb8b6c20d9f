// Copyright 2026 The roughfrac Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#pragma once

// Umbrella header for the library (the CLI lives in roughfrac/cli.hpp).

#include "roughfrac/errors.hpp"
#include "roughfrac/experiments.hpp"
#include "roughfrac/fields.hpp"
#include "roughfrac/functions.hpp"
#include "roughfrac/grid.hpp"
#include "roughfrac/kernel.hpp"
#include "roughfrac/lorentz.hpp"
#include "roughfrac/operators.hpp"
#include "roughfrac/parse.hpp"
#include "roughfrac/point.hpp"
#include "roughfrac/quadrature.hpp"
