/*
Copyright (c) 2026 The qfdiv developers. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

  http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#pragma once

// Umbrella header: the whole library in dependency order.

#include "qfdiv/operator_core.hpp"
#include "qfdiv/generators.hpp"
#include "qfdiv/quadrature.hpp"
#include "qfdiv/divergence_value.hpp"
#include "qfdiv/integral_engine.hpp"
#include "qfdiv/closed_forms.hpp"
#include "qfdiv/property_suite.hpp"
#include "qfdiv/state_io.hpp"
