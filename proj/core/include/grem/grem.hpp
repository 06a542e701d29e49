// Copyright 2026 The grem-hrhd Authors.
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

#include "grem/counter_rng.hpp"
#include "grem/dynamics.hpp"
#include "grem/energy.hpp"
#include "grem/extremes.hpp"
#include "grem/generator.hpp"
#include "grem/hitting.hpp"
#include "grem/io.hpp"
#include "grem/kprocess.hpp"
#include "grem/params.hpp"
#include "grem/pointproc.hpp"
#include "grem/stats.hpp"

namespace grem {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace grem
