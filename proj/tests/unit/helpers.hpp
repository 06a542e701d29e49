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

#include <cstdint>

#include "grem/grem.hpp"

namespace grem::test {

inline ModelParams params(int N, double beta = 1.3, std::uint64_t seed = 1, double p = 0.5,
                          double a = 0.2) {
  ModelParams m;
  m.N = N;
  m.p = p;
  m.a = a;
  m.beta = beta;
  m.seed = seed;
  return m;
}

inline CounterStream stream(std::uint64_t index) {
  return CounterStream(derive_seed(0xC0FFEEull, index, StreamTag::test));
}

}  // namespace grem::test
