// Copyright 2026 The gridpdlp Authors.
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

#ifndef GRIDPDLP_SPECTRAL_NORM_H_
#define GRIDPDLP_SPECTRAL_NORM_H_

#include "gridpdlp/comm.h"
#include "gridpdlp/partition.h"

namespace gridpdlp {

// Power-iteration estimate of ||A||_2 using the same distributed products as
// the main loop. Collective. Per iteration: A v over C, A^T w over R, and two
// scalar reductions; one extra scalar reduction normalizes the start vector.
// Returns 0 for a zero matrix.
double EstimateSpectralNorm(const LocalBlock& block, Communicator& comm,
                            int iterations);

}  // namespace gridpdlp

#endif  // GRIDPDLP_SPECTRAL_NORM_H_
