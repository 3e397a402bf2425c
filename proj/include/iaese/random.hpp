// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

#include "iaese/linalg.hpp"

namespace iaese {

using Rng = std::mt19937_64;

/// Mixes a master seed with a path of counters (trial index, stream tag, ...)
/// into an independent substream seed. Order of the path matters.
std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path);

/// One CN(0,1) draw: real and imaginary parts are N(0, 1/2).
Complex complex_normal(Rng& rng);

/// Matrix with i.i.d. CN(0,1) entries.
CMatrix complex_normal_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols);

/// Stream tags used with derive_seed so that each consumer of randomness in
/// a trial draws from its own substream.
enum class Stream : std::uint64_t {
    layout = 1,
    channels = 2,
    precoders = 3,
    epa = 4,
};

} // namespace iaese
