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

// Property suites for the transformed per-cell objective.

#include "doctest.h"

#include "iaese/esem.hpp"
#include "iaese/network.hpp"
#include "properties.hpp"

using namespace iaese;

TEST_CASE("transformed objective is concave along feasible segments")
{
    const auto r = props::concavity_suite(100, 2024);
    CHECK(r.worst_gap >= -1e-9);
}

TEST_CASE("perspective rates are positively homogeneous")
{
    const auto r = props::homogeneity_suite(200, 77);
    CHECK(r.worst_relative_error <= 1e-12);
}
