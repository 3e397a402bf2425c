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

#include <cstddef>
#include <stdexcept>
#include <string>

namespace iaese {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed argument: non-finite matrix, bad dimension, nonpositive distance.
class InvalidInput : public Error {
public:
    using Error::Error;
};

/// Requested nullspace dimension exceeds what the matrix provides.
class RankDeficit : public Error {
public:
    RankDeficit(const std::string& what, std::size_t achievable)
        : Error(what), achievable_(achievable) {}

    std::size_t achievable() const noexcept { return achievable_; }

private:
    std::size_t achievable_;
};

/// The stacked SMC rows of a group are not full row rank.
class SingularGroup : public Error {
public:
    using Error::Error;
};

/// Random precoder generation kept producing rank-deficient matrices.
class GenerationFailure : public Error {
public:
    using Error::Error;
};

/// Water level denominator (xi * mu + 2 * lambda) is not positive.
class DualDomainError : public Error {
public:
    using Error::Error;
};

/// Phase-2 candidate transmitter index out of range.
class UnknownTransmitter : public Error {
public:
    using Error::Error;
};

/// Configuration file or command line could not be interpreted.
class ConfigError : public Error {
public:
    using Error::Error;
};

} // namespace iaese
