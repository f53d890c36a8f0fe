// SPDX-License-Identifier: Apache-2.0
//
// lis-assign: user assignment for distributed large intelligent surfaces
// Copyright (C) 2026 The lis-assign authors
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
#include <stdexcept>
#include <string>

namespace lis
{

// Invalid input: geometry outside its domain, bad configuration values,
// K > M and similar. The CLI maps these to exit code 2.
class domain_error : public std::domain_error
{
public:
    using std::domain_error::domain_error;
};

// Exhaustive enumeration refused because |assignment space| exceeds the cap.
class enumeration_cap_error : public std::length_error
{
public:
    enumeration_cap_error(std::uint64_t cardinality, std::uint64_t cap)
        : std::length_error("enumeration refused: assignment space has " + std::to_string(cardinality) +
                            " elements, cap is " + std::to_string(cap)),
          cardinality_(cardinality), cap_(cap)
    {
    }

    std::uint64_t cardinality() const noexcept { return cardinality_; }
    std::uint64_t cap() const noexcept { return cap_; }

private:
    std::uint64_t cardinality_;
    std::uint64_t cap_;
};

// A caller broke an operation's precondition that cannot be checked cheaply
// up front (e.g. passing a non-maximum matching to the cover routine).
class contract_error : public std::logic_error
{
public:
    using std::logic_error::logic_error;
};

} // namespace lis
