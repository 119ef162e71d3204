// Copyright 2026 The pbv Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PBV_ERRORS_HPP
#define PBV_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace pbv {

/// Malformed or inconsistent input (bad key text, mismatched widths, out-of-range index).
struct InputError : std::invalid_argument {
    explicit InputError(const std::string &what) : std::invalid_argument(what) {
    }
};

/// A request that is well-formed but exceeds a supported size: qubit cap, exact-integer
/// range, or enumeration work bound.
struct CapacityError : std::runtime_error {
    explicit CapacityError(const std::string &what) : std::runtime_error(what) {
    }
};

}  // namespace pbv

#endif
