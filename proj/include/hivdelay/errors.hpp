// Copyright 2026 The hivdelay Authors
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

#include <stdexcept>
#include <string>
#include <string_view>

namespace hiv {

enum class ErrorKind {
    NonCommensurateDelay,
    NonFiniteState,
    GridTooShort,
    DegenerateDenominator,
    InfeasibleEquilibrium,
    MissingControls,
    ParseError,
    ValidationError,
    IoError,
};

std::string_view to_string(ErrorKind kind);

/// Single exception type for the library; the kind drives CLI exit codes.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what);

    ErrorKind kind() const noexcept { return kind_; }

    /// Name of the offending configuration key, if any.
    const std::string& key() const noexcept { return key_; }

    static Error validation(std::string key, const std::string& what);

private:
    ErrorKind kind_;
    std::string key_;
};

} // namespace hiv
