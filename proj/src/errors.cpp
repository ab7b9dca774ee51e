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

#include "hivdelay/errors.hpp"

namespace hiv {

std::string_view to_string(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::NonCommensurateDelay:
        return "NonCommensurateDelay";
    case ErrorKind::NonFiniteState:
        return "NonFiniteState";
    case ErrorKind::GridTooShort:
        return "GridTooShort";
    case ErrorKind::DegenerateDenominator:
        return "DegenerateDenominator";
    case ErrorKind::InfeasibleEquilibrium:
        return "InfeasibleEquilibrium";
    case ErrorKind::MissingControls:
        return "MissingControls";
    case ErrorKind::ParseError:
        return "ParseError";
    case ErrorKind::ValidationError:
        return "ValidationError";
    case ErrorKind::IoError:
        return "IoError";
    }
    return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what)
    , kind_(kind)
{
}

Error Error::validation(std::string key, const std::string& what)
{
    Error e(ErrorKind::ValidationError, "'" + key + "' " + what);
    e.key_ = std::move(key);
    return e;
}

} // namespace hiv
