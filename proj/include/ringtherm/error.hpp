// Copyright 2026 The ringtherm Authors
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

namespace ringtherm {

enum class ErrorKind {
    TooFewAtoms,
    CouplingOutOfRange,
    NonpositiveFrequency,
    InvalidLevel,
    NoLowerLevel,
    NonpositiveTemperature,
    PhiOutOfRange,
    NonzeroCoupling,
    InvalidArgument,
    IntegrationFailure,
    DidNotEquilibrate,
    SingularTerm,
    NotDensityMatrix,
    NonpositiveQfi,
    DegenerateFit,
    ConfigError,
};

inline constexpr std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
    case ErrorKind::TooFewAtoms: return "TooFewAtoms";
    case ErrorKind::CouplingOutOfRange: return "CouplingOutOfRange";
    case ErrorKind::NonpositiveFrequency: return "NonpositiveFrequency";
    case ErrorKind::InvalidLevel: return "InvalidLevel";
    case ErrorKind::NoLowerLevel: return "NoLowerLevel";
    case ErrorKind::NonpositiveTemperature: return "NonpositiveTemperature";
    case ErrorKind::PhiOutOfRange: return "PhiOutOfRange";
    case ErrorKind::NonzeroCoupling: return "NonzeroCoupling";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::IntegrationFailure: return "IntegrationFailure";
    case ErrorKind::DidNotEquilibrate: return "DidNotEquilibrate";
    case ErrorKind::SingularTerm: return "SingularTerm";
    case ErrorKind::NotDensityMatrix: return "NotDensityMatrix";
    case ErrorKind::NonpositiveQfi: return "NonpositiveQfi";
    case ErrorKind::DegenerateFit: return "DegenerateFit";
    case ErrorKind::ConfigError: return "ConfigError";
    }
    return "Unknown";
}

/// Every failure raised by the library carries one of the ErrorKind tags so
/// callers (and the scan tables) can record it without parsing messages.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

/// Raised when the integrator cannot make progress; `time_reached` is the last
/// accepted time.
class IntegrationError : public Error {
public:
    IntegrationError(const std::string& what, double time_reached)
        : Error(ErrorKind::IntegrationFailure, what + " (reached t=" + std::to_string(time_reached) + ")"),
          time_reached_(time_reached) {}

    [[nodiscard]] double time_reached() const noexcept { return time_reached_; }

private:
    double time_reached_;
};

} // namespace ringtherm
