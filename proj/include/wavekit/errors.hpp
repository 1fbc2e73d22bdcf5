// SPDX-License-Identifier: Apache-2.0
//
// wavekit - wavenumber-domain MIMO precoding and capacity simulation
// Copyright (C) 2026 The wavekit authors
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

#ifndef WAVEKIT_ERRORS_H
#define WAVEKIT_ERRORS_H

#include <stdexcept>
#include <string>

namespace wavekit
{
    // Base class for all errors raised by the library
    class Error : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    class ZeroDistance : public Error
    {
    public:
        using Error::Error;
    };

    class EmptySupport : public Error
    {
    public:
        using Error::Error;
    };

    class ShapeMismatch : public Error
    {
    public:
        using Error::Error;
    };

    class IndexOutOfRange : public Error
    {
    public:
        using Error::Error;
    };

    class RfChainLimit : public Error
    {
    public:
        using Error::Error;
    };

    class NonFinite : public Error
    {
    public:
        using Error::Error;
    };

    class InvalidArgument : public Error
    {
    public:
        using Error::Error;
    };

    // Raised when a solver runs past the wall-clock deadline handed to it
    class TimeBudgetExceeded : public Error
    {
    public:
        using Error::Error;
    };

    // Configuration error carrying the offending field path, e.g. "system.carrier_frequency_hz"
    class ConfigError : public Error
    {
    public:
        ConfigError(std::string field_path, const std::string &message)
            : Error(field_path.empty() ? message : field_path + ": " + message), field_(std::move(field_path)) {}

        const std::string &field() const noexcept { return field_; }

    private:
        std::string field_;
    };
}

#endif
