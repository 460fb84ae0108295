/*
 * Copyright 2026 The mb authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <stdexcept>
#include <string>

namespace mb {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Image file could not be read or parsed.
class PgmError : public Error {
public:
    enum class Kind { UnreadableFile, MalformedHeader, UnsupportedFormat, TruncatedData };

    PgmError(Kind kind, const std::string& msg) : Error(msg), kind_(kind) {}
    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

/// All gradient magnitudes equal: the contrast tail cannot be normalized.
class DegenerateHistogramError : public Error {
public:
    explicit DegenerateHistogramError(const std::string& msg) : Error(msg) {}
};

/// Too few noise samples to estimate a regularity tail.
class InsufficientSamplesError : public Error {
public:
    explicit InsufficientSamplesError(const std::string& msg) : Error(msg) {}
};

/// Internal geometric inconsistency (e.g. level lines that cross).
class StructuralError : public Error {
public:
    explicit StructuralError(const std::string& msg) : Error(msg) {}
};

}  // namespace mb
