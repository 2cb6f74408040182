// wdc: wireless channel dataset synthesis with meta-trained conditional GANs
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

#include <stdexcept>
#include <string>

namespace wdc {

/// Base class for all wdc errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A caller violated an operation's precondition.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// A non-finite value showed up where finite math was required.
class NumericError : public Error {
public:
    using Error::Error;
};

/// File could not be opened, read, or written.
class IoError : public Error {
public:
    using Error::Error;
};

/// File exists but is not in the expected format (bad magic / version).
class FormatError : public Error {
public:
    using Error::Error;
};

/// File is in the right format but its body is damaged or truncated.
class CorruptionError : public Error {
public:
    using Error::Error;
};

/// Text input (CSV, config) failed to parse.
class ParseError : public Error {
public:
    using Error::Error;
};

/// A checkpoint was produced for a different network spec.
class CompatibilityError : public Error {
public:
    using Error::Error;
};

/// A config document failed validation; message carries the field path.
class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace wdc
