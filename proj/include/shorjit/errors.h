// Copyright 2026 The Shorjit Authors
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

namespace shorjit {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
   public:
    using Error::Error;
};

/// a has no inverse modulo N. The driver treats this as the gcd shortcut path.
class NoInverseError : public InvalidArgument {
   public:
    using InvalidArgument::InvalidArgument;
};

class PreconditionError : public InvalidArgument {
   public:
    using InvalidArgument::InvalidArgument;
};

/// A runtime parameter slot was left unbound when a program was unrolled.
class MissingParameter : public Error {
   public:
    using Error::Error;
};

/// The program referenced something out of range while being evaluated.
class MalformedProgram : public Error {
   public:
    using Error::Error;
};

/// Requested work exceeds a configured limit (qubit count, branch budget).
class CapacityError : public Error {
   public:
    using Error::Error;
};

class InternalConsistencyError : public Error {
   public:
    using Error::Error;
};

}  // namespace shorjit
