// Copyright 2026 The qbnet Authors
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

#ifndef QBNET_ERRORS_H
#define QBNET_ERRORS_H

#include <stdexcept>
#include <string>

namespace qbnet {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// Malformed input: bad file contents, unknown names, invariant violations
/// detected while loading. The CLI maps these to exit code 2.
class ParseError : public Error {
   public:
    using Error::Error;
};

/// Failures of a numerical or capacity nature. The CLI maps these to exit
/// code 3.
class NumericError : public Error {
   public:
    using Error::Error;
};

class CycleError : public ParseError {
   public:
    using ParseError::ParseError;
};

class InvalidCptError : public ParseError {
   public:
    using ParseError::ParseError;
};

class IndexError : public Error {
   public:
    using Error::Error;
};

class TooLargeError : public NumericError {
   public:
    using NumericError::NumericError;
};

class ZeroEvidenceError : public NumericError {
   public:
    using NumericError::NumericError;
};

class DegenerateError : public NumericError {
   public:
    using NumericError::NumericError;
};

class AllRejectedError : public NumericError {
   public:
    using NumericError::NumericError;
};

class ZeroProposalError : public NumericError {
   public:
    using NumericError::NumericError;
};

class NotUnitaryError : public NumericError {
   public:
    using NumericError::NumericError;
};

class WidthError : public NumericError {
   public:
    using NumericError::NumericError;
};

}  // namespace qbnet

#endif
