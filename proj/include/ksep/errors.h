// Copyright 2026 The ksep Authors
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

#ifndef KSEP_ERRORS_H
#define KSEP_ERRORS_H

#include <stdexcept>
#include <string>

namespace ksep {

/// Base class of every error raised by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Operand shapes are incompatible.
struct DimensionError : Error {
    using Error::Error;
};

/// An integer or real argument is outside its documented range.
struct ParameterError : Error {
    using Error::Error;
};

/// A vector that must be unit norm is not.
struct NormalizationError : Error {
    using Error::Error;
};

/// Mixture weights are negative or do not sum to one.
struct WeightError : Error {
    using Error::Error;
};

/// A file or descriptor could not be parsed.
struct FormatError : Error {
    using Error::Error;
};

/// A computed quantity violates an analytic guarantee (e.g. a diagonal
/// element of a supposedly PSD matrix is clearly negative).
struct NumericalError : Error {
    using Error::Error;
};

/// The brute-force two-copy oracle was asked to exceed its size limit.
struct GuardError : Error {
    using Error::Error;
};

}  // namespace ksep

#endif
