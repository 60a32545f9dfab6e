// Copyright 2026 The dirwf Authors
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

#ifndef DIRWF_ERRORS_H
#define DIRWF_ERRORS_H

#include <stdexcept>

namespace dirwf {

/// Base class of every error raised by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvalidArgument : Error {
    using Error::Error;
};

// qstate
struct ZeroVector : Error {
    using Error::Error;
};
struct DimensionMismatch : Error {
    using Error::Error;
};

// protocol
struct IndexOutOfRange : Error {
    using Error::Error;
};
struct ThetaOutOfRange : Error {
    using Error::Error;
};
struct NormalizedInputRejected : Error {
    using Error::Error;
};
struct DegeneratePointer : Error {
    using Error::Error;
};

// experiment
struct InsufficientStatistics : Error {
    using Error::Error;
};

// reconstruct
struct ReconstructionDegenerate : Error {
    using Error::Error;
};
struct KindMismatch : Error {
    using Error::Error;
};
struct PostSelectionDegenerate : Error {
    using Error::Error;
};
struct TruthRequired : Error {
    using Error::Error;
};

// analysis
struct DegenerateFit : Error {
    using Error::Error;
};

}  // namespace dirwf

#endif  // DIRWF_ERRORS_H
