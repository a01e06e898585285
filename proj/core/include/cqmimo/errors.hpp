// SPDX-License-Identifier: Apache-2.0
//
// cqmimo: precoding and power allocation for multi-user MIMO with few-bit DACs
// Copyright (C) 2026 the cqmimo authors
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

#ifndef CQMIMO_ERRORS_HPP
#define CQMIMO_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace cqmimo {

/// Base class of every exception thrown by this library.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

#define CQMIMO_DEFINE_ERROR(name)                                  \
    struct name : Error {                                          \
        explicit name(const std::string& msg) : Error(msg) {}      \
    }

// linalg
CQMIMO_DEFINE_ERROR(ConvergenceFailure);
CQMIMO_DEFINE_ERROR(NotPositiveDefinite);
CQMIMO_DEFINE_ERROR(InvalidDimensions);

// channel
CQMIMO_DEFINE_ERROR(IndexOutOfRange);
CQMIMO_DEFINE_ERROR(NotPositiveSemidefinite);

// quantizer
CQMIMO_DEFINE_ERROR(SearchFailure);

// precoder
CQMIMO_DEFINE_ERROR(RankDeficiency);
CQMIMO_DEFINE_ERROR(DimensionMismatch);
CQMIMO_DEFINE_ERROR(BudgetExceeded);
CQMIMO_DEFINE_ERROR(NegativePower);

// poweralloc
CQMIMO_DEFINE_ERROR(EmptyProblem);
CQMIMO_DEFINE_ERROR(NoFeasibleAllocation);
CQMIMO_DEFINE_ERROR(NegativeDiscriminant);
CQMIMO_DEFINE_ERROR(DomainError);

// rates
CQMIMO_DEFINE_ERROR(ApproximationInvalid);

// costmodel
CQMIMO_DEFINE_ERROR(UnknownKind);

// harness
CQMIMO_DEFINE_ERROR(MissingCurve);
CQMIMO_DEFINE_ERROR(ConfigError);

#undef CQMIMO_DEFINE_ERROR

}  // namespace cqmimo

#endif  // CQMIMO_ERRORS_HPP
