// Copyright 2026 The qxcomp Authors
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

#include "qxcomp/error.hpp"

namespace qxcomp {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::NotDensityMatrix: return "NotDensityMatrix";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::SizeOverflow: return "SizeOverflow";
    case ErrorCode::EmptySequence: return "EmptySequence";
    case ErrorCode::ExactCapExceeded: return "ExactCapExceeded";
    case ErrorCode::ZeroProbabilityLetter: return "ZeroProbabilityLetter";
    case ErrorCode::KraftViolated: return "KraftViolated";
    case ErrorCode::DecodeError: return "DecodeError";
    case ErrorCode::SupportMismatch: return "SupportMismatch";
    case ErrorCode::EmptyProjector: return "EmptyProjector";
  }
  return "Unknown";
}

}  // namespace qxcomp
