// Copyright 2026 The minet Authors
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

#include "minet/error.hpp"

namespace minet {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::EmptyName: return "EmptyName";
    case ErrorCode::BadIpSyntax: return "BadIpSyntax";
    case ErrorCode::IllegalLabel: return "IllegalLabel";
    case ErrorCode::BadScheme: return "BadScheme";
    case ErrorCode::WrongKind: return "WrongKind";
    case ErrorCode::KindMismatch: return "KindMismatch";
    case ErrorCode::BadEncoding: return "BadEncoding";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::HopLimitExceeded: return "HopLimitExceeded";
    case ErrorCode::DuplicateNonce: return "DuplicateNonce";
    case ErrorCode::NotFound: return "NotFound";
    case ErrorCode::LoopDetected: return "LoopDetected";
    case ErrorCode::NotScheduled: return "NotScheduled";
    case ErrorCode::InsufficientVotes: return "InsufficientVotes";
    case ErrorCode::BadChainLink: return "BadChainLink";
    case ErrorCode::TermNotOver: return "TermNotOver";
    case ErrorCode::HashMismatch: return "HashMismatch";
    case ErrorCode::ScenarioUnsatisfiable: return "ScenarioUnsatisfiable";
    case ErrorCode::TransferIncomplete: return "TransferIncomplete";
    case ErrorCode::OverlappingSubtopologies: return "OverlappingSubtopologies";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::PrefixTaken: return "PrefixTaken";
    case ErrorCode::NotRegistered: return "NotRegistered";
    case ErrorCode::IntegrityFailure: return "IntegrityFailure";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace minet
