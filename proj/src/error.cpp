// Copyright 2026 The Sealed State Authors
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

#include "sealed/error.hpp"

namespace sealed {

std::string_view to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::invalid_state: return "InvalidState";
    case ErrorCode::dimension_too_large: return "DimensionTooLarge";
    case ErrorCode::unknown_label: return "UnknownLabel";
    case ErrorCode::uncovered_label: return "UncoveredLabel";
    case ErrorCode::not_unitary: return "NotUnitary";
    case ErrorCode::label_collision: return "LabelCollision";
    case ErrorCode::empty_garbage_set: return "EmptyGarbageSet";
    case ErrorCode::duplicate_picture: return "DuplicatePicture";
    case ErrorCode::too_few_pictures: return "TooFewPictures";
    case ErrorCode::empty_message: return "EmptyMessage";
    case ErrorCode::partial_predicate: return "PartialPredicate";
    case ErrorCode::invalid_index: return "InvalidIndex";
    case ErrorCode::length_mismatch: return "LengthMismatch";
    case ErrorCode::oracle_unavailable: return "OracleUnavailable";
    case ErrorCode::config_invalid: return "ConfigInvalid";
    case ErrorCode::io_error: return "IoError";
    case ErrorCode::parse_error: return "ParseError";
    }
    return "Unknown";
}

}  // namespace sealed
