// Copyright 2026 The rmkit Authors
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

#include "rmkit/error.hpp"

namespace rmkit {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::InvalidSize: return "InvalidSize";
        case ErrorCode::InvalidSubsystem: return "InvalidSubsystem";
        case ErrorCode::NotSupportedOnSubsystem: return "NotSupportedOnSubsystem";
        case ErrorCode::UnsupportedSetting: return "UnsupportedSetting";
        case ErrorCode::SizeMismatch: return "SizeMismatch";
        case ErrorCode::SettingsMismatch: return "SettingsMismatch";
        case ErrorCode::TooLargeForDense: return "TooLargeForDense";
        case ErrorCode::TooLarge: return "TooLarge";
        case ErrorCode::NotUnitary: return "NotUnitary";
        case ErrorCode::InvalidState: return "InvalidState";
        case ErrorCode::CalibrationOutOfRange: return "CalibrationOutOfRange";
        case ErrorCode::UnsupportedReferenceState: return "UnsupportedReferenceState";
        case ErrorCode::NotEnoughBatches: return "NotEnoughBatches";
        case ErrorCode::NotEnoughShots: return "NotEnoughShots";
        case ErrorCode::NotEnoughSamples: return "NotEnoughSamples";
        case ErrorCode::ChannelNotInvertible: return "ChannelNotInvertible";
        case ErrorCode::EnsembleMismatch: return "EnsembleMismatch";
        case ErrorCode::IoError: return "IoError";
        case ErrorCode::CorruptInput: return "CorruptInput";
    }
    return "Unknown";
}

Error::Error(ErrorCode code, const std::string &message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

void fail(ErrorCode code, const std::string &message) { throw Error(code, message); }

}  // namespace rmkit
