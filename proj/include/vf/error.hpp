// Copyright 2026 The vecforecast Authors.
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

#ifndef VF_ERROR_HPP_
#define VF_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace vf {

enum class ErrorKind {
  kMalformedRecord,
  kNonMonotoneTrack,
  kEmptyScene,
  kInsufficientHistory,
  kFrameMismatch,
  kShapeMismatch,
  kEmptyReduction,
  kNotScalarLoss,
  kEmptyPolyline,
  kIndexOutOfRange,
  kNoCenterlines,
  kLengthMismatch,
  kDegeneratePolygon,
  kCorruptCheckpoint,
  kConfigInvalid,
  kFileError,
  kNonFinite,
};

std::string_view to_string(ErrorKind kind);

// Every failure in the library is reported as an Error carrying a kind so
// callers (and tests) can branch on it without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what),
        kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kMalformedRecord: return "MalformedRecord";
    case ErrorKind::kNonMonotoneTrack: return "NonMonotoneTrack";
    case ErrorKind::kEmptyScene: return "EmptyScene";
    case ErrorKind::kInsufficientHistory: return "InsufficientHistory";
    case ErrorKind::kFrameMismatch: return "FrameMismatch";
    case ErrorKind::kShapeMismatch: return "ShapeMismatch";
    case ErrorKind::kEmptyReduction: return "EmptyReduction";
    case ErrorKind::kNotScalarLoss: return "NotScalarLoss";
    case ErrorKind::kEmptyPolyline: return "EmptyPolyline";
    case ErrorKind::kIndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::kNoCenterlines: return "NoCenterlines";
    case ErrorKind::kLengthMismatch: return "LengthMismatch";
    case ErrorKind::kDegeneratePolygon: return "DegeneratePolygon";
    case ErrorKind::kCorruptCheckpoint: return "CorruptCheckpoint";
    case ErrorKind::kConfigInvalid: return "ConfigInvalid";
    case ErrorKind::kFileError: return "FileError";
    case ErrorKind::kNonFinite: return "NonFinite";
  }
  return "Unknown";
}

}  // namespace vf

#endif  // VF_ERROR_HPP_
