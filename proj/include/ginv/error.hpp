// Copyright 2026 The ginv Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef GINV_ERROR_HPP
#define GINV_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace ginv {

enum class ErrorCode {
  InvalidInput,
  Singular,
  MismatchedAmbient,
  NotIdempotent,
  NotComplementary,
  PerturbationTooLarge,
  NotExists,
  IllConditioned,
  NoGroupInverse,
  DimMismatch,
  RepresentationMismatch,
  BadWitness,
  SideConditionViolated,
  GenerationFailed,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::Singular: return "Singular";
    case ErrorCode::MismatchedAmbient: return "MismatchedAmbient";
    case ErrorCode::NotIdempotent: return "NotIdempotent";
    case ErrorCode::NotComplementary: return "NotComplementary";
    case ErrorCode::PerturbationTooLarge: return "PerturbationTooLarge";
    case ErrorCode::NotExists: return "NotExists";
    case ErrorCode::IllConditioned: return "IllConditioned";
    case ErrorCode::NoGroupInverse: return "NoGroupInverse";
    case ErrorCode::DimMismatch: return "DimMismatch";
    case ErrorCode::RepresentationMismatch: return "RepresentationMismatch";
    case ErrorCode::BadWitness: return "BadWitness";
    case ErrorCode::SideConditionViolated: return "SideConditionViolated";
    case ErrorCode::GenerationFailed: return "GenerationFailed";
  }
  return "Unknown";
}

/// Exception thrown by every ginv operation that can fail. The code is
/// part of the contract; the message is diagnostic only.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace ginv

#endif  // GINV_ERROR_HPP
