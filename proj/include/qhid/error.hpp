// Copyright 2026 The qhid Authors
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

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qhid {

enum class ErrorCode {
  // liealg
  InvalidDimension,
  IllConditionedBasis,
  InvalidOperator,
  // statespace
  InconsistentStructure,
  InternalInconsistency,
  Shape,
  // noisemodel
  InvalidPsd,
  DegeneratePsd,
  Aliasing,
  InvalidSegmentation,
  // sysid
  Length,
  DegenerateData,
  RankDeficiency,
  BranchAmbiguity,
  AliasingSuspected,
  // tfmatch
  SpecError,
  NoSolutionFound,
  // cli
  Config,
  Io,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above.
/// Config and Io errors are user-input problems; all others are numerical.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }
  bool is_config() const noexcept {
    return code_ == ErrorCode::Config || code_ == ErrorCode::Io;
  }

 private:
  ErrorCode code_;
};

inline std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidDimension: return "invalid-dimension";
    case ErrorCode::IllConditionedBasis: return "ill-conditioned-basis";
    case ErrorCode::InvalidOperator: return "invalid-operator";
    case ErrorCode::InconsistentStructure: return "inconsistent-structure";
    case ErrorCode::InternalInconsistency: return "internal-inconsistency";
    case ErrorCode::Shape: return "shape";
    case ErrorCode::InvalidPsd: return "invalid-psd";
    case ErrorCode::DegeneratePsd: return "degenerate-psd";
    case ErrorCode::Aliasing: return "aliasing";
    case ErrorCode::InvalidSegmentation: return "invalid-segmentation";
    case ErrorCode::Length: return "length";
    case ErrorCode::DegenerateData: return "degenerate-data";
    case ErrorCode::RankDeficiency: return "rank-deficiency";
    case ErrorCode::BranchAmbiguity: return "branch-ambiguity";
    case ErrorCode::AliasingSuspected: return "aliasing-suspected";
    case ErrorCode::SpecError: return "spec-error";
    case ErrorCode::NoSolutionFound: return "no-solution-found";
    case ErrorCode::Config: return "config-error";
    case ErrorCode::Io: return "io-error";
  }
  return "unknown";
}

}  // namespace qhid
