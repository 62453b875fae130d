#pragma once

#include <stdexcept>
#include <string>

namespace hofer {

enum class ErrorCode {
  InvalidParams,
  InvalidMesh,
  NotEmbedded,
  LoopNotInMesh,
  NotRegularRegion,
  NonContractibleBoundary,
  PresetOutOfBounds,
  SupportTouchesEnd,
  SimplyConnectedSurface,
  TooLarge,
  InvalidBand,
  KappaNotRegular,
  MismatchedInputs,
  OutsideChart,
  StepTooLarge,
  NoCoordinates,
  ParseError,
};

const char* to_string(ErrorCode code);

/// Exception type for every failure the library reports. The code is stable
/// and is what the CLI maps to exit statuses and diagnostics.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace hofer
