#include "hofer/error.hpp"

namespace hofer {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidParams: return "InvalidParams";
    case ErrorCode::InvalidMesh: return "InvalidMesh";
    case ErrorCode::NotEmbedded: return "NotEmbedded";
    case ErrorCode::LoopNotInMesh: return "LoopNotInMesh";
    case ErrorCode::NotRegularRegion: return "NotRegularRegion";
    case ErrorCode::NonContractibleBoundary: return "NonContractibleBoundary";
    case ErrorCode::PresetOutOfBounds: return "PresetOutOfBounds";
    case ErrorCode::SupportTouchesEnd: return "SupportTouchesEnd";
    case ErrorCode::SimplyConnectedSurface: return "SimplyConnectedSurface";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::InvalidBand: return "InvalidBand";
    case ErrorCode::KappaNotRegular: return "KappaNotRegular";
    case ErrorCode::MismatchedInputs: return "MismatchedInputs";
    case ErrorCode::OutsideChart: return "OutsideChart";
    case ErrorCode::StepTooLarge: return "StepTooLarge";
    case ErrorCode::NoCoordinates: return "NoCoordinates";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

}  // namespace hofer
