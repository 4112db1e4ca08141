// Copyright 2026 The viewret Authors
// SPDX-License-Identifier: Apache-2.0

#include "viewret/error.hpp"

namespace viewret {

std::string_view errc_name(Errc code) {
  switch (code) {
    case Errc::kEmptyCloud: return "EmptyCloud";
    case Errc::kDegenerateCloud: return "DegenerateCloud";
    case Errc::kBadResolution: return "BadResolution";
    case Errc::kEmptyMesh: return "EmptyMesh";
    case Errc::kZeroCardinality: return "ZeroCardinality";
    case Errc::kNoForeground: return "NoForeground";
    case Errc::kTooFewPoints: return "TooFewPoints";
    case Errc::kAllCollinear: return "AllCollinear";
    case Errc::kTooFewFeatures: return "TooFewFeatures";
    case Errc::kDegenerateComponent: return "DegenerateComponent";
    case Errc::kEmptyFeatureSet: return "EmptyFeatureSet";
    case Errc::kZeroVector: return "ZeroVector";
    case Errc::kDimensionMismatch: return "DimensionMismatch";
    case Errc::kEmptyDb: return "EmptyDb";
    case Errc::kNoHits: return "NoHits";
    case Errc::kNoRelevant: return "NoRelevant";
    case Errc::kMissingGroundTruth: return "MissingGroundTruth";
    case Errc::kInvalidArgument: return "InvalidArgument";
    case Errc::kIo: return "Io";
    case Errc::kParse: return "Parse";
  }
  return "Unknown";
}

Error::Error(Errc code, const std::string& message)
    : std::runtime_error(std::string(errc_name(code)) + ": " + message),
      code_(code) {}

}  // namespace viewret
