// Copyright 2026 The viewret Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef VIEWRET_ERROR_HPP
#define VIEWRET_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace viewret {

enum class Errc {
  kEmptyCloud,
  kDegenerateCloud,
  kBadResolution,
  kEmptyMesh,
  kZeroCardinality,
  kNoForeground,
  kTooFewPoints,
  kAllCollinear,
  kTooFewFeatures,
  kDegenerateComponent,
  kEmptyFeatureSet,
  kZeroVector,
  kDimensionMismatch,
  kEmptyDb,
  kNoHits,
  kNoRelevant,
  kMissingGroundTruth,
  kInvalidArgument,
  kIo,
  kParse,
};

std::string_view errc_name(Errc code);

/// Every failure raised by the library carries one of the codes above so
/// callers can branch on the kind without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message);

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace viewret

#endif  // VIEWRET_ERROR_HPP
