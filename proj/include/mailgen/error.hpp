#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mailgen {

enum class ErrorCode {
  MalformedDocument,
  MissingId,
  UnknownTag,
  MalformedMarkup,
  NoSkeletons,
  InvalidMotivationTemplate,
  CorruptLibrary,
  BadRow,
  EmptyTaxonomy,
  DepthExceeded,
  UnknownComponent,
  EmptyList,
  NoMotivationTemplates,
  UnfillableSlot,
  InvalidConfig,
  EmptyCorpus,
  MissingCondition,
  Io,
};

std::string_view to_string(ErrorCode code);

// All library failures surface as this exception; `code()` identifies the
// failure class, `what()` carries the human-readable detail.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace mailgen
