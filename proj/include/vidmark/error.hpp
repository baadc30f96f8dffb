#pragma once

#include <stdexcept>
#include <string>

namespace vidmark {

enum class Errc {
  InvalidArgument,
  UnsupportedFormat,
  CorruptHeader,
  DimensionMismatch,
  IoFailure,
  BadShape,
  BadBandCode,
  PayloadTooLarge,
  PayloadMismatch,
  KeyClipMismatch,
  CodecUnavailable,
  CodecFailure,
  EmptyPool,
  LengthMismatch,
  FrameTooSmall,
  InsufficientSamples,
  ClipTooShort,
  BadGeometry,
  ConfigInvalid,
  CorpusEmpty,
};

const char* to_string(Errc code);

// Every failure raised by the library carries one of the codes above so the
// CLI can map it to an exit status.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace vidmark
