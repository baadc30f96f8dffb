#include "vidmark/error.hpp"

namespace vidmark {

const char* to_string(Errc code) {
  switch (code) {
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::UnsupportedFormat: return "UnsupportedFormat";
    case Errc::CorruptHeader: return "CorruptHeader";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::IoFailure: return "IoFailure";
    case Errc::BadShape: return "BadShape";
    case Errc::BadBandCode: return "BadBandCode";
    case Errc::PayloadTooLarge: return "PayloadTooLarge";
    case Errc::PayloadMismatch: return "PayloadMismatch";
    case Errc::KeyClipMismatch: return "KeyClipMismatch";
    case Errc::CodecUnavailable: return "CodecUnavailable";
    case Errc::CodecFailure: return "CodecFailure";
    case Errc::EmptyPool: return "EmptyPool";
    case Errc::LengthMismatch: return "LengthMismatch";
    case Errc::FrameTooSmall: return "FrameTooSmall";
    case Errc::InsufficientSamples: return "InsufficientSamples";
    case Errc::ClipTooShort: return "ClipTooShort";
    case Errc::BadGeometry: return "BadGeometry";
    case Errc::ConfigInvalid: return "ConfigInvalid";
    case Errc::CorpusEmpty: return "CorpusEmpty";
  }
  return "Unknown";
}

}  // namespace vidmark
