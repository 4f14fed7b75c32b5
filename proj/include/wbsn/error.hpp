#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace wbsn {

enum class Errc {
  // crt_codec
  NotInvertible,
  InvalidModuli,
  LengthMismatch,
  ValueOutOfRange,
  EmptyImage,
  CorruptPayload,
  KeyMismatch,
  // quasi_cipher
  UnsupportedOrder,
  InvalidLatinSquare,
  SymbolOutOfRange,
  InvalidBlockLength,
  // ecg_auth
  InvalidParameters,
  TooShort,
  NoPeaks,
  InsufficientPeaks,
  EmptySignature,
  // secure_pipeline
  BadMagic,
  BadVersion,
  Truncated,
  InconsistentCounts,
  UnknownKeyId,
  // bench / files
  EmptyInput,
  DivisionByZero,
  InvalidDimensions,
  BadFile,
};

std::string_view errc_name(Errc code) noexcept;

/// Every failure raised by the library carries one of the codes above so
/// callers (and the CLI exit-code mapping) can branch without string matching.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& detail)
      : std::runtime_error(std::string(errc_name(code)) + ": " + detail), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace wbsn
