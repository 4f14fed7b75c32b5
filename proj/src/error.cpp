#include "wbsn/error.hpp"

namespace wbsn {

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::NotInvertible: return "NotInvertible";
    case Errc::InvalidModuli: return "InvalidModuli";
    case Errc::LengthMismatch: return "LengthMismatch";
    case Errc::ValueOutOfRange: return "ValueOutOfRange";
    case Errc::EmptyImage: return "EmptyImage";
    case Errc::CorruptPayload: return "CorruptPayload";
    case Errc::KeyMismatch: return "KeyMismatch";
    case Errc::UnsupportedOrder: return "UnsupportedOrder";
    case Errc::InvalidLatinSquare: return "InvalidLatinSquare";
    case Errc::SymbolOutOfRange: return "SymbolOutOfRange";
    case Errc::InvalidBlockLength: return "InvalidBlockLength";
    case Errc::InvalidParameters: return "InvalidParameters";
    case Errc::TooShort: return "TooShort";
    case Errc::NoPeaks: return "NoPeaks";
    case Errc::InsufficientPeaks: return "InsufficientPeaks";
    case Errc::EmptySignature: return "EmptySignature";
    case Errc::BadMagic: return "BadMagic";
    case Errc::BadVersion: return "BadVersion";
    case Errc::Truncated: return "Truncated";
    case Errc::InconsistentCounts: return "InconsistentCounts";
    case Errc::UnknownKeyId: return "UnknownKeyId";
    case Errc::EmptyInput: return "EmptyInput";
    case Errc::DivisionByZero: return "DivisionByZero";
    case Errc::InvalidDimensions: return "InvalidDimensions";
    case Errc::BadFile: return "BadFile";
  }
  return "Unknown";
}

}  // namespace wbsn
