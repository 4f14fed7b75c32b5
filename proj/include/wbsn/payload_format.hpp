#pragma once

#include <span>

#include "wbsn/bytes.hpp"
#include "wbsn/crt_codec.hpp"

namespace wbsn {

// Inner payload layout (all integers big-endian):
//   "NTIC" | version 0x01 | k:u16 | width:u32 | height:u32 | pad:u16 | blocks:u32
//   2 × table:  count:u32, then per entry len:u16 + magnitude bytes (zero is len 0)
//   2 × codes:  width:u8, then blocks × width bits, MSB first, zero-padded to a byte
inline constexpr std::uint8_t kPayloadMagic[4] = {'N', 'T', 'I', 'C'};
inline constexpr std::uint8_t kPayloadVersion = 0x01;
inline constexpr std::size_t kPayloadHeaderSize = 21;

/// Bits per code for a table of the given size; 0 when one entry (or none) suffices.
std::uint8_t code_width(std::size_t table_size);

Bytes serialize_payload(const crt::NticePayload& p);

/// Strict inverse of serialize_payload: only canonical encodings are accepted.
/// Throws Errc::BadMagic, Errc::BadVersion, Errc::Truncated or
/// Errc::InconsistentCounts (any structural or canonical-form violation,
/// including trailing bytes).
crt::NticePayload parse_payload(std::span<const std::uint8_t> bytes);

}  // namespace wbsn
