#include "wbsn/payload_format.hpp"

#include <algorithm>
#include <bit>
#include <iterator>

namespace wbsn {

std::uint8_t code_width(std::size_t table_size) {
  return table_size <= 1 ? 0 : static_cast<std::uint8_t>(std::bit_width(table_size - 1));
}

namespace {

using crt::BigUint;

void put_table(ByteWriter& w, const std::vector<BigUint>& table) {
  w.u32(static_cast<std::uint32_t>(table.size()));
  for (const auto& v : table) {
    Bytes mag;
    if (v != 0) boost::multiprecision::export_bits(v, std::back_inserter(mag), 8);
    w.u16(static_cast<std::uint16_t>(mag.size()));
    w.raw(mag);
  }
}

void put_codes(ByteWriter& w, const std::vector<std::uint32_t>& codes, std::uint8_t width) {
  w.u8(width);
  std::uint8_t acc = 0;
  int filled = 0;
  for (auto code : codes) {
    for (int b = width - 1; b >= 0; --b) {
      acc = static_cast<std::uint8_t>((acc << 1) | ((code >> b) & 1));
      if (++filled == 8) {
        w.u8(acc);
        acc = 0;
        filled = 0;
      }
    }
  }
  if (filled) w.u8(static_cast<std::uint8_t>(acc << (8 - filled)));
}

[[noreturn]] void inconsistent(const std::string& what) { throw Error(Errc::InconsistentCounts, what); }

std::vector<BigUint> get_table(ByteReader& r, const char* name) {
  const auto count = r.u32("table entry count");
  // Each entry needs at least its 2-byte length.
  if (std::uint64_t{count} * 2 > r.remaining()) {
    throw Error(Errc::Truncated, std::string(name) + " table claims " + std::to_string(count) + " entries");
  }
  std::vector<BigUint> table;
  table.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) {
    const auto len = r.u16("table entry length");
    const auto mag = r.raw(len, "table entry bytes");
    if (len > 0 && mag[0] == 0) inconsistent(std::string(name) + " entry " + std::to_string(i) + " has a leading zero byte");
    BigUint v = 0;
    if (len > 0) boost::multiprecision::import_bits(v, mag.begin(), mag.end(), 8);
    table.push_back(std::move(v));
  }
  return table;
}

std::vector<std::uint32_t> get_codes(ByteReader& r, std::uint32_t count, std::size_t table_size, const char* name) {
  const auto width = r.u8("code width");
  if (width != code_width(table_size)) {
    inconsistent(std::string(name) + " code width " + std::to_string(width) + " does not fit a table of " +
                 std::to_string(table_size));
  }
  const std::uint64_t bits = std::uint64_t{count} * width;
  const auto packed = r.raw(static_cast<std::size_t>((bits + 7) / 8), "code stream");
  std::vector<std::uint32_t> codes(count, 0);
  std::uint64_t at = 0;
  for (auto& code : codes) {
    for (int b = 0; b < width; ++b, ++at) code = (code << 1) | ((packed[at / 8] >> (7 - at % 8)) & 1);
  }
  if (bits % 8 != 0 && (packed.back() & (0xFF >> (bits % 8))) != 0) {
    inconsistent(std::string(name) + " code stream has nonzero padding bits");
  }
  return codes;
}

}  // namespace

Bytes serialize_payload(const crt::NticePayload& p) {
  ByteWriter w;
  w.raw(kPayloadMagic);
  w.u8(kPayloadVersion);
  w.u16(p.k);
  w.u32(p.original_width);
  w.u32(p.original_height);
  w.u16(p.pad_length);
  w.u32(p.block_count);
  put_table(w, p.tr_table);
  put_table(w, p.tr_prime_table);
  put_codes(w, p.tr_codes, code_width(p.tr_table.size()));
  put_codes(w, p.tr_prime_codes, code_width(p.tr_prime_table.size()));
  return std::move(w).take();
}

crt::NticePayload parse_payload(std::span<const std::uint8_t> bytes) {
  ByteReader r(bytes);
  const auto magic = r.raw(4, "payload magic");
  if (!std::equal(magic.begin(), magic.end(), std::begin(kPayloadMagic))) throw Error(Errc::BadMagic, "payload magic is not NTIC");
  if (const auto v = r.u8("payload version"); v != kPayloadVersion) {
    throw Error(Errc::BadVersion, "payload version " + std::to_string(v));
  }
  crt::NticePayload p;
  p.k = r.u16("k");
  p.original_width = r.u32("width");
  p.original_height = r.u32("height");
  p.pad_length = r.u16("pad length");
  p.block_count = r.u32("block count");
  if (p.k == 0 || p.pad_length >= p.k ||
      std::uint64_t{p.block_count} * p.k != std::uint64_t{p.original_width} * p.original_height + p.pad_length) {
    inconsistent("header dimensions, padding and block count disagree");
  }
  p.tr_table = get_table(r, "TR");
  p.tr_prime_table = get_table(r, "TR'");
  p.tr_codes = get_codes(r, p.block_count, p.tr_table.size(), "TR");
  p.tr_prime_codes = get_codes(r, p.block_count, p.tr_prime_table.size(), "TR'");
  if (r.remaining() != 0) inconsistent(std::to_string(r.remaining()) + " trailing byte(s) after payload");
  try {
    crt::check_payload_structure(p);
  } catch (const Error& e) {
    inconsistent(e.what());
  }
  return p;
}

}  // namespace wbsn
