#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "wbsn/error.hpp"

namespace wbsn {

using Bytes = std::vector<std::uint8_t>;

// Big-endian writer over a growable byte buffer.
class ByteWriter {
 public:
  void u8(std::uint8_t v) { out_.push_back(v); }
  void u16(std::uint16_t v) { put_be(v, 2); }
  void u32(std::uint32_t v) { put_be(v, 4); }
  void u64(std::uint64_t v) { put_be(v, 8); }
  void raw(std::span<const std::uint8_t> data) { out_.insert(out_.end(), data.begin(), data.end()); }

  const Bytes& bytes() const& { return out_; }
  Bytes take() && { return std::move(out_); }

 private:
  void put_be(std::uint64_t v, int width) {
    for (int i = width - 1; i >= 0; --i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  Bytes out_;
};

// Big-endian reader; every short read raises Errc::Truncated naming the field.
class ByteReader {
 public:
  explicit ByteReader(std::span<const std::uint8_t> data) : data_(data) {}

  std::uint8_t u8(const char* field) { return static_cast<std::uint8_t>(get_be(1, field)); }
  std::uint16_t u16(const char* field) { return static_cast<std::uint16_t>(get_be(2, field)); }
  std::uint32_t u32(const char* field) { return static_cast<std::uint32_t>(get_be(4, field)); }
  std::uint64_t u64(const char* field) { return get_be(8, field); }

  std::span<const std::uint8_t> raw(std::size_t n, const char* field) {
    require(n, field);
    auto s = data_.subspan(pos_, n);
    pos_ += n;
    return s;
  }

  std::size_t remaining() const { return data_.size() - pos_; }
  std::size_t position() const { return pos_; }

 private:
  void require(std::size_t n, const char* field) const {
    if (remaining() < n) {
      throw Error(Errc::Truncated, std::string("need ") + std::to_string(n) + " byte(s) for " + field +
                                       " at offset " + std::to_string(pos_) + ", have " +
                                       std::to_string(remaining()));
    }
  }
  std::uint64_t get_be(std::size_t width, const char* field) {
    require(width, field);
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < width; ++i) v = (v << 8) | data_[pos_ + i];
    pos_ += width;
    return v;
  }

  std::span<const std::uint8_t> data_;
  std::size_t pos_ = 0;
};

}  // namespace wbsn
