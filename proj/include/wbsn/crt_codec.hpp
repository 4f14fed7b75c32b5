#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "wbsn/image.hpp"

namespace wbsn::crt {

using BigUint = boost::multiprecision::cpp_int;

/// Half-pixels are 4-bit; every modulus must exceed the largest one.
inline constexpr std::uint32_t kMinModulus = 16;

/// Inverse of a modulo m via the extended Euclidean algorithm.
/// Throws Errc::NotInvertible when gcd(a mod m, m) != 1.
std::int64_t modular_inverse(std::int64_t a, std::int64_t m);

/// Pairwise-coprime moduli n[1..k] with P = prod n[i] and the CRT basis
/// C[i] = (P / n[i]) * x[i], where x[i] inverts P / n[i] modulo n[i].
/// Immutable once built; construct through build_key().
class CrtKeySet {
 public:
  std::size_t k() const { return moduli_.size(); }
  std::span<const std::uint32_t> moduli() const { return moduli_; }
  const BigUint& product() const { return product_; }
  std::span<const BigUint> coefficients() const { return coefficients_; }

  friend bool operator==(const CrtKeySet& a, const CrtKeySet& b) { return a.moduli_ == b.moduli_; }

 private:
  friend CrtKeySet build_key(std::span<const std::uint32_t> moduli);
  std::vector<std::uint32_t> moduli_;
  BigUint product_;
  std::vector<BigUint> coefficients_;
};

/// Throws Errc::InvalidModuli for an empty set, an entry below 16, or the
/// first pair (i, j) with gcd(n[i], n[j]) != 1.
CrtKeySet build_key(std::span<const std::uint32_t> moduli);

/// k distinct primes in [17, 251] drawn from a seeded stream.
CrtKeySet generate_key(std::size_t k, std::uint64_t seed);

struct HalfPixels {
  std::uint8_t quotient;   // r div 16
  std::uint8_t remainder;  // r mod 16
  friend bool operator==(const HalfPixels&, const HalfPixels&) = default;
};

constexpr HalfPixels split_pixel(std::uint8_t r) {
  return {static_cast<std::uint8_t>(r >> 4), static_cast<std::uint8_t>(r & 0x0F)};
}

constexpr std::uint8_t reconstruct_pixel(std::uint8_t quotient, std::uint8_t remainder) {
  return static_cast<std::uint8_t>(quotient * 16 + remainder);
}

/// TR = (sum C[i] * a[i]) mod P. Requires halves.size() == key.k() and each
/// value < 16 (Errc::LengthMismatch / Errc::ValueOutOfRange otherwise).
BigUint encode_block(std::span<const std::uint8_t> halves, const CrtKeySet& key);

/// Residues tr mod n[i]. Throws Errc::ValueOutOfRange when tr >= P. Residues
/// may exceed 15 for a TR that no block of half-pixels produces.
std::vector<std::uint32_t> decode_block(const BigUint& tr, const CrtKeySet& key);

struct CodeTable {
  std::vector<BigUint> table;         // distinct values, most frequent first
  std::vector<std::uint32_t> codes;   // codes[j] indexes table for values[j]
};

/// Frequency-sorted code table: descending count, ties by ascending value.
CodeTable build_code_table(std::span<const BigUint> values);

struct NticePayload {
  std::uint16_t k = 0;
  std::uint32_t block_count = 0;
  std::uint32_t original_width = 0;
  std::uint32_t original_height = 0;
  std::uint16_t pad_length = 0;
  std::vector<BigUint> tr_table;
  std::vector<BigUint> tr_prime_table;
  std::vector<std::uint32_t> tr_codes;
  std::vector<std::uint32_t> tr_prime_codes;

  friend bool operator==(const NticePayload&, const NticePayload&) = default;
};

/// Checks everything that does not need the key: dimensions vs. block count
/// and padding, code indices in range, tables duplicate-free, every entry
/// used, and ordered by the code-table rule. Throws Errc::CorruptPayload.
void check_payload_structure(const NticePayload& p);

/// Throws Errc::EmptyImage for a grid without pixels.
NticePayload encode_image(const ImageGrid& img, const CrtKeySet& key);

/// Throws Errc::KeyMismatch when p.k != key.k(), Errc::CorruptPayload for an
/// inconsistent payload, a table value >= P or a residue above 15.
ImageGrid decode_image(const NticePayload& p, const CrtKeySet& key);

}  // namespace wbsn::crt
