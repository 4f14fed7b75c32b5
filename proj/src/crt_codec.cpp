#include "wbsn/crt_codec.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <string>

#include "wbsn/rng.hpp"

namespace wbsn::crt {

std::int64_t modular_inverse(std::int64_t a, std::int64_t m) {
  if (m < 2) throw Error(Errc::NotInvertible, "modulus must be at least 2, got " + std::to_string(m));
  std::int64_t r0 = m, r1 = ((a % m) + m) % m;
  std::int64_t t0 = 0, t1 = 1;
  while (r1 != 0) {
    const std::int64_t q = r0 / r1;
    r0 = std::exchange(r1, r0 - q * r1);
    t0 = std::exchange(t1, t0 - q * t1);
  }
  if (r0 != 1) {
    throw Error(Errc::NotInvertible,
                std::to_string(a) + " mod " + std::to_string(m) + " shares factor " + std::to_string(r0));
  }
  return t0 < 0 ? t0 + m : t0;
}

CrtKeySet build_key(std::span<const std::uint32_t> moduli) {
  if (moduli.empty()) throw Error(Errc::InvalidModuli, "no moduli given");
  if (moduli.size() > UINT16_MAX) throw Error(Errc::InvalidModuli, "more than 65535 moduli");
  for (std::size_t i = 0; i < moduli.size(); ++i) {
    if (moduli[i] < kMinModulus) {
      throw Error(Errc::InvalidModuli, "n[" + std::to_string(i + 1) + "] = " + std::to_string(moduli[i]) +
                                           " is below " + std::to_string(kMinModulus));
    }
  }
  for (std::size_t i = 0; i < moduli.size(); ++i) {
    for (std::size_t j = i + 1; j < moduli.size(); ++j) {
      if (const auto g = std::gcd(moduli[i], moduli[j]); g != 1) {
        throw Error(Errc::InvalidModuli, "n[" + std::to_string(i + 1) + "] = " + std::to_string(moduli[i]) +
                                             " and n[" + std::to_string(j + 1) + "] = " + std::to_string(moduli[j]) +
                                             " share factor " + std::to_string(g));
      }
    }
  }

  CrtKeySet key;
  key.moduli_.assign(moduli.begin(), moduli.end());
  key.product_ = 1;
  for (auto n : moduli) key.product_ *= n;
  key.coefficients_.reserve(moduli.size());
  for (auto n : moduli) {
    const BigUint cofactor = key.product_ / n;
    const auto residue = static_cast<std::int64_t>(static_cast<std::uint64_t>(cofactor % n));
    key.coefficients_.push_back(cofactor * modular_inverse(residue, n));
  }
  return key;
}

CrtKeySet generate_key(std::size_t k, std::uint64_t seed) {
  std::vector<std::uint32_t> primes;
  for (std::uint32_t p = 17; p <= 251; ++p) {
    bool prime = true;
    for (std::uint32_t d = 2; d * d <= p; ++d) {
      if (p % d == 0) {
        prime = false;
        break;
      }
    }
    if (prime) primes.push_back(p);
  }
  if (k == 0 || k > primes.size()) {
    throw Error(Errc::InvalidParameters,
                "k must be in [1, " + std::to_string(primes.size()) + "], got " + std::to_string(k));
  }
  Rng rng(seed);
  rng.shuffle(std::span(primes));
  primes.resize(k);
  return build_key(primes);
}

BigUint encode_block(std::span<const std::uint8_t> halves, const CrtKeySet& key) {
  if (halves.size() != key.k()) {
    throw Error(Errc::LengthMismatch,
                "block has " + std::to_string(halves.size()) + " half-pixels, key expects " + std::to_string(key.k()));
  }
  BigUint sum = 0;
  const auto coeff = key.coefficients();
  for (std::size_t i = 0; i < halves.size(); ++i) {
    if (halves[i] > 15) throw Error(Errc::ValueOutOfRange, "half-pixel " + std::to_string(halves[i]) + " exceeds 15");
    if (halves[i] != 0) sum += coeff[i] * halves[i];
  }
  return sum % key.product();
}

std::vector<std::uint32_t> decode_block(const BigUint& tr, const CrtKeySet& key) {
  if (tr < 0 || tr >= key.product()) {
    throw Error(Errc::ValueOutOfRange, "TR " + tr.str() + " not below P = " + key.product().str());
  }
  std::vector<std::uint32_t> out;
  out.reserve(key.k());
  for (auto n : key.moduli()) out.push_back(static_cast<std::uint32_t>(tr % n));
  return out;
}

CodeTable build_code_table(std::span<const BigUint> values) {
  std::map<BigUint, std::uint32_t> counts;
  for (const auto& v : values) ++counts[v];

  std::vector<std::pair<BigUint, std::uint32_t>> ranked(counts.begin(), counts.end());
  // std::map already yields ascending values; stable sort keeps that as the tie order.
  std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) { return a.second > b.second; });

  CodeTable out;
  out.table.reserve(ranked.size());
  std::map<BigUint, std::uint32_t> index;
  for (auto& [value, count] : ranked) {
    index.emplace(value, static_cast<std::uint32_t>(out.table.size()));
    out.table.push_back(value);
  }
  out.codes.reserve(values.size());
  for (const auto& v : values) out.codes.push_back(index.at(v));
  return out;
}

namespace {

[[noreturn]] void corrupt(const std::string& what) { throw Error(Errc::CorruptPayload, what); }

void check_stream(const std::vector<BigUint>& table, const std::vector<std::uint32_t>& codes, std::uint32_t block_count,
                  const char* name) {
  if (codes.size() != block_count) {
    corrupt(std::string(name) + " holds " + std::to_string(codes.size()) + " codes for " +
            std::to_string(block_count) + " blocks");
  }
  std::vector<std::uint64_t> counts(table.size(), 0);
  for (std::size_t j = 0; j < codes.size(); ++j) {
    if (codes[j] >= table.size()) {
      corrupt(std::string(name) + " code " + std::to_string(j) + " = " + std::to_string(codes[j]) +
              " indexes a table of " + std::to_string(table.size()));
    }
    ++counts[codes[j]];
  }
  std::set<BigUint> seen;
  for (std::size_t i = 0; i < table.size(); ++i) {
    if (!seen.insert(table[i]).second) corrupt(std::string(name) + " table repeats " + table[i].str());
    if (counts[i] == 0) corrupt(std::string(name) + " table entry " + std::to_string(i) + " is never used");
    if (i > 0 && (counts[i] > counts[i - 1] || (counts[i] == counts[i - 1] && table[i] < table[i - 1]))) {
      corrupt(std::string(name) + " table is not in frequency order at entry " + std::to_string(i));
    }
  }
}

}  // namespace

void check_payload_structure(const NticePayload& p) {
  if (p.k == 0) corrupt("block length k is 0");
  if (p.original_width == 0 || p.original_height == 0) corrupt("zero image dimension");
  if (p.pad_length >= p.k) corrupt("pad length " + std::to_string(p.pad_length) + " not below k");
  const std::uint64_t halves = std::uint64_t{p.original_width} * p.original_height + p.pad_length;
  if (std::uint64_t{p.block_count} * p.k != halves) {
    corrupt(std::to_string(p.block_count) + " blocks of " + std::to_string(p.k) + " do not cover " +
            std::to_string(p.original_width) + "x" + std::to_string(p.original_height) + " plus " +
            std::to_string(p.pad_length) + " padding");
  }
  check_stream(p.tr_table, p.tr_codes, p.block_count, "TR");
  check_stream(p.tr_prime_table, p.tr_prime_codes, p.block_count, "TR'");
}

NticePayload encode_image(const ImageGrid& img, const CrtKeySet& key) {
  if (img.empty()) throw Error(Errc::EmptyImage, "image has no pixels");
  const std::size_t k = key.k();
  const std::size_t n = img.size();
  const std::size_t blocks = (n + k - 1) / k;
  if (blocks > UINT32_MAX) throw Error(Errc::InvalidDimensions, "image too large for a 32-bit block count");

  std::vector<std::uint8_t> quotients(blocks * k, 0);
  std::vector<std::uint8_t> remainders(blocks * k, 0);
  const auto px = img.pixels();
  for (std::size_t i = 0; i < n; ++i) {
    const auto h = split_pixel(px[i]);
    quotients[i] = h.quotient;
    remainders[i] = h.remainder;
  }

  std::vector<BigUint> tr(blocks), tr_prime(blocks);
  for (std::size_t b = 0; b < blocks; ++b) {
    tr[b] = encode_block(std::span(quotients).subspan(b * k, k), key);
    tr_prime[b] = encode_block(std::span(remainders).subspan(b * k, k), key);
  }

  auto q_table = build_code_table(tr);
  auto r_table = build_code_table(tr_prime);

  NticePayload p;
  p.k = static_cast<std::uint16_t>(k);
  p.block_count = static_cast<std::uint32_t>(blocks);
  p.original_width = img.width();
  p.original_height = img.height();
  p.pad_length = static_cast<std::uint16_t>(blocks * k - n);
  p.tr_table = std::move(q_table.table);
  p.tr_codes = std::move(q_table.codes);
  p.tr_prime_table = std::move(r_table.table);
  p.tr_prime_codes = std::move(r_table.codes);
  return p;
}

namespace {

// Residues of every table entry, decoded once; each must be a half-pixel.
std::vector<std::vector<std::uint32_t>> decode_table(const std::vector<BigUint>& table, const CrtKeySet& key,
                                                     const char* name) {
  std::vector<std::vector<std::uint32_t>> out;
  out.reserve(table.size());
  for (std::size_t i = 0; i < table.size(); ++i) {
    if (table[i] >= key.product()) corrupt(std::string(name) + " table entry " + std::to_string(i) + " is not below P");
    auto residues = decode_block(table[i], key);
    for (auto r : residues) {
      if (r > 15) corrupt(std::string(name) + " table entry " + std::to_string(i) + " decodes to residue " + std::to_string(r));
    }
    out.push_back(std::move(residues));
  }
  return out;
}

}  // namespace

ImageGrid decode_image(const NticePayload& p, const CrtKeySet& key) {
  if (p.k != key.k()) {
    throw Error(Errc::KeyMismatch, "payload block length " + std::to_string(p.k) + " but key has " +
                                       std::to_string(key.k()) + " moduli");
  }
  check_payload_structure(p);
  const auto q_blocks = decode_table(p.tr_table, key, "TR");
  const auto r_blocks = decode_table(p.tr_prime_table, key, "TR'");

  const std::size_t k = p.k;
  const std::size_t n = std::size_t{p.original_width} * p.original_height;
  std::vector<std::uint8_t> pixels(n);
  for (std::size_t b = 0; b < p.block_count; ++b) {
    const auto& q = q_blocks[p.tr_codes[b]];
    const auto& r = r_blocks[p.tr_prime_codes[b]];
    for (std::size_t i = 0; i < k; ++i) {
      const std::size_t at = b * k + i;
      if (at < n) {
        pixels[at] = reconstruct_pixel(static_cast<std::uint8_t>(q[i]), static_cast<std::uint8_t>(r[i]));
      } else if (q[i] != 0 || r[i] != 0) {
        corrupt("padding half-pixel " + std::to_string(at - n) + " is not zero");
      }
    }
  }
  return ImageGrid(p.original_width, p.original_height, std::move(pixels));
}

}  // namespace wbsn::crt
