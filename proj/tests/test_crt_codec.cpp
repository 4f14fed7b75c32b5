#include <doctest.h>

#include <set>

#include "oracles.hpp"
#include "wbsn/crt_codec.hpp"
#include "wbsn/rng.hpp"
#include "wbsn/synth_image.hpp"

using namespace wbsn;
using namespace wbsn::crt;

namespace {

template <typename F>
Errc error_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return Errc::BadFile;
}

std::vector<std::uint32_t> m1719{17, 19};

}  // namespace

TEST_CASE("modular_inverse") {
  CHECK(modular_inverse(1, 7) == 1);
  CHECK(modular_inverse(17, 19) == 9);
  CHECK(*oracle::inverse_by_scan(17, 19) == 9);
  CHECK(error_of([] { modular_inverse(6, 9); }) == Errc::NotInvertible);
  CHECK(modular_inverse(-2, 7) == 3);  // -2 = 5 (mod 7), 5*3 = 15 = 1

  SUBCASE("agrees with the scan for every a below small moduli") {
    for (std::int64_t m = 2; m <= 60; ++m) {
      for (std::int64_t a = 0; a < m; ++a) {
        const auto expect = oracle::inverse_by_scan(static_cast<std::uint64_t>(a), static_cast<std::uint64_t>(m));
        if (expect) {
          CHECK(modular_inverse(a, m) == static_cast<std::int64_t>(*expect));
        } else {
          CHECK(error_of([&] { modular_inverse(a, m); }) == Errc::NotInvertible);
        }
      }
    }
  }
}

TEST_CASE("build_key") {
  const auto key = build_key(m1719);
  CHECK(key.product() == 323);
  REQUIRE(key.coefficients().size() == 2);
  CHECK(key.coefficients()[0] == 171);
  CHECK(key.coefficients()[1] == 153);

  const std::vector<std::uint32_t> m1617{16, 17};
  const auto k2 = build_key(m1617);
  CHECK(k2.product() == 272);
  CHECK(k2.coefficients()[0] % 16 == 1);
  CHECK(k2.coefficients()[0] % 17 == 0);
  CHECK(k2.coefficients()[1] % 17 == 1);
  CHECK(k2.coefficients()[1] % 16 == 0);

  const std::vector<std::uint32_t> bad{16, 18};
  CHECK(error_of([&] { build_key(bad); }) == Errc::InvalidModuli);
  const std::vector<std::uint32_t> small{15, 17};
  CHECK(error_of([&] { build_key(small); }) == Errc::InvalidModuli);
  CHECK(error_of([] { build_key({}); }) == Errc::InvalidModuli);

  SUBCASE("offending pair is named") {
    const std::vector<std::uint32_t> m{17, 21, 19, 35};
    try {
      build_key(m);
      FAIL("accepted non-coprime moduli");
    } catch (const Error& e) {
      CHECK(std::string(e.what()).find("n[2] = 21 and n[4] = 35") != std::string::npos);
    }
  }
}

TEST_CASE("coefficient identity holds for generated keys") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto key = generate_key(1 + seed % 12, seed);
    const auto n = key.moduli();
    std::set<std::uint32_t> distinct(n.begin(), n.end());
    CHECK(distinct.size() == n.size());
    for (std::size_t i = 0; i < n.size(); ++i) {
      for (std::size_t j = 0; j < n.size(); ++j) {
        CHECK(key.coefficients()[i] % n[j] == (i == j ? 1 : 0));
      }
    }
  }
  CHECK(generate_key(8, 5) == generate_key(8, 5));
  CHECK(error_of([] { generate_key(0, 1); }) == Errc::InvalidParameters);
  CHECK(error_of([] { generate_key(49, 1); }) == Errc::InvalidParameters);
}

TEST_CASE("split and reconstruct pixels") {
  CHECK(split_pixel(0) == HalfPixels{0, 0});
  CHECK(split_pixel(255) == HalfPixels{15, 15});
  CHECK(split_pixel(58) == HalfPixels{3, 10});
  CHECK(reconstruct_pixel(0, 0) == 0);
  CHECK(reconstruct_pixel(15, 15) == 255);
  CHECK(reconstruct_pixel(3, 10) == 58);
  for (int r = 0; r < 256; ++r) {
    const auto h = split_pixel(static_cast<std::uint8_t>(r));
    CHECK(reconstruct_pixel(h.quotient, h.remainder) == r);
  }
}

TEST_CASE("encode_block and decode_block") {
  const auto key = build_key(m1719);
  const std::vector<std::uint8_t> zeros{0, 0}, ones{1, 1}, a35{3, 5};
  CHECK(encode_block(zeros, key) == 0);
  CHECK(encode_block(ones, key) == 1);
  CHECK(*oracle::crt_by_scan(a35, m1719) == 309);
  CHECK(encode_block(a35, key) == 309);

  CHECK(decode_block(0, key) == std::vector<std::uint32_t>{0, 0});
  CHECK(decode_block(309, key) == std::vector<std::uint32_t>{3, 5});
  CHECK(error_of([&] { decode_block(323, key); }) == Errc::ValueOutOfRange);

  const std::vector<std::uint8_t> three{1, 2, 3};
  CHECK(error_of([&] { encode_block(three, key); }) == Errc::LengthMismatch);
  const std::vector<std::uint8_t> big{16, 0};
  CHECK(error_of([&] { encode_block(big, key); }) == Errc::ValueOutOfRange);
}

TEST_CASE("encode_block matches the congruence scan") {
  const std::vector<std::vector<std::uint32_t>> sets{{16, 17}, {17, 19, 23}, {16, 21, 23}, {29, 31, 37}};
  Rng rng(42);
  for (const auto& moduli : sets) {
    const auto key = build_key(moduli);
    const auto table = oracle::crt_scan_table(moduli);
    for (int t = 0; t < 200; ++t) {
      std::vector<std::uint8_t> a(moduli.size());
      for (auto& v : a) v = static_cast<std::uint8_t>(rng.below(16));
      const auto tr = encode_block(a, key);
      CHECK(tr < key.product());
      CHECK(tr == table.at(a));
      const auto back = decode_block(tr, key);
      CHECK(std::equal(back.begin(), back.end(), a.begin()));
    }
  }
}

TEST_CASE("build_code_table") {
  CHECK(build_code_table({}).table.empty());
  CHECK(build_code_table({}).codes.empty());

  const std::vector<BigUint> sevens{7, 7, 7};
  const auto t1 = build_code_table(sevens);
  CHECK(t1.table == std::vector<BigUint>{7});
  CHECK(t1.codes == std::vector<std::uint32_t>{0, 0, 0});

  const std::vector<BigUint> mixed{309, 5, 309, 309};
  const auto t2 = build_code_table(mixed);
  CHECK(t2.table == std::vector<BigUint>{309, 5});
  CHECK(t2.codes == std::vector<std::uint32_t>{0, 1, 0, 0});

  SUBCASE("ties go to the smaller value") {
    const std::vector<BigUint> v{9, 4, 9, 4, 1};
    const auto t = build_code_table(v);
    CHECK(t.table == std::vector<BigUint>{4, 9, 1});
  }

  SUBCASE("indexing reproduces the input") {
    Rng rng(3);
    std::vector<BigUint> v(500);
    for (auto& x : v) x = BigUint(rng.below(40)) << static_cast<unsigned>(rng.below(80));
    const auto t = build_code_table(v);
    REQUIRE(t.codes.size() == v.size());
    for (std::size_t j = 0; j < v.size(); ++j) CHECK(t.table[t.codes[j]] == v[j]);
  }
}

TEST_CASE("encode_image examples") {
  const auto key = build_key(m1719);

  const ImageGrid zero(2, 2, std::uint8_t{0});
  const auto p0 = encode_image(zero, key);
  CHECK(p0.block_count == 2);
  CHECK(p0.pad_length == 0);
  CHECK(p0.tr_table == std::vector<BigUint>{0});
  CHECK(p0.tr_prime_table == std::vector<BigUint>{0});
  CHECK(decode_image(p0, key) == zero);

  const ImageGrid c58(4, 4, std::uint8_t{58});
  const auto p58 = encode_image(c58, key);
  const std::vector<std::uint8_t> q{3, 3}, r{10, 10};
  REQUIRE(p58.tr_table.size() == 1);
  REQUIRE(p58.tr_prime_table.size() == 1);
  CHECK(p58.tr_table[0] == *oracle::crt_by_scan(q, m1719));
  CHECK(p58.tr_prime_table[0] == *oracle::crt_by_scan(r, m1719));
  CHECK(decode_image(p58, key) == c58);

  CHECK(error_of([&] { encode_image(ImageGrid{}, key); }) == Errc::EmptyImage);
}

TEST_CASE("odd pixel counts are padded with zero half-pixels") {
  const std::vector<std::uint32_t> m{17, 19, 23};
  const auto key = build_key(m);
  const ImageGrid img(5, 1, std::vector<std::uint8_t>{1, 2, 3, 4, 255});
  const auto p = encode_image(img, key);
  CHECK(p.block_count == 2);
  CHECK(p.pad_length == 1);
  CHECK(decode_image(p, key) == img);
}

TEST_CASE("decode_image rejects inconsistent payloads") {
  const auto key = build_key(m1719);
  const ImageGrid img(4, 4, std::vector<std::uint8_t>{0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15});
  const auto good = encode_image(img, key);

  auto bad_index = good;
  bad_index.tr_codes[0] = static_cast<std::uint32_t>(bad_index.tr_table.size());
  CHECK(error_of([&] { decode_image(bad_index, key); }) == Errc::CorruptPayload);

  auto too_big = good;
  too_big.tr_prime_table[0] = key.product();
  CHECK(error_of([&] { decode_image(too_big, key); }) == Errc::CorruptPayload);

  auto bad_dims = good;
  bad_dims.original_width = 5;
  CHECK(error_of([&] { decode_image(bad_dims, key); }) == Errc::CorruptPayload);

  auto residue = good;  // 16 = 16 (mod 17): not a half-pixel
  residue.tr_table[0] = *oracle::crt_by_scan(std::vector<std::uint8_t>{16, 0}, m1719);
  CHECK(error_of([&] { decode_image(residue, key); }) == Errc::CorruptPayload);

  const std::vector<std::uint32_t> three{17, 19, 23};
  CHECK(error_of([&] { decode_image(good, build_key(three)); }) == Errc::KeyMismatch);
}

TEST_CASE("lossless roundtrip over random images and keys") {
  Rng rng(7);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto w = static_cast<std::uint32_t>(1 + rng.below(40));
    const auto h = static_cast<std::uint32_t>(1 + rng.below(40));
    const auto kind = static_cast<ImageKind>(seed % 4);
    const auto img = synth_image(kind, w, h, seed);
    const auto key = generate_key(1 + rng.below(10), seed);
    const auto p = encode_image(img, key);
    CHECK(p == encode_image(img, key));
    CHECK(decode_image(p, key) == img);
  }
}
