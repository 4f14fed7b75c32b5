#include <doctest.h>

#include "wbsn/payload_format.hpp"
#include "wbsn/pipeline.hpp"
#include "wbsn/rng.hpp"
#include "wbsn/synth_image.hpp"

using namespace wbsn;

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

ecg::EcgTrace subject(double bpm, std::uint64_t seed) {
  return ecg::synth_ecg({.bpm = bpm, .noise_amplitude = kSensorNoise, .seed = seed});
}

}  // namespace

TEST_CASE("key bundle file roundtrip") {
  const auto keys = make_key_bundle(8, 256, 17, quasi::CipherMode::block(32));
  const auto text = format_key_bundle(keys);
  CHECK(text.rfind("WBSN-KEY v1\n", 0) == 0);
  CHECK(text.find("qg_seed=") != std::string::npos);
  const auto back = parse_key_bundle(text);
  CHECK(back.crt == keys.crt);
  CHECK(back.qg == keys.qg);
  CHECK(back.mode == keys.mode);
  CHECK(back.key_id == keys.key_id);
  CHECK(back.qg_seed == keys.qg_seed);

  SUBCASE("explicit table form") {
    auto explicit_keys = make_key_bundle(4, 16, 3);
    explicit_keys.qg_seed.reset();
    const auto t = format_key_bundle(explicit_keys);
    CHECK(t.find("qg_table=") != std::string::npos);
    CHECK(parse_key_bundle(t).qg == explicit_keys.qg);
  }

  SUBCASE("hand-written file") {
    const auto k = parse_key_bundle(
        "WBSN-KEY v1\nkey_id=0000002a\nk=2\nmoduli=17,19\nqg_order=2\nqg_table=0,1,1,0\nleader=0\nmode=chain\n");
    CHECK(k.key_id == 42);
    CHECK(k.crt.product() == 323);
    CHECK(k.qg.op(1, 1) == 0);
  }

  SUBCASE("malformed files") {
    const std::string good = format_key_bundle(keys);
    auto without = [&](const std::string& field) {
      const auto at = good.find(field + "=");
      return good.substr(0, at) + good.substr(good.find('\n', at) + 1);
    };
    CHECK(error_of([&] { parse_key_bundle("WBSN-KEY v2\n"); }) == Errc::BadFile);
    CHECK(error_of([&] { parse_key_bundle(without("moduli")); }) == Errc::BadFile);
    CHECK(error_of([&] { parse_key_bundle(good + "colour=blue\n"); }) == Errc::BadFile);
    CHECK(error_of([&] { parse_key_bundle(good + "k=8\n"); }) == Errc::BadFile);
    CHECK(error_of([&] {
      parse_key_bundle("WBSN-KEY v1\nkey_id=1\nk=2\nmoduli=16,18\nqg_order=2\nqg_seed=1\nleader=0\nmode=chain\n");
    }) == Errc::InvalidModuli);
    CHECK(error_of([&] {
      parse_key_bundle("WBSN-KEY v1\nkey_id=1\nk=3\nmoduli=17,19\nqg_order=2\nqg_seed=1\nleader=0\nmode=chain\n");
    }) == Errc::BadFile);
    CHECK(error_of([&] {
      parse_key_bundle("WBSN-KEY v1\nkey_id=1\nk=2\nmoduli=17,19\nqg_order=2\nqg_table=0,1,0,1\nleader=0\nmode=chain\n");
    }) == Errc::InvalidLatinSquare);
  }
}

TEST_CASE("byte cipher over every byte-compatible order") {
  Rng rng(2);
  Bytes data(3000);
  for (auto& b : data) b = static_cast<std::uint8_t>(rng.below(256));
  for (std::size_t order : {2, 4, 16, 256}) {
    for (auto mode : {quasi::CipherMode::chain(), quasi::CipherMode::block(16)}) {
      const auto keys = make_key_bundle(4, order, order, mode);
      const auto c = encrypt_bytes(keys, data);
      CHECK(c.size() == data.size());
      CHECK(c != data);
      CHECK(decrypt_bytes(keys, c) == data);
    }
  }
  const auto odd = make_key_bundle(4, 8, 1);
  CHECK(error_of([&] { encrypt_bytes(odd, data); }) == Errc::UnsupportedOrder);
}

TEST_CASE("container serialization") {
  DataMessage msg;
  msg.key_id = 0xDEADBEEF;
  msg.encrypted_body = {1, 2, 3};
  msg.auth = AuthBlock{7, 1234567890123ULL, ecg::bits_from_text("1011001")};
  const auto bytes = serialize_message(msg);
  const Bytes expect{'W', 'B', 'S', 'N', 0x01, 0xDE, 0xAD, 0xBE, 0xEF, 0, 0, 0, 3, 1, 2, 3,
                     0x00, 0x07, 0x00, 0x00, 0x01, 0x1F, 0x71, 0xFB, 0x04, 0xCB, 0, 0, 0, 7, 0xB2};
  CHECK(bytes == expect);
  CHECK(parse_message(bytes) == msg);

  for (std::size_t n = 0; n < bytes.size(); ++n) {
    CHECK(error_of([&] { parse_message(std::span(bytes).first(n)); }) == Errc::Truncated);
  }
  auto bad_magic = bytes;
  bad_magic[3] = 'X';
  CHECK(error_of([&] { parse_message(bad_magic); }) == Errc::BadMagic);
  auto bad_version = bytes;
  bad_version[4] = 0;
  CHECK(error_of([&] { parse_message(bad_version); }) == Errc::BadVersion);
  auto pad = bytes;
  pad.back() |= 1;
  CHECK(error_of([&] { parse_message(pad); }) == Errc::InconsistentCounts);
  auto extra = bytes;
  extra.push_back(9);
  CHECK(error_of([&] { parse_message(extra); }) == Errc::InconsistentCounts);
}

TEST_CASE("seal and open") {
  const auto keys = make_key_bundle(8, 256, 99);
  KeyRing ring;
  ring.add(keys);
  const auto img = synth_image(ImageKind::blocks, 48, 40, 5);

  const auto msg = seal(img, subject(72, 1), keys, SealOptions{.sensor_id = 3, .capture_timestamp_us = 77});
  CHECK(msg.key_id == keys.key_id);
  CHECK(msg.auth.sensor_id == 3);
  CHECK(msg.encrypted_body.size() == serialize_payload(crt::encode_image(img, keys.crt)).size());
  CHECK(msg.encrypted_body != serialize_payload(crt::encode_image(img, keys.crt)));
  CHECK(parse_message(serialize_message(msg)) == msg);

  const auto ok = open(msg, subject(72, 2), ring, OpenOptions{.original = &img});
  CHECK(ok.verdict.accepted);
  CHECK_FALSE(ok.alarm);
  CHECK(ok.image_recovered);
  REQUIRE(ok.image);
  CHECK(*ok.image == img);
  CHECK(ok.bytes_original == img.size());
  CHECK(ok.compression_ratio == compression_ratio(ok.bytes_original, ok.bytes_encoded));
  CHECK(ok.ciphertext_entropy > 0);

  const auto intruder = open(msg, subject(60, 2), ring);
  CHECK_FALSE(intruder.verdict.accepted);
  CHECK(intruder.alarm);
  CHECK_FALSE(intruder.image);
  CHECK(intruder.verdict.mean_hrv_difference >= 0.17);
  CHECK(intruder.verdict.mean_hrv_difference <= 0.21);

  CHECK(error_of([&] { seal(ImageGrid{}, subject(72, 1), keys); }) == Errc::EmptyImage);

  KeyRing other;
  other.add(make_key_bundle(8, 256, 100));
  CHECK(error_of([&] { open(msg, subject(72, 2), other); }) == Errc::UnknownKeyId);
}

TEST_CASE("wrong quasigroup key fails the inner magic") {
  const auto img = synth_image(ImageKind::gradient, 16, 16, 1);
  int bad_magic = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto keys = make_key_bundle(4, 256, seed);
    auto wrong = make_key_bundle(4, 256, seed + 1000);
    wrong.crt = keys.crt;
    wrong.key_id = keys.key_id;
    KeyRing ring;
    ring.add(wrong);
    const auto msg = seal(img, subject(72, 1), keys);
    try {
      open(msg, subject(72, 2), ring);
    } catch (const Error& e) {
      bad_magic += e.code() == Errc::BadMagic;
    }
  }
  CHECK(bad_magic == 50);
}

TEST_CASE("no single-byte corruption yields a silently different image") {
  const auto keys = make_key_bundle(4, 256, 8);
  KeyRing ring;
  ring.add(keys);
  const auto img = synth_image(ImageKind::blocks, 16, 16, 8);
  const auto node = subject(72, 1);
  const auto sink = subject(72, 2);
  const auto msg = seal(img, node, keys);
  for (std::size_t at = 0; at < msg.encrypted_body.size(); ++at) {
    auto bad = msg;
    bad.encrypted_body[at] ^= 0x5A;
    try {
      const auto r = open(bad, sink, ring, OpenOptions{.original = &img});
      CHECK_FALSE(r.image_recovered);
    } catch (const Error&) {
    }
  }
}

TEST_CASE("simulate_session scenarios") {
  const auto same = simulate_session(Scenario::same_subject, 4);
  CHECK(same.verdict.accepted);
  CHECK(same.image_recovered);
  CHECK(same.op_counts.modular_multiplications > 0);
  CHECK(same.op_counts.table_lookups > 0);
  CHECK(same.compression_ratio == compression_ratio(same.bytes_original, same.bytes_encoded));

  const auto intruder = simulate_session(Scenario::intruder, 4);
  CHECK(intruder.alarm);
  CHECK(intruder.verdict.mean_hrv_difference >= 0.17);
  CHECK(intruder.verdict.mean_hrv_difference <= 0.21);

  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto tamper = simulate_session(Scenario::tamper, seed);
    CHECK(tamper.verdict.accepted);
    CHECK_FALSE(tamper.image_recovered);
    CHECK_FALSE(tamper.integrity_error.empty());
  }
  CHECK(parse_scenario("intruder") == Scenario::intruder);
  CHECK(scenario_name(Scenario::tamper) == "tamper");
  CHECK(error_of([] { parse_scenario("replay"); }) == Errc::InvalidParameters);
}
