// Acceptance suite: one line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "wbsn/bench.hpp"
#include "wbsn/payload_format.hpp"
#include "wbsn/pipeline.hpp"
#include "wbsn/rng.hpp"
#include "wbsn/synth_image.hpp"

using namespace wbsn;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// 1. CRT roundtrip
Outcome crt_roundtrip() {
  const auto t0 = Clock::now();
  int total = 0, exact = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    Rng rng(seed);
    const auto w = static_cast<std::uint32_t>(1 + rng.below(64));
    const auto h = static_cast<std::uint32_t>(1 + rng.below(64));
    const auto img = synth_image(ImageKind::noise, w, h, seed);
    for (std::size_t k : {2, 4, 8}) {
      const auto key = crt::generate_key(k, seed * 31 + k);
      ++total;
      exact += crt::decode_image(crt::encode_image(img, key), key) == img;
    }
  }
  const double dt = seconds_since(t0);
  return {exact == total && dt < 30.0, fmt("%d/%d bit-exact, %.2f s (limit 30 s)", exact, total, dt)};
}

// 2. CRT oracle equivalence
Outcome crt_oracle() {
  const std::vector<std::uint32_t> pool{16, 17, 19, 21, 23};
  int sets = 0, checked = 0, mismatches = 0;
  Rng rng(2024);
  for (unsigned mask = 0; mask < (1u << pool.size()); ++mask) {
    std::vector<std::uint32_t> moduli;
    for (std::size_t i = 0; i < pool.size(); ++i)
      if (mask & (1u << i)) moduli.push_back(pool[i]);
    if (moduli.size() < 2 || oracle::product(moduli) > 1'000'000) continue;
    ++sets;
    const auto key = crt::build_key(moduli);
    const auto scan = oracle::crt_scan_table(moduli);
    for (int t = 0; t < 1000; ++t) {
      std::vector<std::uint8_t> a(moduli.size());
      for (auto& v : a) v = static_cast<std::uint8_t>(rng.below(16));
      ++checked;
      mismatches += crt::encode_block(a, key) != scan.at(a);
    }
  }
  return {mismatches == 0, fmt("%d moduli sets, %d blocks, %d mismatches", sets, checked, mismatches)};
}

// 3. Hamming example
Outcome hamming_example() {
  const auto d = ecg::hamming_distance(ecg::bits_from_text("0100101000"), ecg::bits_from_text("1011010101"));
  return {d == 9, fmt("distance %zu (expected 9)", d)};
}

// 4. HRV values
Outcome hrv_values() {
  auto measure = [](double bpm) {
    const auto peaks = ecg::detect_r_peaks(ecg::synth_ecg({.bpm = bpm, .duration = 10}));
    const auto sig = ecg::hrv_from_peaks(peaks);
    const auto t = peaks.times();
    const double rr = (t.back() - t.front()) / static_cast<double>(t.size() - 1);
    double hrv = 0;
    for (double h : sig.hrv_values) hrv += h;
    return std::tuple{rr, hrv / static_cast<double>(sig.hrv_values.size()), sig};
  };
  const auto [rr72, hrv72, sig72] = measure(72);
  const auto [rr60, hrv60, sig60] = measure(60);
  const double diff = ecg::authenticate(sig72, sig60).mean_hrv_difference;
  const bool ok = rr72 >= 0.82 && rr72 <= 0.85 && hrv72 >= 1.18 && hrv72 <= 1.22 && rr60 >= 0.98 && rr60 <= 1.02 &&
                  hrv60 >= 0.98 && hrv60 <= 1.02 && diff >= 0.17 && diff <= 0.21;
  return {ok, fmt("72 bpm RR %.4f s HRV %.4f; 60 bpm RR %.4f s HRV %.4f; difference %.4f", rr72, hrv72, rr60, hrv60, diff)};
}

// 5. Authentication outcomes
Outcome auth_outcomes() {
  int accepted = 0, rejected = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    accepted += simulate_session(Scenario::same_subject, seed).verdict.accepted;
    const auto r = simulate_session(Scenario::intruder, seed);
    rejected += !r.verdict.accepted && r.verdict.threshold_used == 0.1;
  }
  return {accepted >= 99 && rejected == 100,
          fmt("same_subject accepted %d/100 (need >= 99), intruder rejected %d/100 (need 100)", accepted, rejected)};
}

// 6. Quasigroup roundtrip
Outcome quasigroup_roundtrip() {
  Rng rng(6);
  int runs = 0, exact = 0;
  for (std::size_t order : {2, 4, 16, 256}) {
    for (int key = 0; key < 50; ++key) {
      const auto q = quasi::generate_quasigroup(order, rng.next());
      std::vector<quasi::Symbol> m(10000);
      for (auto& s : m) s = static_cast<quasi::Symbol>(rng.below(order));
      const std::size_t block = 1 + rng.below(128);
      runs += 2;
      exact += quasi::decrypt_chain(q, quasi::encrypt_chain(q, m)) == m;
      exact += quasi::decrypt_blocks(q, quasi::encrypt_blocks(q, m, block), block) == m;
    }
  }
  return {exact == runs, fmt("%d/%d exact (orders 2,4,16,256; chain and block; 50 keys each)", exact, runs)};
}

// 7. Error locality
Outcome error_locality() {
  Rng rng(7);
  int block_ok = 0, chain_ok = 0;
  std::size_t worst_block = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto q = quasi::generate_quasigroup(256, rng.next());
    std::vector<quasi::Symbol> m(2048);
    for (auto& s : m) s = static_cast<quasi::Symbol>(rng.below(256));
    const auto at = rng.below(m.size());
    const auto flip = static_cast<quasi::Symbol>(1 + rng.below(255));

    auto cb = quasi::encrypt_blocks(q, m, 16);
    cb[at] ^= flip;
    const auto db = quasi::decrypt_blocks(q, cb, 16);
    std::size_t changed = 0;
    bool outside = false;
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (db[i] != m[i]) {
        ++changed;
        outside |= i / 16 != at / 16;
      }
    }
    worst_block = std::max(worst_block, changed);
    block_ok += changed <= 16 && !outside;

    auto cc = quasi::encrypt_chain(q, m);
    cc[at] ^= flip;
    const auto dc = quasi::decrypt_chain(q, cc);
    std::size_t first = m.size();
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (dc[i] != m[i]) {
        first = i;
        break;
      }
    }
    chain_ok += first <= at;
  }
  return {block_ok == 100 && chain_ok == 100,
          fmt("block B=16: %d/100 within block (max %zu changed); chain: %d/100 first change <= index", block_ok,
              worst_block, chain_ok)};
}

// 8. Entropy property
Outcome entropy_property() {
  const auto img = synth_image(ImageKind::blocks, 512, 512, 8);
  int ok = 0;
  double worst = 1e9;
  std::size_t smallest = SIZE_MAX;
  for (std::uint64_t key = 0; key < 20; ++key) {
    const auto keys = make_key_bundle(4, 256, 800 + key);
    const auto plain = serialize_payload(crt::encode_image(img, keys.crt));
    const auto cipher = encrypt_bytes(keys, plain);
    const double margin = shannon_entropy(cipher) - (shannon_entropy(plain) - 0.05);
    worst = std::min(worst, margin);
    smallest = std::min(smallest, plain.size());
    ok += plain.size() >= 65536 && margin >= 0;
  }
  return {ok == 20, fmt("%d/20 keys; payloads >= %zu bytes; worst margin over (plain - 0.05) = %.4f bits/byte", ok,
                        smallest, worst)};
}

// 9. Compression behaviour
Outcome compression_behavior() {
  const auto keys = make_key_bundle(kDefaultBlockLength, 256, 9);
  const auto blocks = benchmark_image("blocks", synth_image(ImageKind::blocks, 128, 128, 9), keys);
  const auto noise = benchmark_image("noise", synth_image(ImageKind::noise, 128, 128, 9), keys);
  const double b = *blocks.compression_ratio, n = *noise.compression_ratio;
  return {b >= 2.0 && n <= 1.1, fmt("blocks 128x128 ratio %.4f (need >= 2.0), noise ratio %.4f (need <= 1.1)", b, n)};
}

// 10. Serialization
Outcome serialization() {
  const auto sig = ecg::hrv_from_peaks(ecg::detect_r_peaks(ecg::synth_ecg({.bpm = 72})));
  int payload_ok = 0, container_ok = 0;
  std::size_t truncations = 0, rejected = 0;
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    Rng rng(seed);
    const auto kind = static_cast<ImageKind>(rng.below(4));
    const auto w = static_cast<std::uint32_t>(1 + rng.below(32));
    const auto h = static_cast<std::uint32_t>(1 + rng.below(32));
    const auto keys = make_key_bundle(1 + rng.below(10), 256, seed);
    const auto p = crt::encode_image(synth_image(kind, w, h, seed), keys.crt);
    const auto bytes = serialize_payload(p);
    payload_ok += parse_payload(bytes) == p && serialize_payload(parse_payload(bytes)) == bytes;

    DataMessage msg{keys.key_id, encrypt_bytes(keys, bytes), AuthBlock{static_cast<std::uint16_t>(seed), seed * 1000, sig.bits}};
    const auto wire = serialize_message(msg);
    container_ok += parse_message(wire) == msg && serialize_message(parse_message(wire)) == wire;

    for (std::size_t n = 0; n < wire.size(); ++n) {
      ++truncations;
      try {
        parse_message(std::span(wire).first(n));
      } catch (const Error&) {
        ++rejected;
      }
    }
  }
  return {payload_ok == 500 && container_ok == 500 && rejected == truncations,
          fmt("payload %d/500, container %d/500 identical; %zu/%zu truncations rejected", payload_ok, container_ok,
              rejected, truncations)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"CRT roundtrip", crt_roundtrip},
      {"CRT oracle equivalence", crt_oracle},
      {"Hamming example", hamming_example},
      {"HRV values", hrv_values},
      {"Authentication outcomes", auth_outcomes},
      {"Quasigroup roundtrip", quasigroup_roundtrip},
      {"Error locality", error_locality},
      {"Entropy property", entropy_property},
      {"Compression behavior", compression_behavior},
      {"Serialization", serialization},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("%s [%zu] %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
