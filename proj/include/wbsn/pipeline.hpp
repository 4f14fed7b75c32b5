#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>

#include "wbsn/bytes.hpp"
#include "wbsn/crt_codec.hpp"
#include "wbsn/ecg_auth.hpp"
#include "wbsn/metrics.hpp"
#include "wbsn/quasigroup.hpp"

namespace wbsn {

/// Pre-shared key material of one sensor: CRT moduli (first level),
/// quasigroup and its mode (second level), and the identifier the sink
/// looks it up by. qg_seed is kept when the quasigroup was generated so the
/// key file can store the seed instead of the full table.
struct KeyBundle {
  crt::CrtKeySet crt;
  quasi::Quasigroup qg;
  quasi::CipherMode mode;
  std::uint32_t key_id = 0;
  std::optional<std::uint32_t> qg_seed;
};

inline constexpr std::size_t kDefaultBlockLength = 8;  // CRT k
inline constexpr std::size_t kDefaultOrder = 256;

/// Derives every component of a bundle from one seed.
KeyBundle make_key_bundle(std::size_t k, std::size_t order, std::uint64_t seed,
                          quasi::CipherMode mode = quasi::CipherMode::chain());

// Line-oriented text:
//   WBSN-KEY v1
//   key_id=<hex32>  k=<int>  moduli=<a,b,...>  qg_order=<int>
//   qg_seed=<hex32> | qg_table=<row-major list>  leader=<int>  mode=chain|block:<B>
std::string format_key_bundle(const KeyBundle& keys);
/// Throws Errc::BadFile for malformed text; component validation errors propagate.
KeyBundle parse_key_bundle(const std::string& text);
KeyBundle read_key_bundle(const std::filesystem::path& path);
void write_key_bundle(const std::filesystem::path& path, const KeyBundle& keys);

class KeyRing {
 public:
  void add(KeyBundle keys);
  /// Throws Errc::UnknownKeyId.
  const KeyBundle& find(std::uint32_t key_id) const;

 private:
  std::map<std::uint32_t, KeyBundle> bundles_;
};

// Byte-oriented cipher over the bundle's quasigroup. Orders 2, 4, 16 and 256
// split each byte into 8, 4, 2 or 1 symbols (most significant first) and
// pack the result back, so the ciphertext is as long as the plaintext.
Bytes encrypt_bytes(const KeyBundle& keys, std::span<const std::uint8_t> plain);
Bytes decrypt_bytes(const KeyBundle& keys, std::span<const std::uint8_t> cipher);

struct AuthBlock {
  std::uint16_t sensor_id = 0;
  std::uint64_t capture_timestamp_us = 0;
  ecg::BitString signature;
  friend bool operator==(const AuthBlock&, const AuthBlock&) = default;
};

struct DataMessage {
  std::uint32_t key_id = 0;
  Bytes encrypted_body;
  AuthBlock auth;
  friend bool operator==(const DataMessage&, const DataMessage&) = default;
};

// "WBSN" | 0x01 | key_id:u32 | payload_length:u32 | body
//   | sensor_id:u16 | timestamp_us:u64 | signature_bits:u32 | signature bytes
inline constexpr std::uint8_t kContainerMagic[4] = {'W', 'B', 'S', 'N'};
inline constexpr std::uint8_t kContainerVersion = 0x01;
inline constexpr std::size_t kContainerHeaderSize = 13;

Bytes serialize_message(const DataMessage& msg);
/// Throws Errc::BadMagic, Errc::BadVersion, Errc::Truncated or Errc::InconsistentCounts.
DataMessage parse_message(std::span<const std::uint8_t> bytes);

struct SealOptions {
  std::uint16_t sensor_id = 1;
  std::uint64_t capture_timestamp_us = 0;
};

/// Node side: compress, serialize, encrypt, and attach the HRV signature of
/// the node's own ECG.
DataMessage seal(const ImageGrid& img, const ecg::EcgTrace& ecg, const KeyBundle& keys, SealOptions options = {});

struct OpenOptions {
  double threshold = ecg::kDefaultThreshold;
  ecg::DecisionStatistic statistic = ecg::DecisionStatistic::mean_hrv_difference;
  const ImageGrid* original = nullptr;  // simulation only: enables the bit-exact check
};

struct SessionReport {
  ecg::AuthVerdict verdict;
  bool alarm = false;            // authentication failed; body left encrypted
  bool image_recovered = false;  // decoded, and equal to the original when one was given
  std::string integrity_error;   // why recovery failed after authentication passed
  std::optional<ImageGrid> image;
  std::uint64_t bytes_original = 0;
  std::uint64_t bytes_encoded = 0;                // serialized payload
  double compression_ratio = 0.0;                 // bytes_original / bytes_encoded
  double compression_ratio_without_header = 0.0;  // payload minus its fixed header
  double ciphertext_entropy = 0.0;
  OpCounts op_counts;
};

/// Sink side. Authenticates first; an alarm leaves the body untouched.
/// Otherwise decrypts, parses and decodes. Throws Errc::UnknownKeyId, and
/// any parse/decode error (Errc::BadMagic signals a wrong quasigroup key or
/// a corrupted body).
SessionReport open(const DataMessage& msg, const ecg::EcgTrace& sink_ecg, const KeyRing& keys, OpenOptions options = {});

enum class Scenario { same_subject, intruder, tamper };
Scenario parse_scenario(const std::string& name);
std::string scenario_name(Scenario s);

inline constexpr double kSubjectBpm = 72.0;
inline constexpr double kIntruderBpm = 60.0;
inline constexpr double kSensorNoise = 0.05;  // mV

/// Two sensors (node and sink-side) on one 72 bpm subject with independent
/// noise; intruder moves the sink-side sensor to a 60 bpm subject; tamper
/// flips one ciphertext byte of a same-subject message. Decode failures after
/// authentication are reported through integrity_error rather than thrown.
/// op_counts cover both the node and the sink.
SessionReport simulate_session(Scenario scenario, std::uint64_t seed);

/// Encode-side arithmetic for a payload: k multiplications per block and
/// stream, one reduction per block and stream.
OpCounts encode_op_counts(const crt::NticePayload& p);

}  // namespace wbsn
