#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace wbsn {

/// Byte-level Shannon entropy in bits per byte, in [0, 8]. Throws Errc::EmptyInput.
double shannon_entropy(std::span<const std::uint8_t> bytes);

/// original / encoded, unclamped. Throws Errc::DivisionByZero for encoded == 0.
double compression_ratio(std::uint64_t original_bytes, std::uint64_t encoded_bytes);

// Proxy for energy: the arithmetic the sensor or sink actually performs.
struct OpCounts {
  std::uint64_t modular_multiplications = 0;
  std::uint64_t modular_reductions = 0;
  std::uint64_t table_lookups = 0;

  OpCounts& operator+=(const OpCounts& o) {
    modular_multiplications += o.modular_multiplications;
    modular_reductions += o.modular_reductions;
    table_lookups += o.table_lookups;
    return *this;
  }
  friend bool operator==(const OpCounts&, const OpCounts&) = default;
};

struct MetricsRow {
  std::string algorithm_label;
  double execution_time = 0.0;  // s, wall clock around the codec call
  std::optional<double> compression_ratio;              // payload without its fixed header
  std::optional<double> compression_ratio_with_header;  // whole serialized payload
  std::uint64_t bytes_original = 0;
  std::uint64_t bytes_encoded = 0;
  double payload_entropy = 0.0;        // bits/byte of the serialized plaintext payload
  double entropy_bits_per_byte = 0.0;  // bits/byte of the quasigroup ciphertext
  OpCounts op_counts;

  friend bool operator==(const MetricsRow&, const MetricsRow&) = default;
};

// Numbers are written in shortest round-trip form so parsing reproduces rows exactly.
std::string metrics_to_csv(std::span<const MetricsRow> rows);
std::vector<MetricsRow> metrics_from_csv(const std::string& csv);
std::string metrics_to_json(std::span<const MetricsRow> rows);
std::vector<MetricsRow> metrics_from_json(const std::string& json);

}  // namespace wbsn
