#pragma once

#include <string>

#include "wbsn/pipeline.hpp"

namespace wbsn {

/// Encodes and encrypts one image with the bundle and reports Table II style
/// metrics. execution_time covers encode_image only.
MetricsRow benchmark_image(const std::string& label, const ImageGrid& img, const KeyBundle& keys);

/// Entropy-only row for an externally produced byte stream (e.g. an AES
/// ciphertext to compare against).
MetricsRow external_entropy_row(const std::string& label, std::span<const std::uint8_t> bytes);

std::string session_report_json(Scenario scenario, std::uint64_t seed, const SessionReport& report);
std::string session_report_csv(Scenario scenario, std::uint64_t seed, const SessionReport& report);

}  // namespace wbsn
