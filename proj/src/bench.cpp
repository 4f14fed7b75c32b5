#include "wbsn/bench.hpp"

#include <chrono>
#include <sstream>

#include <json.hpp>

#include "wbsn/payload_format.hpp"

namespace wbsn {

MetricsRow benchmark_image(const std::string& label, const ImageGrid& img, const KeyBundle& keys) {
  const auto start = std::chrono::steady_clock::now();
  const auto payload = crt::encode_image(img, keys.crt);
  const auto stop = std::chrono::steady_clock::now();

  const auto plain = serialize_payload(payload);
  const auto cipher = encrypt_bytes(keys, plain);

  MetricsRow row;
  row.algorithm_label = label;
  row.execution_time = std::chrono::duration<double>(stop - start).count();
  row.bytes_original = img.size();
  row.bytes_encoded = plain.size();
  row.compression_ratio = compression_ratio(img.size(), plain.size() - kPayloadHeaderSize);
  row.compression_ratio_with_header = compression_ratio(img.size(), plain.size());
  row.payload_entropy = shannon_entropy(plain);
  row.entropy_bits_per_byte = shannon_entropy(cipher);
  row.op_counts = encode_op_counts(payload);
  row.op_counts.table_lookups += cipher.size() * 8 / std::bit_width(keys.qg.order() - 1);
  return row;
}

MetricsRow external_entropy_row(const std::string& label, std::span<const std::uint8_t> bytes) {
  MetricsRow row;
  row.algorithm_label = label;
  row.bytes_encoded = bytes.size();
  row.payload_entropy = shannon_entropy(bytes);
  row.entropy_bits_per_byte = row.payload_entropy;
  return row;
}

namespace {

nlohmann::json report_json(Scenario scenario, std::uint64_t seed, const SessionReport& r) {
  return {
      {"scenario", scenario_name(scenario)},
      {"seed", seed},
      {"accepted", r.verdict.accepted},
      {"alarm", r.alarm},
      {"mean_hrv_difference", r.verdict.mean_hrv_difference},
      {"hamming_distance", r.verdict.hamming_distance},
      {"threshold", r.verdict.threshold_used},
      {"compared_intervals", r.verdict.compared_intervals},
      {"unpaired_intervals", r.verdict.unpaired_intervals},
      {"image_recovered", r.image_recovered},
      {"integrity_error", r.integrity_error},
      {"bytes_original", r.bytes_original},
      {"bytes_encoded", r.bytes_encoded},
      {"compression_ratio", r.compression_ratio},
      {"compression_ratio_without_header", r.compression_ratio_without_header},
      {"ciphertext_entropy", r.ciphertext_entropy},
      {"modular_multiplications", r.op_counts.modular_multiplications},
      {"modular_reductions", r.op_counts.modular_reductions},
      {"table_lookups", r.op_counts.table_lookups},
  };
}

}  // namespace

std::string session_report_json(Scenario scenario, std::uint64_t seed, const SessionReport& report) {
  return report_json(scenario, seed, report).dump(2) + "\n";
}

std::string session_report_csv(Scenario scenario, std::uint64_t seed, const SessionReport& report) {
  // nlohmann::json keeps keys sorted, which gives a stable column order.
  const auto j = report_json(scenario, seed, report);
  std::ostringstream head, row;
  bool first = true;
  for (const auto& [key, value] : j.items()) {
    head << (first ? "" : ",") << key;
    row << (first ? "" : ",");
    if (value.is_string()) {
      auto s = value.get<std::string>();
      if (s.find_first_of(",\"\n") != std::string::npos) {
        std::string q = "\"";
        for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
        s = q + "\"";
      }
      row << s;
    } else {
      row << value.dump();
    }
    first = false;
  }
  return head.str() + "\n" + row.str() + "\n";
}

}  // namespace wbsn
