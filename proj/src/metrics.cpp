#include "wbsn/metrics.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "wbsn/error.hpp"

namespace wbsn {

double shannon_entropy(std::span<const std::uint8_t> bytes) {
  if (bytes.empty()) throw Error(Errc::EmptyInput, "entropy of an empty byte sequence");
  std::array<std::size_t, 256> freq{};
  for (auto b : bytes) ++freq[b];
  const auto n = static_cast<double>(bytes.size());
  double h = 0.0;
  for (auto count : freq) {
    if (count == 0) continue;
    const double p = static_cast<double>(count) / n;
    h -= p * std::log2(p);
  }
  return h;
}

double compression_ratio(std::uint64_t original_bytes, std::uint64_t encoded_bytes) {
  if (encoded_bytes == 0) throw Error(Errc::DivisionByZero, "encoded size is zero");
  return static_cast<double>(original_bytes) / static_cast<double>(encoded_bytes);
}

namespace {

constexpr const char* kColumns[] = {"algorithm_label",  "execution_time",   "compression_ratio",
                                    "compression_ratio_with_header", "bytes_original", "bytes_encoded",
                                    "payload_entropy",  "entropy_bits_per_byte", "modular_multiplications",
                                    "modular_reductions", "table_lookups"};

std::string num(double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

std::string quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::string> split_csv_line(std::istream& in, bool& ok) {
  std::vector<std::string> cells(1);
  bool quoted = false;
  ok = false;
  char c;
  while (in.get(c)) {
    ok = true;
    if (quoted) {
      if (c == '"') {
        if (in.peek() == '"') {
          cells.back() += '"';
          in.get();
        } else {
          quoted = false;
        }
      } else {
        cells.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      cells.emplace_back();
    } else if (c == '\n') {
      break;
    } else if (c != '\r') {
      cells.back() += c;
    }
  }
  return cells;
}

double to_double(const std::string& s) {
  double v = 0;
  auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || end != s.data() + s.size()) throw Error(Errc::BadFile, "CSV: bad number '" + s + "'");
  return v;
}

std::uint64_t to_u64(const std::string& s) {
  std::uint64_t v = 0;
  auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || end != s.data() + s.size()) throw Error(Errc::BadFile, "CSV: bad count '" + s + "'");
  return v;
}

}  // namespace

std::string metrics_to_csv(std::span<const MetricsRow> rows) {
  std::ostringstream out;
  for (std::size_t i = 0; i < std::size(kColumns); ++i) out << (i ? "," : "") << kColumns[i];
  out << "\n";
  for (const auto& r : rows) {
    out << quote(r.algorithm_label) << ',' << num(r.execution_time) << ','
        << (r.compression_ratio ? num(*r.compression_ratio) : "") << ','
        << (r.compression_ratio_with_header ? num(*r.compression_ratio_with_header) : "") << ','
        << r.bytes_original << ',' << r.bytes_encoded << ',' << num(r.payload_entropy) << ','
        << num(r.entropy_bits_per_byte) << ',' << r.op_counts.modular_multiplications << ','
        << r.op_counts.modular_reductions << ',' << r.op_counts.table_lookups << "\n";
  }
  return out.str();
}

std::vector<MetricsRow> metrics_from_csv(const std::string& csv) {
  std::istringstream in(csv);
  bool ok = false;
  const auto header = split_csv_line(in, ok);
  if (!ok || header.size() != std::size(kColumns)) throw Error(Errc::BadFile, "CSV: unexpected header");
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] != kColumns[i]) throw Error(Errc::BadFile, "CSV: column " + std::to_string(i) + " is " + header[i]);
  }
  std::vector<MetricsRow> rows;
  for (;;) {
    auto cells = split_csv_line(in, ok);
    if (!ok) break;
    if (cells.size() == 1 && cells[0].empty()) continue;
    if (cells.size() != std::size(kColumns)) throw Error(Errc::BadFile, "CSV: row has " + std::to_string(cells.size()) + " cells");
    MetricsRow r;
    r.algorithm_label = cells[0];
    r.execution_time = to_double(cells[1]);
    if (!cells[2].empty()) r.compression_ratio = to_double(cells[2]);
    if (!cells[3].empty()) r.compression_ratio_with_header = to_double(cells[3]);
    r.bytes_original = to_u64(cells[4]);
    r.bytes_encoded = to_u64(cells[5]);
    r.payload_entropy = to_double(cells[6]);
    r.entropy_bits_per_byte = to_double(cells[7]);
    r.op_counts.modular_multiplications = to_u64(cells[8]);
    r.op_counts.modular_reductions = to_u64(cells[9]);
    r.op_counts.table_lookups = to_u64(cells[10]);
    rows.push_back(std::move(r));
  }
  return rows;
}

std::string metrics_to_json(std::span<const MetricsRow> rows) {
  auto arr = nlohmann::json::array();
  for (const auto& r : rows) {
    nlohmann::json j = {
        {"algorithm_label", r.algorithm_label},
        {"execution_time", r.execution_time},
        {"compression_ratio", r.compression_ratio ? nlohmann::json(*r.compression_ratio) : nlohmann::json(nullptr)},
        {"compression_ratio_with_header",
         r.compression_ratio_with_header ? nlohmann::json(*r.compression_ratio_with_header) : nlohmann::json(nullptr)},
        {"bytes_original", r.bytes_original},
        {"bytes_encoded", r.bytes_encoded},
        {"payload_entropy", r.payload_entropy},
        {"entropy_bits_per_byte", r.entropy_bits_per_byte},
        {"op_counts",
         {{"modular_multiplications", r.op_counts.modular_multiplications},
          {"modular_reductions", r.op_counts.modular_reductions},
          {"table_lookups", r.op_counts.table_lookups}}},
    };
    arr.push_back(std::move(j));
  }
  return arr.dump(2) + "\n";
}

std::vector<MetricsRow> metrics_from_json(const std::string& text) {
  std::vector<MetricsRow> rows;
  try {
    for (const auto& j : nlohmann::json::parse(text)) {
      MetricsRow r;
      r.algorithm_label = j.at("algorithm_label").get<std::string>();
      r.execution_time = j.at("execution_time").get<double>();
      if (!j.at("compression_ratio").is_null()) r.compression_ratio = j.at("compression_ratio").get<double>();
      if (!j.at("compression_ratio_with_header").is_null()) {
        r.compression_ratio_with_header = j.at("compression_ratio_with_header").get<double>();
      }
      r.bytes_original = j.at("bytes_original").get<std::uint64_t>();
      r.bytes_encoded = j.at("bytes_encoded").get<std::uint64_t>();
      r.payload_entropy = j.at("payload_entropy").get<double>();
      r.entropy_bits_per_byte = j.at("entropy_bits_per_byte").get<double>();
      const auto& ops = j.at("op_counts");
      r.op_counts.modular_multiplications = ops.at("modular_multiplications").get<std::uint64_t>();
      r.op_counts.modular_reductions = ops.at("modular_reductions").get<std::uint64_t>();
      r.op_counts.table_lookups = ops.at("table_lookups").get<std::uint64_t>();
      rows.push_back(std::move(r));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::BadFile, std::string("JSON: ") + e.what());
  }
  return rows;
}

}  // namespace wbsn
