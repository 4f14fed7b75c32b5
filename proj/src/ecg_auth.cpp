#include "wbsn/ecg_auth.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "wbsn/error.hpp"
#include "wbsn/rng.hpp"

namespace wbsn::ecg {

namespace {

struct Bump {
  double offset;  // s, relative to the R instant
  double amplitude;  // mV
  double sigma;  // s
};

// Gaussian widths are a sixth of each wave's duration so that +-3 sigma spans it.
constexpr double kPWidth = 0.09;
constexpr double kTWidth = 0.16;
constexpr double kQOffset = -kQrsWidth / 2;
constexpr double kTOffset = kQOffset + kQtInterval - kTWidth / 2;

constexpr Bump kBeat[] = {
    {-kPrInterval, 0.15, kPWidth / 6},
    {kQOffset, -0.12, kQrsWidth / 10},
    {0.0, kRAmplitude, kQrsWidth / 8},
    {-kQOffset, -0.25, kQrsWidth / 10},
    {kTOffset, 0.30, kTWidth / 6},
};

void check_params(const SynthParams& p) {
  const bool ok = p.bpm >= 30.0 && p.bpm <= 220.0 && p.duration > 0.0 && p.sample_rate > 0.0 &&
                  p.noise_amplitude >= 0.0 && std::isfinite(p.duration) && std::isfinite(p.sample_rate) &&
                  std::isfinite(p.noise_amplitude);
  if (!ok) {
    std::ostringstream msg;
    msg << "bpm=" << p.bpm << " duration=" << p.duration << " rate=" << p.sample_rate
        << " noise=" << p.noise_amplitude << " (need 30<=bpm<=220, duration>0, rate>0, noise>=0)";
    throw Error(Errc::InvalidParameters, msg.str());
  }
}

}  // namespace

std::vector<double> synth_r_instants(const SynthParams& params) {
  check_params(params);
  const double rr = 60.0 / params.bpm;
  const double last = params.duration - kQrsWidth / 2;
  std::vector<double> out;
  for (std::size_t j = 0;; ++j) {
    const double t = kFirstBeat + static_cast<double>(j) * rr;
    if (t > last) break;
    out.push_back(t);
  }
  return out;
}

EcgTrace synth_ecg(const SynthParams& params) {
  const auto beats = synth_r_instants(params);
  EcgTrace trace;
  trace.sample_rate = params.sample_rate;
  trace.subject_id = params.subject_id;
  const auto n = static_cast<std::size_t>(std::llround(params.duration * params.sample_rate));
  trace.samples.assign(std::max<std::size_t>(n, 1), 0.0);

  for (double r : beats) {
    for (const auto& b : kBeat) {
      const double centre = r + b.offset;
      const double reach = 5 * b.sigma;
      const auto lo = static_cast<std::ptrdiff_t>(std::ceil((centre - reach) * params.sample_rate));
      const auto hi = static_cast<std::ptrdiff_t>(std::floor((centre + reach) * params.sample_rate));
      for (auto i = std::max<std::ptrdiff_t>(lo, 0); i <= hi && i < static_cast<std::ptrdiff_t>(trace.samples.size()); ++i) {
        const double dt = trace.time_of(static_cast<std::size_t>(i)) - centre;
        trace.samples[static_cast<std::size_t>(i)] += b.amplitude * std::exp(-dt * dt / (2 * b.sigma * b.sigma));
      }
    }
  }

  if (params.noise_amplitude > 0) {
    Rng rng(params.seed);
    for (auto& s : trace.samples) s += params.noise_amplitude * (2 * rng.unit() - 1);
  }
  return trace;
}

RPeakList::RPeakList(std::vector<double> times) : times_(std::move(times)) {
  for (std::size_t j = 1; j < times_.size(); ++j) {
    if (!(times_[j] - times_[j - 1] >= kRefractory - 1e-9)) {
      throw Error(Errc::InvalidParameters, "peaks " + std::to_string(j - 1) + " and " + std::to_string(j) +
                                               " are closer than the refractory period or out of order");
    }
  }
}

RPeakList detect_r_peaks(const EcgTrace& trace) {
  if (trace.sample_rate <= 0) throw Error(Errc::InvalidParameters, "sample rate must be positive");
  if (trace.duration() < kMinDetectDuration) {
    throw Error(Errc::TooShort, "trace lasts " + std::to_string(trace.duration()) + " s, need 2 s");
  }
  const auto& s = trace.samples;
  const double peak = *std::max_element(s.begin(), s.end());
  if (!(peak > 0)) throw Error(Errc::NoPeaks, "trace has no positive excursion");
  const double threshold = kPeakThreshold * peak;
  const auto refractory = kRefractory * trace.sample_rate;

  std::vector<std::size_t> found;
  for (std::size_t i = 1; i + 1 < s.size(); ++i) {
    if (!(s[i] > threshold && s[i] > s[i - 1] && s[i] >= s[i + 1])) continue;
    if (!found.empty() && static_cast<double>(i - found.back()) < refractory) {
      if (s[i] > s[found.back()]) found.back() = i;
      continue;
    }
    found.push_back(i);
  }
  if (found.empty()) throw Error(Errc::NoPeaks, "no local maximum above threshold");

  std::vector<double> times;
  times.reserve(found.size());
  for (auto i : found) times.push_back(trace.time_of(i));
  return RPeakList(std::move(times));
}

BitString bits_from_text(std::string_view text) {
  BitString out;
  out.reserve(text.size());
  for (char c : text) {
    if (c != '0' && c != '1') throw Error(Errc::InvalidParameters, std::string("bit string contains '") + c + "'");
    out.push_back(c == '1');
  }
  return out;
}

std::string bits_to_text(const BitString& bits) {
  std::string out;
  out.reserve(bits.size());
  for (bool b : bits) out.push_back(b ? '1' : '0');
  return out;
}

std::string bits_to_hex(const BitString& bits) {
  if (bits.size() % 4 != 0) throw Error(Errc::InvalidParameters, "bit length is not a multiple of 4");
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  for (std::size_t i = 0; i < bits.size(); i += 4) {
    out.push_back(kDigits[(bits[i] << 3) | (bits[i + 1] << 2) | (bits[i + 2] << 1) | bits[i + 3]]);
  }
  return out;
}

BitString bits_from_hex(std::string_view hex) {
  BitString out;
  for (char c : hex) {
    if (c == ' ' || c == '\n' || c == '\r' || c == '\t') continue;
    int v;
    if (c >= '0' && c <= '9') v = c - '0';
    else if (c >= 'a' && c <= 'f') v = c - 'a' + 10;
    else if (c >= 'A' && c <= 'F') v = c - 'A' + 10;
    else throw Error(Errc::InvalidParameters, std::string("not a hex digit: '") + c + "'");
    for (int b = 3; b >= 0; --b) out.push_back((v >> b) & 1);
  }
  return out;
}

namespace {

void append_word(BitString& bits, std::uint16_t word) {
  for (int b = 15; b >= 0; --b) bits.push_back((word >> b) & 1);
}

}  // namespace

HrvSignature hrv_from_peaks(const RPeakList& peaks) {
  if (peaks.size() < 2) throw Error(Errc::InsufficientPeaks, "need 2 peaks, got " + std::to_string(peaks.size()));
  const auto t = peaks.times();
  HrvSignature sig;
  sig.hrv_values.reserve(t.size() - 1);
  sig.bits.reserve((t.size() - 1) * kBitsPerHrv);
  for (std::size_t j = 0; j + 1 < t.size(); ++j) {
    const double hrv = 1.0 / (t[j + 1] - t[j]);
    sig.hrv_values.push_back(hrv);
    append_word(sig.bits, static_cast<std::uint16_t>(std::clamp(std::lround(hrv * kHrvScale), 0L, 65535L)));
  }
  return sig;
}

HrvSignature signature_from_bits(const BitString& bits) {
  if (bits.size() % kBitsPerHrv != 0) {
    throw Error(Errc::InvalidParameters, "signature length " + std::to_string(bits.size()) + " is not a multiple of 16");
  }
  HrvSignature sig;
  sig.bits = bits;
  for (std::size_t i = 0; i < bits.size(); i += kBitsPerHrv) {
    unsigned word = 0;
    for (std::size_t b = 0; b < kBitsPerHrv; ++b) word = (word << 1) | bits[i + b];
    sig.hrv_values.push_back(word / kHrvScale);
  }
  return sig;
}

std::size_t hamming_distance(const BitString& a, const BitString& b) {
  const auto common = std::min(a.size(), b.size());
  std::size_t dist = std::max(a.size(), b.size()) - common;
  for (std::size_t i = 0; i < common; ++i) dist += a[i] != b[i];
  return dist;
}

AuthVerdict authenticate(const HrvSignature& a, const HrvSignature& b, double threshold, DecisionStatistic statistic) {
  if (a.hrv_values.empty() || b.hrv_values.empty()) throw Error(Errc::EmptySignature, "signature has no HRV values");
  if (!(threshold > 0)) throw Error(Errc::InvalidParameters, "threshold must be positive");

  AuthVerdict v;
  v.compared_intervals = std::min(a.hrv_values.size(), b.hrv_values.size());
  v.unpaired_intervals = std::max(a.hrv_values.size(), b.hrv_values.size()) - v.compared_intervals;
  double total = 0;
  for (std::size_t j = 0; j < v.compared_intervals; ++j) total += std::abs(a.hrv_values[j] - b.hrv_values[j]);
  v.mean_hrv_difference = total / static_cast<double>(v.compared_intervals);
  v.hamming_distance = hamming_distance(a.bits, b.bits);
  v.threshold_used = threshold;
  v.accepted = statistic == DecisionStatistic::mean_hrv_difference
                   ? v.mean_hrv_difference <= threshold
                   : static_cast<double>(v.hamming_distance) <= threshold;
  return v;
}

namespace {

std::string shortest(double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

double parse_double(std::string_view s, std::size_t line) {
  double v = 0;
  auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || end != s.data() + s.size()) {
    throw Error(Errc::BadFile, "ECG line " + std::to_string(line) + ": bad number '" + std::string(s) + "'");
  }
  return v;
}

}  // namespace

std::string format_ecg(const EcgTrace& trace) {
  std::string out = "# rate=" + shortest(trace.sample_rate) + " subject=" + trace.subject_id + "\n";
  for (std::size_t i = 0; i < trace.samples.size(); ++i) {
    out += shortest(trace.time_of(i));
    out += ',';
    out += shortest(trace.samples[i]);
    out += '\n';
  }
  return out;
}

EcgTrace parse_ecg(std::string_view text) {
  EcgTrace trace;
  bool have_rate = false;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    auto line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (line.front() == '#') {
      if (auto at = line.find("rate="); at != std::string_view::npos) {
        auto rest = line.substr(at + 5);
        trace.sample_rate = parse_double(rest.substr(0, rest.find(' ')), line_no);
        have_rate = true;
      }
      if (auto at = line.find("subject="); at != std::string_view::npos) {
        auto rest = line.substr(at + 8);
        trace.subject_id = std::string(rest.substr(0, rest.find(' ')));
      }
      continue;
    }
    const auto comma = line.find(',');
    if (comma == std::string_view::npos) throw Error(Errc::BadFile, "ECG line " + std::to_string(line_no) + " lacks a comma");
    const double t = parse_double(line.substr(0, comma), line_no);
    if (trace.samples.empty()) trace.start_time = t;
    trace.samples.push_back(parse_double(line.substr(comma + 1), line_no));
  }
  if (!have_rate || !(trace.sample_rate > 0)) throw Error(Errc::BadFile, "ECG header lacks a positive rate=");
  if (trace.samples.empty()) throw Error(Errc::BadFile, "ECG file has no samples");
  return trace;
}

EcgTrace read_ecg(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::BadFile, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_ecg(ss.str());
}

void write_ecg(const std::filesystem::path& path, const EcgTrace& trace) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(Errc::BadFile, "cannot write " + path.string());
  out << format_ecg(trace);
}

}  // namespace wbsn::ecg
