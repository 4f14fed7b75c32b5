#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace wbsn::ecg {

struct EcgTrace {
  double sample_rate = 0.0;  // Hz
  std::vector<double> samples;  // mV
  std::string subject_id;
  double start_time = 0.0;  // s

  double duration() const { return sample_rate > 0 ? static_cast<double>(samples.size()) / sample_rate : 0.0; }
  double time_of(std::size_t i) const { return start_time + static_cast<double>(i) / sample_rate; }
};

// Waveform layout relative to each R instant. The R bump is the per-beat
// maximum at 1 mV; the other offsets sit at the middle of the usual
// clinical ranges (P-R 0.12-0.20 s, QRS 0.06-0.10 s, Q-T 0.2-0.4 s).
inline constexpr double kPrInterval = 0.16;
inline constexpr double kQrsWidth = 0.08;
inline constexpr double kQtInterval = 0.35;
inline constexpr double kRAmplitude = 1.0;
// First R wave lands here so that the preceding P wave fits in the trace.
inline constexpr double kFirstBeat = 0.25;

struct SynthParams {
  double bpm = 72.0;
  double duration = 10.0;      // s
  double sample_rate = 250.0;  // Hz
  double noise_amplitude = 0.0;  // mV, uniform in [-a, a]
  std::uint64_t seed = 0;
  std::string subject_id = "subject";
};

/// Throws Errc::InvalidParameters unless 30 <= bpm <= 220, duration > 0,
/// sample_rate > 0 and noise_amplitude >= 0.
EcgTrace synth_ecg(const SynthParams& params);

/// Instants at which synth_ecg places R waves for the given parameters.
std::vector<double> synth_r_instants(const SynthParams& params);

inline constexpr double kRefractory = 0.2;      // s
inline constexpr double kPeakThreshold = 0.6;   // fraction of the global maximum
inline constexpr double kMinDetectDuration = 2.0;  // s

/// Strictly increasing R instants at least kRefractory apart.
class RPeakList {
 public:
  RPeakList() = default;
  /// Throws Errc::InvalidParameters if times break the ordering/refractory rule.
  explicit RPeakList(std::vector<double> times);
  std::span<const double> times() const { return times_; }
  std::size_t size() const { return times_.size(); }

 private:
  std::vector<double> times_;
};

/// Local maxima above kPeakThreshold × global max, with competing maxima
/// inside one refractory window resolved in favour of the larger sample.
/// Throws Errc::TooShort below kMinDetectDuration, Errc::NoPeaks for a
/// flat or sub-threshold trace.
RPeakList detect_r_peaks(const EcgTrace& trace);

using BitString = std::vector<bool>;

BitString bits_from_text(std::string_view zeros_and_ones);
std::string bits_to_text(const BitString& bits);
// Hex dump, 4 bits per digit, most significant first; length must be a multiple of 4.
std::string bits_to_hex(const BitString& bits);
BitString bits_from_hex(std::string_view hex);

inline constexpr double kHrvScale = 100.0;
inline constexpr std::size_t kBitsPerHrv = 16;

struct HrvSignature {
  std::vector<double> hrv_values;  // 1/s, one per RR interval
  BitString bits;                  // round(hrv * 100) as 16-bit big-endian words
};

/// RR[j] = t[j+1] - t[j], HRV[j] = 1 / RR[j]. Throws Errc::InsufficientPeaks below 2 peaks.
HrvSignature hrv_from_peaks(const RPeakList& peaks);

/// Rebuilds a signature from its bit form; HRV values carry the 0.01 quantization.
HrvSignature signature_from_bits(const BitString& bits);

/// Mismatching positions over max(len1, len2); the tail of the longer string counts in full.
std::size_t hamming_distance(const BitString& a, const BitString& b);

inline constexpr double kDefaultThreshold = 0.1;

enum class DecisionStatistic {
  mean_hrv_difference,  // accept iff mean |hrv1 - hrv2| <= threshold
  hamming,              // accept iff hamming distance <= threshold (bits)
};

struct AuthVerdict {
  bool accepted = false;
  double mean_hrv_difference = 0.0;
  std::size_t hamming_distance = 0;
  double threshold_used = 0.0;
  std::size_t compared_intervals = 0;
  std::size_t unpaired_intervals = 0;  // tail of the longer signature, excluded from the mean
};

/// Throws Errc::EmptySignature for an empty side, Errc::InvalidParameters for threshold <= 0.
AuthVerdict authenticate(const HrvSignature& a, const HrvSignature& b, double threshold = kDefaultThreshold,
                         DecisionStatistic statistic = DecisionStatistic::mean_hrv_difference);

// Text file: "# rate=<Hz> subject=<id>" then "time_seconds,amplitude_mv" per line.
std::string format_ecg(const EcgTrace& trace);
EcgTrace parse_ecg(std::string_view text);
EcgTrace read_ecg(const std::filesystem::path& path);
void write_ecg(const std::filesystem::path& path, const EcgTrace& trace);

}  // namespace wbsn::ecg
