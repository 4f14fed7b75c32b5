// wbsn: command-line front end for the sensor-to-sink security pipeline.

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "wbsn/bench.hpp"
#include "wbsn/payload_format.hpp"
#include "wbsn/pipeline.hpp"
#include "wbsn/synth_image.hpp"

namespace fs = std::filesystem;
using namespace wbsn;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitAlarm = 3;

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::trunc);
  if (!out) throw Error(Errc::BadFile, "cannot write " + out_path);
  out << text;
}

std::string read_text(const std::string& path) {
  const auto bytes = read_file(path);
  return std::string(bytes.begin(), bytes.end());
}

ImageGrid load_image(const std::string& pgm, const std::string& raw, std::uint32_t width, std::uint32_t height) {
  if (!pgm.empty() && !raw.empty()) throw CLI::ValidationError("--image", "give either --image or --raw, not both");
  if (!pgm.empty()) return read_pgm(pgm);
  if (raw.empty()) throw CLI::RequiredError("--image or --raw");
  return read_raw(raw, width, height);
}

std::string verdict_text(const ecg::AuthVerdict& v) {
  std::ostringstream out;
  out << (v.accepted ? "accepted" : "rejected (alarm)") << " mean_hrv_difference=" << v.mean_hrv_difference
      << " hamming_distance=" << v.hamming_distance << " threshold=" << v.threshold_used
      << " compared=" << v.compared_intervals << " unpaired=" << v.unpaired_intervals << "\n";
  return out.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-level security toolkit for biomedical sensor data: CRT image codec, quasigroup cipher, ECG/HRV authentication"};
  app.require_subcommand(1);
  int exit_code = kExitOk;

  // keygen
  auto* keygen = app.add_subcommand("keygen", "Generate a key bundle file");
  std::size_t kg_k = kDefaultBlockLength, kg_order = kDefaultOrder;
  std::uint64_t kg_seed = 0;
  std::string kg_mode = "chain", kg_out;
  keygen->add_option("--k", kg_k, "CRT block length (number of moduli)");
  keygen->add_option("--order", kg_order, "Quasigroup order (2, 4, 16 or 256 for byte payloads)");
  keygen->add_option("--seed", kg_seed, "Seed for all key material");
  keygen->add_option("--mode", kg_mode, "chain or block:<B>");
  keygen->add_option("--out", kg_out, "Key file to write")->required();
  keygen->callback([&] {
    const auto keys = make_key_bundle(kg_k, kg_order, kg_seed, quasi::CipherMode::parse(kg_mode));
    write_key_bundle(kg_out, keys);
  });

  // encode / decode
  auto* encode = app.add_subcommand("encode", "Compress an image into a CRT payload");
  std::string enc_image, enc_raw, enc_key, enc_out;
  std::uint32_t enc_w = 0, enc_h = 0;
  encode->add_option("--image", enc_image, "Binary PGM input");
  encode->add_option("--raw", enc_raw, "Raw row-major 8-bit input (needs --width/--height)");
  encode->add_option("--width", enc_w);
  encode->add_option("--height", enc_h);
  encode->add_option("--key", enc_key, "Key bundle file")->required();
  encode->add_option("--out", enc_out, "Payload file to write")->required();
  encode->callback([&] {
    const auto keys = read_key_bundle(enc_key);
    const auto img = load_image(enc_image, enc_raw, enc_w, enc_h);
    write_file(enc_out, serialize_payload(crt::encode_image(img, keys.crt)));
  });

  auto* decode = app.add_subcommand("decode", "Rebuild an image from a CRT payload");
  std::string dec_in, dec_key, dec_out;
  decode->add_option("--in", dec_in, "Payload file")->required();
  decode->add_option("--key", dec_key, "Key bundle file")->required();
  decode->add_option("--out", dec_out, "PGM file to write")->required();
  decode->callback([&] {
    const auto keys = read_key_bundle(dec_key);
    write_pgm(dec_out, crt::decode_image(parse_payload(read_file(dec_in)), keys.crt));
  });

  // encrypt / decrypt
  std::string cr_in, cr_key, cr_out;
  auto* encrypt = app.add_subcommand("encrypt", "Quasigroup-encrypt a file");
  auto* decrypt = app.add_subcommand("decrypt", "Quasigroup-decrypt a file");
  for (auto* sub : {encrypt, decrypt}) {
    sub->add_option("--in", cr_in)->required();
    sub->add_option("--key", cr_key)->required();
    sub->add_option("--out", cr_out)->required();
  }
  encrypt->callback([&] { write_file(cr_out, encrypt_bytes(read_key_bundle(cr_key), read_file(cr_in))); });
  decrypt->callback([&] { write_file(cr_out, decrypt_bytes(read_key_bundle(cr_key), read_file(cr_in))); });

  // seal / open
  auto* seal_cmd = app.add_subcommand("seal", "Node side: compress, encrypt and sign an image into a message");
  std::string seal_image, seal_raw, seal_ecg, seal_key, seal_out;
  std::uint32_t seal_w = 0, seal_h = 0;
  std::uint16_t seal_sensor = 1;
  std::uint64_t seal_ts = 0;
  seal_cmd->add_option("--image", seal_image);
  seal_cmd->add_option("--raw", seal_raw);
  seal_cmd->add_option("--width", seal_w);
  seal_cmd->add_option("--height", seal_h);
  seal_cmd->add_option("--ecg", seal_ecg, "ECG captured by this node")->required();
  seal_cmd->add_option("--key", seal_key)->required();
  seal_cmd->add_option("--sensor-id", seal_sensor);
  seal_cmd->add_option("--timestamp", seal_ts, "Capture time, microseconds");
  seal_cmd->add_option("--out", seal_out, "Message file to write")->required();
  seal_cmd->callback([&] {
    const auto keys = read_key_bundle(seal_key);
    const auto img = load_image(seal_image, seal_raw, seal_w, seal_h);
    const auto msg = seal(img, ecg::read_ecg(seal_ecg), keys, SealOptions{seal_sensor, seal_ts});
    write_file(seal_out, serialize_message(msg));
  });

  auto* open_cmd = app.add_subcommand("open", "Sink side: authenticate, decrypt and decode a message");
  std::string open_in, open_ecg, open_key, open_out;
  double open_threshold = ecg::kDefaultThreshold;
  open_cmd->add_option("--in", open_in, "Message file")->required();
  open_cmd->add_option("--ecg", open_ecg, "ECG captured on the sink side")->required();
  open_cmd->add_option("--key", open_key)->required();
  open_cmd->add_option("--threshold", open_threshold);
  open_cmd->add_option("--out", open_out, "PGM file to write")->required();
  open_cmd->callback([&] {
    KeyRing ring;
    ring.add(read_key_bundle(open_key));
    const auto report = open(parse_message(read_file(open_in)), ecg::read_ecg(open_ecg), ring,
                             OpenOptions{.threshold = open_threshold});
    std::cout << verdict_text(report.verdict);
    if (report.alarm) {
      exit_code = kExitAlarm;
      return;
    }
    write_pgm(open_out, *report.image);
  });

  // images and ECG
  auto* synth_cmd = app.add_subcommand("synth-image", "Write a synthetic test image");
  std::string si_kind = "blocks", si_out;
  std::uint32_t si_w = 128, si_h = 128;
  std::uint64_t si_seed = 0;
  BlocksLayout si_layout;
  synth_cmd->add_option("--kind", si_kind, "flat, gradient, blocks or noise");
  synth_cmd->add_option("--width", si_w);
  synth_cmd->add_option("--height", si_h);
  synth_cmd->add_option("--seed", si_seed);
  synth_cmd->add_option("--tiles", si_layout.tiles);
  synth_cmd->add_option("--tile-size", si_layout.tile_size);
  synth_cmd->add_option("--out", si_out)->required();
  synth_cmd->callback([&] { write_pgm(si_out, synth_image(parse_image_kind(si_kind), si_w, si_h, si_seed, si_layout)); });

  auto* ecg_sim = app.add_subcommand("ecg-sim", "Write a synthetic ECG trace");
  ecg::SynthParams sim;
  std::string sim_out;
  ecg_sim->add_option("--bpm", sim.bpm);
  ecg_sim->add_option("--duration", sim.duration, "Seconds");
  ecg_sim->add_option("--rate", sim.sample_rate, "Hz");
  ecg_sim->add_option("--noise", sim.noise_amplitude, "mV");
  ecg_sim->add_option("--seed", sim.seed);
  ecg_sim->add_option("--subject", sim.subject_id);
  ecg_sim->add_option("--out", sim_out)->required();
  ecg_sim->callback([&] { ecg::write_ecg(sim_out, ecg::synth_ecg(sim)); });

  auto* hrv_cmd = app.add_subcommand("hrv", "Detect R peaks and write the HRV signature (hex)");
  std::string hrv_ecg, hrv_out;
  hrv_cmd->add_option("--ecg", hrv_ecg)->required();
  hrv_cmd->add_option("--out", hrv_out, "Signature file; stdout when omitted");
  hrv_cmd->callback([&] {
    const auto peaks = ecg::detect_r_peaks(ecg::read_ecg(hrv_ecg));
    const auto sig = ecg::hrv_from_peaks(peaks);
    double mean = 0;
    for (double h : sig.hrv_values) mean += h;
    mean /= static_cast<double>(sig.hrv_values.size());
    std::cerr << peaks.size() << " peaks, mean RR " << 1.0 / mean << " s, mean HRV " << mean << "\n";
    emit(ecg::bits_to_hex(sig.bits) + "\n", hrv_out);
  });

  auto* auth = app.add_subcommand("auth", "Compare two HRV signatures");
  std::string sig_a, sig_b, auth_stat = "mean";
  double auth_threshold = ecg::kDefaultThreshold;
  auth->add_option("--sig-a", sig_a)->required();
  auth->add_option("--sig-b", sig_b)->required();
  auth->add_option("--threshold", auth_threshold);
  auth->add_option("--statistic", auth_stat, "mean (HRV difference) or hamming (bits)");
  auth->callback([&] {
    if (auth_stat != "mean" && auth_stat != "hamming") throw CLI::ValidationError("--statistic", "must be mean or hamming");
    const auto a = ecg::signature_from_bits(ecg::bits_from_hex(read_text(sig_a)));
    const auto b = ecg::signature_from_bits(ecg::bits_from_hex(read_text(sig_b)));
    const auto v = ecg::authenticate(a, b, auth_threshold,
                                     auth_stat == "mean" ? ecg::DecisionStatistic::mean_hrv_difference
                                                         : ecg::DecisionStatistic::hamming);
    std::cout << verdict_text(v);
    if (!v.accepted) exit_code = kExitAlarm;
  });

  // simulation and measurement
  auto* pipeline = app.add_subcommand("pipeline", "Run a simulated node-to-sink session");
  std::string pl_scenario = "same_subject", pl_report = "json", pl_out;
  std::uint64_t pl_seed = 0;
  pipeline->add_option("--scenario", pl_scenario, "same_subject, intruder or tamper");
  pipeline->add_option("--seed", pl_seed);
  pipeline->add_option("--report", pl_report, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  pipeline->add_option("--out", pl_out);
  pipeline->callback([&] {
    const auto scenario = parse_scenario(pl_scenario);
    const auto report = simulate_session(scenario, pl_seed);
    emit(pl_report == "json" ? session_report_json(scenario, pl_seed, report)
                             : session_report_csv(scenario, pl_seed, report),
         pl_out);
    if (report.alarm) exit_code = kExitAlarm;
    else if (!report.image_recovered) exit_code = kExitData;
  });

  auto* entropy = app.add_subcommand("entropy", "Byte entropy of a file, bits per byte");
  std::string ent_in;
  entropy->add_option("--in", ent_in)->required();
  entropy->callback([&] {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f\n", shannon_entropy(read_file(ent_in)));
    std::cout << buf;
  });

  auto* bench = app.add_subcommand("bench", "Codec and cipher metrics for every PGM in a directory");
  std::string b_dir, b_key, b_report = "csv", b_out;
  std::vector<std::string> b_external;
  bench->add_option("--images", b_dir, "Directory of .pgm files")->required()->check(CLI::ExistingDirectory);
  bench->add_option("--key", b_key)->required();
  bench->add_option("--report", b_report, "csv or json")->check(CLI::IsMember({"json", "csv"}));
  bench->add_option("--external", b_external, "Extra ciphertext files (e.g. AES output) for entropy comparison");
  bench->add_option("--out", b_out);
  bench->callback([&] {
    const auto keys = read_key_bundle(b_key);
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(b_dir)) {
      if (entry.is_regular_file() && entry.path().extension() == ".pgm") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    std::vector<MetricsRow> rows;
    for (const auto& f : files) rows.push_back(benchmark_image("NTICE+QG:" + f.filename().string(), read_pgm(f), keys));
    for (const auto& f : b_external) rows.push_back(external_entropy_row("external:" + fs::path(f).filename().string(), read_file(f)));
    emit(b_report == "csv" ? metrics_to_csv(rows) : metrics_to_json(rows), b_out);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return exit_code;
}
