#include "wbsn/pipeline.hpp"

#include <algorithm>
#include <bit>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "wbsn/payload_format.hpp"
#include "wbsn/rng.hpp"
#include "wbsn/synth_image.hpp"

namespace wbsn {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::string hex32(std::uint32_t v) {
  char buf[9];
  std::snprintf(buf, sizeof buf, "%08x", v);
  return buf;
}

[[noreturn]] void bad_key(const std::string& what) { throw Error(Errc::BadFile, "key file: " + what); }

std::uint64_t parse_uint(const std::string& text, int base, const std::string& field) {
  if (text.empty() || text.size() > 16) bad_key(field + " has no valid number");
  std::size_t used = 0;
  std::uint64_t v = 0;
  try {
    v = std::stoull(text, &used, base);
  } catch (const std::exception&) {
    bad_key(field + " is not a number: " + text);
  }
  if (used != text.size() || text.front() == '-' || text.front() == '+') bad_key(field + " is not a number: " + text);
  return v;
}

std::vector<std::uint64_t> parse_list(const std::string& text, const std::string& field) {
  std::vector<std::uint64_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_uint(item, 10, field));
  if (out.empty()) bad_key(field + " is empty");
  return out;
}

}  // namespace

KeyBundle make_key_bundle(std::size_t k, std::size_t order, std::uint64_t seed, quasi::CipherMode mode) {
  const auto qg_seed = static_cast<std::uint32_t>(splitmix64(seed ^ 0x2));
  return KeyBundle{
      .crt = crt::generate_key(k, splitmix64(seed ^ 0x1)),
      .qg = quasi::generate_quasigroup(order, qg_seed),
      .mode = mode,
      .key_id = static_cast<std::uint32_t>(splitmix64(seed ^ 0x3)),
      .qg_seed = qg_seed,
  };
}

std::string format_key_bundle(const KeyBundle& keys) {
  std::ostringstream out;
  out << "WBSN-KEY v1\n";
  out << "key_id=" << hex32(keys.key_id) << "\n";
  out << "k=" << keys.crt.k() << "\n";
  out << "moduli=";
  for (std::size_t i = 0; i < keys.crt.k(); ++i) out << (i ? "," : "") << keys.crt.moduli()[i];
  out << "\n";
  out << "qg_order=" << keys.qg.order() << "\n";
  if (keys.qg_seed) {
    out << "qg_seed=" << hex32(*keys.qg_seed) << "\n";
  } else {
    out << "qg_table=";
    const auto table = keys.qg.table();
    for (std::size_t i = 0; i < table.size(); ++i) out << (i ? "," : "") << table[i];
    out << "\n";
  }
  out << "leader=" << unsigned{keys.qg.leader()} << "\n";
  out << "mode=" << keys.mode.to_string() << "\n";
  return out.str();
}

KeyBundle parse_key_bundle(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || (line != "WBSN-KEY v1" && line != "WBSN-KEY v1\r")) bad_key("first line must be 'WBSN-KEY v1'");
  std::map<std::string, std::string> fields;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) bad_key("line without '=': " + line);
    auto name = line.substr(0, eq);
    static const char* kKnown[] = {"key_id", "k", "moduli", "qg_order", "qg_seed", "qg_table", "leader", "mode"};
    if (std::find(std::begin(kKnown), std::end(kKnown), name) == std::end(kKnown)) bad_key("unknown field " + name);
    if (!fields.emplace(name, line.substr(eq + 1)).second) bad_key("duplicate field " + name);
  }
  auto need = [&](const char* name) -> const std::string& {
    auto it = fields.find(name);
    if (it == fields.end()) bad_key(std::string("missing ") + name);
    return it->second;
  };

  const auto key_id = parse_uint(need("key_id"), 16, "key_id");
  if (key_id > UINT32_MAX) bad_key("key_id exceeds 32 bits");
  const auto k = parse_uint(need("k"), 10, "k");
  const auto moduli64 = parse_list(need("moduli"), "moduli");
  if (moduli64.size() != k) bad_key("k=" + std::to_string(k) + " but " + std::to_string(moduli64.size()) + " moduli");
  std::vector<std::uint32_t> moduli;
  for (auto m : moduli64) {
    if (m > UINT32_MAX) bad_key("modulus exceeds 32 bits");
    moduli.push_back(static_cast<std::uint32_t>(m));
  }
  const auto order = parse_uint(need("qg_order"), 10, "qg_order");
  const auto leader = parse_uint(need("leader"), 10, "leader");
  if (order < 2 || order > quasi::kMaxOrder) throw Error(Errc::UnsupportedOrder, "qg_order " + std::to_string(order));
  if (leader >= order) throw Error(Errc::SymbolOutOfRange, "leader " + std::to_string(leader) + " not below qg_order");

  const bool has_seed = fields.count("qg_seed") != 0;
  const bool has_table = fields.count("qg_table") != 0;
  if (has_seed == has_table) bad_key("exactly one of qg_seed and qg_table is required");

  std::optional<std::uint32_t> qg_seed;
  std::vector<std::uint16_t> table;
  if (has_seed) {
    const auto s = parse_uint(fields["qg_seed"], 16, "qg_seed");
    if (s > UINT32_MAX) bad_key("qg_seed exceeds 32 bits");
    qg_seed = static_cast<std::uint32_t>(s);
    table = quasi::generate_quasigroup(order, *qg_seed).table();
  } else {
    for (auto v : parse_list(fields["qg_table"], "qg_table")) {
      if (v >= order) bad_key("qg_table entry " + std::to_string(v) + " not below qg_order");
      table.push_back(static_cast<std::uint16_t>(v));
    }
  }

  return KeyBundle{
      .crt = crt::build_key(moduli),
      .qg = quasi::Quasigroup::from_table(order, table, static_cast<quasi::Symbol>(leader)),
      .mode = quasi::CipherMode::parse(need("mode")),
      .key_id = static_cast<std::uint32_t>(key_id),
      .qg_seed = qg_seed,
  };
}

KeyBundle read_key_bundle(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::BadFile, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_key_bundle(ss.str());
}

void write_key_bundle(const std::filesystem::path& path, const KeyBundle& keys) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(Errc::BadFile, "cannot write " + path.string());
  out << format_key_bundle(keys);
}

void KeyRing::add(KeyBundle keys) {
  const auto id = keys.key_id;
  bundles_.insert_or_assign(id, std::move(keys));
}

const KeyBundle& KeyRing::find(std::uint32_t key_id) const {
  auto it = bundles_.find(key_id);
  if (it == bundles_.end()) throw Error(Errc::UnknownKeyId, "no key bundle with id " + hex32(key_id));
  return it->second;
}

namespace {

unsigned symbol_bits(const quasi::Quasigroup& q) {
  switch (q.order()) {
    case 2: return 1;
    case 4: return 2;
    case 16: return 4;
    case 256: return 8;
    default:
      throw Error(Errc::UnsupportedOrder,
                  "byte payloads need quasigroup order 2, 4, 16 or 256, key has " + std::to_string(q.order()));
  }
}

std::vector<quasi::Symbol> unpack(std::span<const std::uint8_t> bytes, unsigned bits) {
  if (bits == 8) return {bytes.begin(), bytes.end()};
  const unsigned per = 8 / bits;
  const auto mask = static_cast<std::uint8_t>((1u << bits) - 1);
  std::vector<quasi::Symbol> out;
  out.reserve(bytes.size() * per);
  for (auto b : bytes) {
    for (unsigned i = per; i-- > 0;) out.push_back(static_cast<quasi::Symbol>((b >> (i * bits)) & mask));
  }
  return out;
}

Bytes pack(std::span<const quasi::Symbol> symbols, unsigned bits) {
  if (bits == 8) return {symbols.begin(), symbols.end()};
  const unsigned per = 8 / bits;
  Bytes out(symbols.size() / per, 0);
  for (std::size_t i = 0; i < symbols.size(); ++i) {
    out[i / per] = static_cast<std::uint8_t>((out[i / per] << bits) | symbols[i]);
  }
  return out;
}

}  // namespace

Bytes encrypt_bytes(const KeyBundle& keys, std::span<const std::uint8_t> plain) {
  const auto bits = symbol_bits(keys.qg);
  return pack(quasi::encrypt(keys.qg, keys.mode, unpack(plain, bits)), bits);
}

Bytes decrypt_bytes(const KeyBundle& keys, std::span<const std::uint8_t> cipher) {
  const auto bits = symbol_bits(keys.qg);
  return pack(quasi::decrypt(keys.qg, keys.mode, unpack(cipher, bits)), bits);
}

Bytes serialize_message(const DataMessage& msg) {
  ByteWriter w;
  w.raw(kContainerMagic);
  w.u8(kContainerVersion);
  w.u32(msg.key_id);
  w.u32(static_cast<std::uint32_t>(msg.encrypted_body.size()));
  w.raw(msg.encrypted_body);
  w.u16(msg.auth.sensor_id);
  w.u64(msg.auth.capture_timestamp_us);
  const auto& sig = msg.auth.signature;
  w.u32(static_cast<std::uint32_t>(sig.size()));
  Bytes packed((sig.size() + 7) / 8, 0);
  for (std::size_t i = 0; i < sig.size(); ++i) {
    if (sig[i]) packed[i / 8] |= static_cast<std::uint8_t>(0x80 >> (i % 8));
  }
  w.raw(packed);
  return std::move(w).take();
}

DataMessage parse_message(std::span<const std::uint8_t> bytes) {
  ByteReader r(bytes);
  const auto magic = r.raw(4, "container magic");
  if (!std::equal(magic.begin(), magic.end(), std::begin(kContainerMagic))) {
    throw Error(Errc::BadMagic, "container magic is not WBSN");
  }
  if (const auto v = r.u8("container version"); v != kContainerVersion) {
    throw Error(Errc::BadVersion, "container version " + std::to_string(v));
  }
  DataMessage msg;
  msg.key_id = r.u32("key id");
  const auto length = r.u32("payload length");
  const auto body = r.raw(length, "encrypted body");
  msg.encrypted_body.assign(body.begin(), body.end());
  msg.auth.sensor_id = r.u16("sensor id");
  msg.auth.capture_timestamp_us = r.u64("capture timestamp");
  const auto bit_len = r.u32("signature bit length");
  const auto packed = r.raw((std::size_t{bit_len} + 7) / 8, "signature bytes");
  msg.auth.signature.resize(bit_len);
  for (std::size_t i = 0; i < bit_len; ++i) msg.auth.signature[i] = (packed[i / 8] >> (7 - i % 8)) & 1;
  if (bit_len % 8 != 0 && (packed.back() & (0xFF >> (bit_len % 8))) != 0) {
    throw Error(Errc::InconsistentCounts, "signature padding bits are not zero");
  }
  if (r.remaining() != 0) {
    throw Error(Errc::InconsistentCounts, std::to_string(r.remaining()) + " trailing byte(s) after container");
  }
  return msg;
}

DataMessage seal(const ImageGrid& img, const ecg::EcgTrace& ecg, const KeyBundle& keys, SealOptions options) {
  const auto payload = crt::encode_image(img, keys.crt);
  const auto signature = ecg::hrv_from_peaks(ecg::detect_r_peaks(ecg));
  DataMessage msg;
  msg.key_id = keys.key_id;
  msg.encrypted_body = encrypt_bytes(keys, serialize_payload(payload));
  msg.auth = AuthBlock{options.sensor_id, options.capture_timestamp_us, signature.bits};
  return msg;
}

OpCounts encode_op_counts(const crt::NticePayload& p) {
  const std::uint64_t blocks = p.block_count;
  return OpCounts{.modular_multiplications = 2 * blocks * p.k, .modular_reductions = 2 * blocks, .table_lookups = 0};
}

namespace {

std::uint64_t symbol_count(const KeyBundle& keys, std::size_t bytes) { return bytes * (8 / symbol_bits(keys.qg)); }

}  // namespace

SessionReport open(const DataMessage& msg, const ecg::EcgTrace& sink_ecg, const KeyRing& ring, OpenOptions options) {
  const auto& keys = ring.find(msg.key_id);
  SessionReport report;
  const auto sink_signature = ecg::hrv_from_peaks(ecg::detect_r_peaks(sink_ecg));
  const auto node_signature = ecg::signature_from_bits(msg.auth.signature);
  report.verdict = ecg::authenticate(node_signature, sink_signature, options.threshold, options.statistic);
  report.bytes_encoded = msg.encrypted_body.size();
  if (!msg.encrypted_body.empty()) report.ciphertext_entropy = shannon_entropy(msg.encrypted_body);
  if (!report.verdict.accepted) {
    report.alarm = true;
    return report;
  }

  const auto plain = decrypt_bytes(keys, msg.encrypted_body);
  report.op_counts.table_lookups += symbol_count(keys, plain.size());
  const auto payload = parse_payload(plain);
  auto image = crt::decode_image(payload, keys.crt);
  report.op_counts.modular_reductions += (payload.tr_table.size() + payload.tr_prime_table.size()) * payload.k;
  report.op_counts.table_lookups += 2 * std::uint64_t{payload.block_count};

  report.bytes_original = image.size();
  report.compression_ratio = compression_ratio(report.bytes_original, plain.size());
  report.compression_ratio_without_header = compression_ratio(report.bytes_original, plain.size() - kPayloadHeaderSize);
  if (options.original && *options.original != image) {
    report.image_recovered = false;
    report.integrity_error = "decoded image differs from the original";
  } else {
    report.image_recovered = true;
  }
  report.image = std::move(image);
  return report;
}

Scenario parse_scenario(const std::string& name) {
  if (name == "same_subject") return Scenario::same_subject;
  if (name == "intruder") return Scenario::intruder;
  if (name == "tamper") return Scenario::tamper;
  throw Error(Errc::InvalidParameters, "unknown scenario '" + name + "'");
}

std::string scenario_name(Scenario s) {
  switch (s) {
    case Scenario::same_subject: return "same_subject";
    case Scenario::intruder: return "intruder";
    case Scenario::tamper: return "tamper";
  }
  return "unknown";
}

SessionReport simulate_session(Scenario scenario, std::uint64_t seed) {
  const auto keys = make_key_bundle(kDefaultBlockLength, kDefaultOrder, seed);
  KeyRing ring;
  ring.add(keys);
  const auto image = synth_image(ImageKind::blocks, 64, 64, seed);

  ecg::SynthParams node{.bpm = kSubjectBpm, .noise_amplitude = kSensorNoise, .seed = splitmix64(seed ^ 0x10),
                        .subject_id = "person1"};
  ecg::SynthParams sink = node;
  sink.seed = splitmix64(seed ^ 0x20);
  if (scenario == Scenario::intruder) {
    sink.bpm = kIntruderBpm;
    sink.subject_id = "person2";
  }

  auto msg = seal(image, ecg::synth_ecg(node), keys, SealOptions{.sensor_id = 1, .capture_timestamp_us = seed});
  if (scenario == Scenario::tamper) {
    Rng rng(splitmix64(seed ^ 0x30));
    const auto at = rng.below(msg.encrypted_body.size());
    msg.encrypted_body[at] ^= static_cast<std::uint8_t>(1 + rng.below(255));
  }

  SessionReport report;
  try {
    report = open(msg, ecg::synth_ecg(sink), ring, OpenOptions{.original = &image});
  } catch (const Error& e) {
    // Only reachable after authentication passed: the failure is in decrypt/parse/decode.
    const auto sink_sig = ecg::hrv_from_peaks(ecg::detect_r_peaks(ecg::synth_ecg(sink)));
    report.verdict = ecg::authenticate(ecg::signature_from_bits(msg.auth.signature), sink_sig);
    report.bytes_encoded = msg.encrypted_body.size();
    report.ciphertext_entropy = shannon_entropy(msg.encrypted_body);
    report.image_recovered = false;
    report.integrity_error = e.what();
  }
  auto node_ops = encode_op_counts(crt::encode_image(image, keys.crt));
  node_ops.table_lookups += symbol_count(keys, msg.encrypted_body.size());
  report.op_counts += node_ops;
  return report;
}

}  // namespace wbsn
