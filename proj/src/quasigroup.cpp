#include "wbsn/quasigroup.hpp"

#include <algorithm>
#include <numeric>

#include "wbsn/error.hpp"
#include "wbsn/rng.hpp"

namespace wbsn::quasi {

std::string LatinViolation::describe() const {
  return std::string(axis == Axis::row ? "row " : "column ") + std::to_string(index) + " is not a permutation";
}

std::optional<LatinViolation> validate_latin_square(std::size_t order, std::span<const std::uint16_t> table) {
  if (order == 0 || table.size() != order * order) return LatinViolation{LatinViolation::Axis::row, 0};
  std::vector<std::size_t> seen(order, SIZE_MAX);
  for (std::size_t r = 0; r < order; ++r) {
    for (std::size_t c = 0; c < order; ++c) {
      const auto v = table[r * order + c];
      if (v >= order || seen[v] == r) return LatinViolation{LatinViolation::Axis::row, r};
      seen[v] = r;
    }
  }
  std::fill(seen.begin(), seen.end(), SIZE_MAX);
  for (std::size_t c = 0; c < order; ++c) {
    for (std::size_t r = 0; r < order; ++r) {
      const auto v = table[r * order + c];
      if (seen[v] == c) return LatinViolation{LatinViolation::Axis::column, c};
      seen[v] = c;
    }
  }
  return std::nullopt;
}

Quasigroup Quasigroup::from_table(std::size_t order, std::span<const std::uint16_t> table, Symbol leader) {
  if (order < 2 || order > kMaxOrder) {
    throw Error(Errc::UnsupportedOrder, "order " + std::to_string(order) + " outside [2, 256]");
  }
  if (table.size() != order * order) {
    throw Error(Errc::InvalidLatinSquare,
                "table has " + std::to_string(table.size()) + " entries, order " + std::to_string(order) + " needs " +
                    std::to_string(order * order));
  }
  if (auto bad = validate_latin_square(order, table)) throw Error(Errc::InvalidLatinSquare, bad->describe());
  if (leader >= order) throw Error(Errc::SymbolOutOfRange, "leader " + std::to_string(leader) + " not below order");

  Quasigroup q;
  q.order_ = order;
  q.leader_ = leader;
  q.table_.assign(table.begin(), table.end());
  q.ldiv_.order_ = order;
  q.ldiv_.table_.resize(order * order);
  for (std::size_t u = 0; u < order; ++u) {
    for (std::size_t x = 0; x < order; ++x) {
      q.ldiv_.table_[u * order + q.table_[u * order + x]] = static_cast<Symbol>(x);
    }
  }
  return q;
}

Quasigroup generate_quasigroup(std::size_t order, std::uint64_t seed) {
  if (order < 2 || order > kMaxOrder || (order & (order - 1)) != 0) {
    throw Error(Errc::UnsupportedOrder, "order " + std::to_string(order) + " is not a power of two in [2, 256]");
  }
  Rng rng(seed);
  auto permutation = [&] {
    std::vector<std::uint16_t> p(order);
    std::iota(p.begin(), p.end(), std::uint16_t{0});
    rng.shuffle(std::span(p));
    return p;
  };
  const auto rows = permutation();
  const auto cols = permutation();
  const auto symbols = permutation();
  std::vector<std::uint16_t> table(order * order);
  for (std::size_t r = 0; r < order; ++r) {
    for (std::size_t c = 0; c < order; ++c) {
      table[r * order + c] = symbols[(rows[r] + cols[c]) % order];
    }
  }
  const auto leader = static_cast<Symbol>(rng.below(order));
  return Quasigroup::from_table(order, table, leader);
}

namespace {

void check_symbols(const Quasigroup& q, std::span<const Symbol> data) {
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (data[i] >= q.order()) {
      throw Error(Errc::SymbolOutOfRange, "symbol " + std::to_string(data[i]) + " at position " + std::to_string(i) +
                                              " not below order " + std::to_string(q.order()));
    }
  }
}

void check_block_len(std::size_t block_len) {
  if (block_len < 1) throw Error(Errc::InvalidBlockLength, "block length must be at least 1");
}

void chain_forward(const Quasigroup& q, std::span<const Symbol> in, std::span<Symbol> out) {
  Symbol prev = q.leader();
  for (std::size_t i = 0; i < in.size(); ++i) out[i] = prev = q.op(prev, in[i]);
}

void chain_backward(const Quasigroup& q, std::span<const Symbol> in, std::span<Symbol> out) {
  const auto& ldiv = q.left_division();
  Symbol prev = q.leader();
  for (std::size_t i = 0; i < in.size(); ++i) {
    out[i] = ldiv.at(prev, in[i]);
    prev = in[i];
  }
}

}  // namespace

std::vector<Symbol> encrypt_chain(const Quasigroup& q, std::span<const Symbol> message) {
  check_symbols(q, message);
  std::vector<Symbol> out(message.size());
  chain_forward(q, message, out);
  return out;
}

std::vector<Symbol> decrypt_chain(const Quasigroup& q, std::span<const Symbol> cipher) {
  check_symbols(q, cipher);
  std::vector<Symbol> out(cipher.size());
  chain_backward(q, cipher, out);
  return out;
}

std::vector<Symbol> encrypt_blocks(const Quasigroup& q, std::span<const Symbol> message, std::size_t block_len) {
  check_block_len(block_len);
  check_symbols(q, message);
  std::vector<Symbol> out(message.size());
  for (std::size_t at = 0; at < message.size(); at += block_len) {
    const auto n = std::min(block_len, message.size() - at);
    chain_forward(q, message.subspan(at, n), std::span(out).subspan(at, n));
  }
  return out;
}

std::vector<Symbol> decrypt_blocks(const Quasigroup& q, std::span<const Symbol> cipher, std::size_t block_len) {
  check_block_len(block_len);
  check_symbols(q, cipher);
  std::vector<Symbol> out(cipher.size());
  for (std::size_t at = 0; at < cipher.size(); at += block_len) {
    const auto n = std::min(block_len, cipher.size() - at);
    chain_backward(q, cipher.subspan(at, n), std::span(out).subspan(at, n));
  }
  return out;
}

CipherMode CipherMode::parse(const std::string& text) {
  if (text == "chain") return chain();
  if (text.rfind("block:", 0) == 0) {
    const auto digits = text.substr(6);
    if (!digits.empty() && digits.size() <= 9 && digits.find_first_not_of("0123456789") == std::string::npos) {
      const auto len = std::stoul(digits);
      if (len >= 1) return block(len);
    }
  }
  throw Error(Errc::InvalidParameters, "mode must be 'chain' or 'block:<B>' with B >= 1, got '" + text + "'");
}

std::string CipherMode::to_string() const {
  return kind == Kind::chain ? "chain" : "block:" + std::to_string(block_len);
}

std::vector<Symbol> encrypt(const Quasigroup& q, CipherMode mode, std::span<const Symbol> message) {
  return mode.kind == CipherMode::Kind::chain ? encrypt_chain(q, message) : encrypt_blocks(q, message, mode.block_len);
}

std::vector<Symbol> decrypt(const Quasigroup& q, CipherMode mode, std::span<const Symbol> cipher) {
  return mode.kind == CipherMode::Kind::chain ? decrypt_chain(q, cipher) : decrypt_blocks(q, cipher, mode.block_len);
}

}  // namespace wbsn::quasi
