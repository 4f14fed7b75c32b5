#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace wbsn::quasi {

using Symbol = std::uint8_t;

/// Largest supported order: symbols are bytes.
inline constexpr std::size_t kMaxOrder = 256;

struct LatinViolation {
  enum class Axis { row, column } axis;
  std::size_t index;
  std::string describe() const;
};

/// Checks that every row and every column of the row-major order×order
/// table is a permutation of [0, order). Returns the first offending row
/// (rows are scanned before columns) or nullopt for a Latin square.
std::optional<LatinViolation> validate_latin_square(std::size_t order, std::span<const std::uint16_t> table);

/// Entry (u, v) is the unique x with u * x = v.
class LeftDivisionTable {
 public:
  std::size_t order() const { return order_; }
  Symbol at(Symbol u, Symbol v) const { return table_[std::size_t{u} * order_ + v]; }

 private:
  friend class Quasigroup;
  std::size_t order_ = 0;
  std::vector<Symbol> table_;
};

/// Finite quasigroup given by its Latin-square operation table plus the
/// secret leader that starts each chain. Immutable; the left-division table
/// is derived once at construction.
class Quasigroup {
 public:
  /// Throws Errc::InvalidLatinSquare (with the violation) or
  /// Errc::UnsupportedOrder / Errc::SymbolOutOfRange for bad shape or leader.
  static Quasigroup from_table(std::size_t order, std::span<const std::uint16_t> table, Symbol leader);

  std::size_t order() const { return order_; }
  Symbol leader() const { return leader_; }
  Symbol op(Symbol row, Symbol col) const { return table_[std::size_t{row} * order_ + col]; }
  std::vector<std::uint16_t> table() const { return {table_.begin(), table_.end()}; }
  const LeftDivisionTable& left_division() const { return ldiv_; }

  friend bool operator==(const Quasigroup& a, const Quasigroup& b) {
    return a.order_ == b.order_ && a.leader_ == b.leader_ && a.table_ == b.table_;
  }

 private:
  Quasigroup() = default;
  std::size_t order_ = 0;
  Symbol leader_ = 0;
  std::vector<Symbol> table_;
  LeftDivisionTable ldiv_;
};

/// Seeded isotope of the cyclic group table (r + c) mod n: random row,
/// column and symbol permutations plus a random leader. Orders must be
/// powers of two in [2, 256]; anything else is Errc::UnsupportedOrder.
Quasigroup generate_quasigroup(std::size_t order, std::uint64_t seed);

inline const LeftDivisionTable& left_division(const Quasigroup& q) { return q.left_division(); }

// c1 = leader * m1, ci = c(i-1) * mi.
std::vector<Symbol> encrypt_chain(const Quasigroup& q, std::span<const Symbol> message);
// m1 = leader \ c1, mi = c(i-1) \ ci.
std::vector<Symbol> decrypt_chain(const Quasigroup& q, std::span<const Symbol> cipher);

// Independent chains over consecutive blocks of block_len symbols, the leader
// restarting each block.
std::vector<Symbol> encrypt_blocks(const Quasigroup& q, std::span<const Symbol> message, std::size_t block_len);
std::vector<Symbol> decrypt_blocks(const Quasigroup& q, std::span<const Symbol> cipher, std::size_t block_len);

inline constexpr std::size_t kDefaultBlockLen = 64;

/// chain, or block with its length.
struct CipherMode {
  enum class Kind { chain, block } kind = Kind::chain;
  std::size_t block_len = kDefaultBlockLen;

  static CipherMode chain() { return {}; }
  static CipherMode block(std::size_t len) { return {Kind::block, len}; }

  /// "chain" or "block:<B>"; throws Errc::InvalidParameters.
  static CipherMode parse(const std::string& text);
  std::string to_string() const;

  friend bool operator==(const CipherMode&, const CipherMode&) = default;
};

std::vector<Symbol> encrypt(const Quasigroup& q, CipherMode mode, std::span<const Symbol> message);
std::vector<Symbol> decrypt(const Quasigroup& q, CipherMode mode, std::span<const Symbol> cipher);

}  // namespace wbsn::quasi
