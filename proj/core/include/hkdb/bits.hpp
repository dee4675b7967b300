#pragma once

// Fixed-length bitstrings, index sets over bit positions, and masked
// bitstrings carrying wildcard positions.
//
// Positions are 1-based in every public API (bit 1 is the leftmost
// character of the text form).

#include <compare>
#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hkdb {

class BitString {
 public:
  BitString() = default;

  /// All-zero string of `len` bits.
  explicit BitString(std::size_t len) : bits_(len, 0) {}

  /// Takes ownership of a 0/1 vector. Throws if any element is not 0 or 1.
  explicit BitString(std::vector<std::uint8_t> bits);

  /// Parses the '0'/'1' text form.
  static BitString parse(std::string_view text);

  /// Big-endian: bit 1 is the most significant bit of `value`.
  static BitString from_uint(std::uint64_t value, std::size_t len);

  static BitString zeros(std::size_t len) { return BitString(len); }
  static BitString ones(std::size_t len);

  /// Uniform sample of `len` bits from an explicitly seeded engine.
  static BitString random(std::size_t len, std::mt19937_64& rng);

  std::size_t size() const noexcept { return bits_.size(); }
  bool empty() const noexcept { return bits_.empty(); }

  /// 1-based access; throws std::out_of_range.
  bool bit(std::size_t i) const;

  std::span<const std::uint8_t> view() const noexcept { return bits_; }

  /// Inverse of from_uint; requires size() <= 64.
  std::uint64_t to_uint() const;

  /// Substring of `len` bits starting at 1-based position `from`.
  BitString slice(std::size_t from, std::size_t len) const;

  std::string to_string() const;

  friend bool operator==(const BitString&, const BitString&) = default;
  friend auto operator<=>(const BitString&, const BitString&) = default;

 private:
  std::vector<std::uint8_t> bits_;
};

struct BitStringHash {
  std::size_t operator()(const BitString& b) const noexcept;
};

/// A sorted duplicate-free subset of {1, ..., universe}.
class IndexSet {
 public:
  IndexSet() = default;
  IndexSet(std::size_t universe, std::vector<std::size_t> members);

  static IndexSet full(std::size_t universe);

  std::size_t universe() const noexcept { return universe_; }
  std::span<const std::size_t> members() const noexcept { return members_; }
  std::size_t size() const noexcept { return members_.size(); }
  bool contains(std::size_t i) const;

  friend bool operator==(const IndexSet&, const IndexSet&) = default;

 private:
  std::size_t universe_ = 0;
  std::vector<std::size_t> members_;
};

/// Bitstring over {0, 1, *}; '*' marks a masked position.
class MaskedBitString {
 public:
  enum Symbol : std::uint8_t { kZero = 0, kOne = 1, kStar = 2 };

  MaskedBitString() = default;
  explicit MaskedBitString(std::vector<Symbol> symbols) : symbols_(std::move(symbols)) {}

  static MaskedBitString parse(std::string_view text);

  std::size_t size() const noexcept { return symbols_.size(); }
  Symbol at(std::size_t i) const;  // 1-based
  std::span<const Symbol> view() const noexcept { return symbols_; }

  /// The positions holding '*'.
  IndexSet masked_positions() const;

  std::string to_string() const;

  friend bool operator==(const MaskedBitString&, const MaskedBitString&) = default;

 private:
  std::vector<Symbol> symbols_;
};

/// Number of differing positions. Throws std::invalid_argument on length mismatch.
std::size_t hamming_distance(const BitString& x, const BitString& z);

BitString concat(const BitString& a, const BitString& b);

/// Replaces the positions in `mask` with '*'. Throws if mask.universe() != x.size().
MaskedBitString mask(const BitString& x, const IndexSet& mask);

BitString negate(const BitString& x);

/// a is a prefix of b.
bool is_prefix(const BitString& a, const BitString& b);

}  // namespace hkdb
