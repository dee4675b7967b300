#pragma once

// The Hancke-Kuhn response function, token kernels, and extensionally
// represented partitioned functions.

#include "hkdb/bits.hpp"

#include <nlohmann/json_fwd.hpp>

#include <cstdint>
#include <vector>

namespace hkdb {

/// A 2*ell bit token h = h0 :: h1.
class ResponseToken {
 public:
  ResponseToken() = default;
  ResponseToken(BitString h0, BitString h1);

  /// Splits a 2*ell bit string into its halves. Throws on odd length.
  static ResponseToken from_bits(const BitString& h);

  std::size_t ell() const noexcept { return h0_.size(); }
  const BitString& h0() const noexcept { return h0_; }
  const BitString& h1() const noexcept { return h1_; }

  BitString to_bits() const { return concat(h0_, h1_); }
  std::string to_string() const { return h0_.to_string() + h1_.to_string(); }

  friend bool operator==(const ResponseToken&, const ResponseToken&) = default;

 private:
  BitString h0_;
  BitString h1_;
};

/// (x boxplus h)_i = h1_i if x_i = 1, else h0_i.
BitString boxplus(const BitString& x, const ResponseToken& h);

/// Positions where the two halves agree.
IndexSet kernel(const ResponseToken& h);

/// Recovers h from the responses r1 = x boxplus h and r2 = (not x) boxplus h.
ResponseToken extract_token(const BitString& x, const BitString& r1, const BitString& r2);

/// One block of a partitioned function, given as a truth table.
///
/// The table is indexed by (seed << in_bits) | input, where seed and input
/// are the block's seed slice and input slice read most-significant-bit
/// first. Each entry is an out_bits-wide output.
struct Block {
  unsigned in_bits = 1;
  unsigned out_bits = 1;
  unsigned seed_bits = 0;
  std::vector<std::uint64_t> table;
};

class PartitionedFunction {
 public:
  PartitionedFunction() = default;
  explicit PartitionedFunction(std::vector<Block> blocks);

  std::size_t block_count() const noexcept { return blocks_.size(); }
  const std::vector<Block>& blocks() const noexcept { return blocks_; }
  std::size_t input_width() const noexcept { return input_width_; }
  std::size_t output_width() const noexcept { return output_width_; }
  std::size_t seed_width() const noexcept { return seed_width_; }
  bool is_bitwise() const;

  // Common shapes over ell one-bit blocks.
  static PartitionedFunction identity(std::size_t ell);
  static PartitionedFunction negation(std::size_t ell);
  static PartitionedFunction constant(const BitString& c);
  /// Block i outputs x_i xor rho_i (one seed bit per block).
  static PartitionedFunction xor_with_seed(std::size_t ell);
  /// Block i outputs h0_i or h1_i selected by x_i, where (h0_i, h1_i) are the
  /// block's two seed bits. Randomizing the seed yields x boxplus h for a
  /// uniform token h.
  static PartitionedFunction uniform_token(std::size_t ell);
  /// Every block shares `block`.
  static PartitionedFunction repeated(const Block& block, std::size_t ell);

 private:
  std::vector<Block> blocks_;
  std::size_t input_width_ = 0;
  std::size_t output_width_ = 0;
  std::size_t seed_width_ = 0;
};

/// Output block i is computed from input block i and seed slice i only.
/// Seed slices are laid out contiguously, block 1 first.
BitString eval_partitioned(const PartitionedFunction& f, const BitString& seed, const BitString& x);

/// For a bitwise partitioned function, the token f(0^ell) :: f(1^ell) for each
/// seed value, indexed by the seed read as an unsigned integer.
std::vector<ResponseToken> canonical_form(const PartitionedFunction& f);

/// JSON form: {"blocks": [{"in": 1, "out": 1, "seed": 0, "table": ["0", "1"]}]}
/// where table entries are out-bit strings in table-index order.
PartitionedFunction partitioned_from_json(const nlohmann::json& doc);
nlohmann::json to_json(const PartitionedFunction& f);

}  // namespace hkdb
