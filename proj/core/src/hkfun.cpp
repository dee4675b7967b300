#include "hkdb/hkfun.hpp"

#include <nlohmann/json.hpp>

#include <stdexcept>

namespace hkdb {

ResponseToken::ResponseToken(BitString h0, BitString h1) : h0_(std::move(h0)), h1_(std::move(h1)) {
  if (h0_.size() != h1_.size()) throw std::invalid_argument("ResponseToken: halves differ in length");
}

ResponseToken ResponseToken::from_bits(const BitString& h) {
  if (h.size() % 2 != 0) throw std::invalid_argument("ResponseToken: odd token length");
  std::size_t ell = h.size() / 2;
  return ResponseToken(h.slice(1, ell), h.slice(ell + 1, ell));
}

BitString boxplus(const BitString& x, const ResponseToken& h) {
  if (x.size() != h.ell()) throw std::invalid_argument("boxplus: challenge and token lengths differ");
  std::vector<std::uint8_t> out(x.size());
  auto xv = x.view();
  auto h0 = h.h0().view();
  auto h1 = h.h1().view();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = xv[i] ? h1[i] : h0[i];
  return BitString(std::move(out));
}

IndexSet kernel(const ResponseToken& h) {
  std::vector<std::size_t> members;
  auto h0 = h.h0().view();
  auto h1 = h.h1().view();
  for (std::size_t i = 0; i < h0.size(); ++i) {
    if (h0[i] == h1[i]) members.push_back(i + 1);
  }
  return IndexSet(h.ell(), std::move(members));
}

ResponseToken extract_token(const BitString& x, const BitString& r1, const BitString& r2) {
  if (x.size() != r1.size() || x.size() != r2.size()) {
    throw std::invalid_argument("extract_token: length mismatch");
  }
  std::vector<std::uint8_t> h0(x.size());
  std::vector<std::uint8_t> h1(x.size());
  auto xv = x.view();
  auto a = r1.view();
  auto b = r2.view();
  for (std::size_t i = 0; i < xv.size(); ++i) {
    // r1 answered with selector x_i, r2 with its negation.
    h0[i] = xv[i] ? b[i] : a[i];
    h1[i] = xv[i] ? a[i] : b[i];
  }
  return ResponseToken(BitString(std::move(h0)), BitString(std::move(h1)));
}

PartitionedFunction::PartitionedFunction(std::vector<Block> blocks) : blocks_(std::move(blocks)) {
  for (const auto& b : blocks_) {
    if (b.in_bits + b.seed_bits > 24) throw std::invalid_argument("PartitionedFunction: block table too large");
    if (b.out_bits > 64) throw std::invalid_argument("PartitionedFunction: block output wider than 64 bits");
    std::size_t rows = std::size_t{1} << (b.in_bits + b.seed_bits);
    if (b.table.size() != rows) {
      throw std::invalid_argument("PartitionedFunction: table has " + std::to_string(b.table.size()) +
                                  " rows, expected " + std::to_string(rows));
    }
    for (auto v : b.table) {
      if (b.out_bits < 64 && (v >> b.out_bits) != 0) {
        throw std::invalid_argument("PartitionedFunction: table entry wider than out_bits");
      }
    }
    input_width_ += b.in_bits;
    output_width_ += b.out_bits;
    seed_width_ += b.seed_bits;
  }
}

bool PartitionedFunction::is_bitwise() const {
  for (const auto& b : blocks_) {
    if (b.in_bits != 1 || b.out_bits != 1) return false;
  }
  return true;
}

PartitionedFunction PartitionedFunction::identity(std::size_t ell) {
  return repeated(Block{1, 1, 0, {0, 1}}, ell);
}

PartitionedFunction PartitionedFunction::negation(std::size_t ell) {
  return repeated(Block{1, 1, 0, {1, 0}}, ell);
}

PartitionedFunction PartitionedFunction::constant(const BitString& c) {
  std::vector<Block> blocks;
  for (std::size_t i = 1; i <= c.size(); ++i) {
    std::uint64_t v = c.bit(i) ? 1 : 0;
    blocks.push_back(Block{1, 1, 0, {v, v}});
  }
  return PartitionedFunction(std::move(blocks));
}

PartitionedFunction PartitionedFunction::xor_with_seed(std::size_t ell) {
  // index = (rho << 1) | x
  return repeated(Block{1, 1, 1, {0, 1, 1, 0}}, ell);
}

PartitionedFunction PartitionedFunction::uniform_token(std::size_t ell) {
  // seed = (h0_i, h1_i), index = (seed << 1) | x; output h0_i when x = 0.
  std::vector<std::uint64_t> table(8);
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    std::uint64_t h0 = (seed >> 1) & 1u;
    std::uint64_t h1 = seed & 1u;
    table[(seed << 1) | 0u] = h0;
    table[(seed << 1) | 1u] = h1;
  }
  return repeated(Block{1, 1, 2, std::move(table)}, ell);
}

PartitionedFunction PartitionedFunction::repeated(const Block& block, std::size_t ell) {
  return PartitionedFunction(std::vector<Block>(ell, block));
}

BitString eval_partitioned(const PartitionedFunction& f, const BitString& seed, const BitString& x) {
  if (seed.size() != f.seed_width()) throw std::invalid_argument("eval_partitioned: seed width mismatch");
  if (x.size() != f.input_width()) throw std::invalid_argument("eval_partitioned: input width mismatch");
  std::vector<std::uint8_t> out;
  out.reserve(f.output_width());
  auto xv = x.view();
  auto sv = seed.view();
  std::size_t in_pos = 0;
  std::size_t seed_pos = 0;
  for (const auto& b : f.blocks()) {
    std::uint64_t input = 0;
    for (unsigned k = 0; k < b.in_bits; ++k) input = (input << 1) | xv[in_pos + k];
    std::uint64_t s = 0;
    for (unsigned k = 0; k < b.seed_bits; ++k) s = (s << 1) | sv[seed_pos + k];
    std::uint64_t value = b.table[(s << b.in_bits) | input];
    for (unsigned k = b.out_bits; k-- > 0;) out.push_back(static_cast<std::uint8_t>((value >> k) & 1u));
    in_pos += b.in_bits;
    seed_pos += b.seed_bits;
  }
  return BitString(std::move(out));
}

std::vector<ResponseToken> canonical_form(const PartitionedFunction& f) {
  if (!f.is_bitwise()) throw std::invalid_argument("canonical_form: function is not bitwise partitioned");
  if (f.seed_width() > 20) throw std::invalid_argument("canonical_form: seed too wide to tabulate");
  std::size_t ell = f.block_count();
  std::size_t seeds = std::size_t{1} << f.seed_width();
  std::vector<ResponseToken> out;
  out.reserve(seeds);
  for (std::size_t s = 0; s < seeds; ++s) {
    auto seed = BitString::from_uint(s, f.seed_width());
    out.emplace_back(eval_partitioned(f, seed, BitString::zeros(ell)),
                     eval_partitioned(f, seed, BitString::ones(ell)));
  }
  return out;
}

PartitionedFunction partitioned_from_json(const nlohmann::json& doc) {
  std::vector<Block> blocks;
  for (const auto& jb : doc.at("blocks")) {
    Block b;
    b.in_bits = jb.value("in", 1u);
    b.out_bits = jb.value("out", 1u);
    b.seed_bits = jb.value("seed", 0u);
    for (const auto& entry : jb.at("table")) {
      auto bits = BitString::parse(entry.get<std::string>());
      if (bits.size() != b.out_bits) throw std::invalid_argument("partitioned_from_json: entry width != out");
      b.table.push_back(bits.to_uint());
    }
    blocks.push_back(std::move(b));
  }
  return PartitionedFunction(std::move(blocks));
}

nlohmann::json to_json(const PartitionedFunction& f) {
  nlohmann::json blocks = nlohmann::json::array();
  for (const auto& b : f.blocks()) {
    nlohmann::json table = nlohmann::json::array();
    for (auto v : b.table) table.push_back(BitString::from_uint(v, b.out_bits).to_string());
    blocks.push_back({{"in", b.in_bits}, {"out", b.out_bits}, {"seed", b.seed_bits}, {"table", table}});
  }
  return {{"blocks", blocks}};
}

}  // namespace hkdb
