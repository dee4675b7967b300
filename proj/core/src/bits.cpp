#include "hkdb/bits.hpp"

#include <algorithm>
#include <stdexcept>

namespace hkdb {

BitString::BitString(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
  for (auto b : bits_) {
    if (b > 1) throw std::invalid_argument("BitString: element is not 0 or 1");
  }
}

BitString BitString::parse(std::string_view text) {
  std::vector<std::uint8_t> out;
  out.reserve(text.size());
  for (char c : text) {
    if (c == '0') {
      out.push_back(0);
    } else if (c == '1') {
      out.push_back(1);
    } else {
      throw std::invalid_argument("BitString: invalid character '" + std::string(1, c) + "'");
    }
  }
  BitString b;
  b.bits_ = std::move(out);
  return b;
}

BitString BitString::from_uint(std::uint64_t value, std::size_t len) {
  if (len > 64) throw std::invalid_argument("BitString::from_uint: len > 64");
  if (len < 64 && (value >> len) != 0) {
    throw std::invalid_argument("BitString::from_uint: value does not fit");
  }
  BitString b(len);
  for (std::size_t i = 0; i < len; ++i) {
    b.bits_[len - 1 - i] = static_cast<std::uint8_t>((value >> i) & 1u);
  }
  return b;
}

BitString BitString::ones(std::size_t len) {
  BitString b;
  b.bits_.assign(len, 1);
  return b;
}

BitString BitString::random(std::size_t len, std::mt19937_64& rng) {
  BitString b(len);
  std::size_t i = 0;
  while (i < len) {
    std::uint64_t word = rng();
    for (int k = 0; k < 64 && i < len; ++k, ++i) {
      b.bits_[i] = static_cast<std::uint8_t>((word >> k) & 1u);
    }
  }
  return b;
}

bool BitString::bit(std::size_t i) const {
  if (i < 1 || i > bits_.size()) throw std::out_of_range("BitString::bit: position out of range");
  return bits_[i - 1] != 0;
}

std::uint64_t BitString::to_uint() const {
  if (bits_.size() > 64) throw std::invalid_argument("BitString::to_uint: more than 64 bits");
  std::uint64_t v = 0;
  for (auto b : bits_) v = (v << 1) | b;
  return v;
}

BitString BitString::slice(std::size_t from, std::size_t len) const {
  if (from < 1 || from - 1 + len > bits_.size()) {
    throw std::out_of_range("BitString::slice: range out of bounds");
  }
  BitString b;
  b.bits_.assign(bits_.begin() + static_cast<std::ptrdiff_t>(from - 1),
                 bits_.begin() + static_cast<std::ptrdiff_t>(from - 1 + len));
  return b;
}

std::string BitString::to_string() const {
  std::string s(bits_.size(), '0');
  for (std::size_t i = 0; i < bits_.size(); ++i) {
    if (bits_[i]) s[i] = '1';
  }
  return s;
}

std::size_t BitStringHash::operator()(const BitString& b) const noexcept {
  // FNV-1a over the bits, with the length folded in.
  std::uint64_t h = 1469598103934665603ull ^ b.size();
  for (auto bit : b.view()) {
    h ^= bit;
    h *= 1099511628211ull;
  }
  return static_cast<std::size_t>(h);
}

IndexSet::IndexSet(std::size_t universe, std::vector<std::size_t> members)
    : universe_(universe), members_(std::move(members)) {
  std::sort(members_.begin(), members_.end());
  if (std::adjacent_find(members_.begin(), members_.end()) != members_.end()) {
    throw std::invalid_argument("IndexSet: duplicate member");
  }
  if (!members_.empty() && (members_.front() < 1 || members_.back() > universe_)) {
    throw std::invalid_argument("IndexSet: member outside {1..universe}");
  }
}

IndexSet IndexSet::full(std::size_t universe) {
  std::vector<std::size_t> m(universe);
  for (std::size_t i = 0; i < universe; ++i) m[i] = i + 1;
  return IndexSet(universe, std::move(m));
}

bool IndexSet::contains(std::size_t i) const {
  return std::binary_search(members_.begin(), members_.end(), i);
}

MaskedBitString MaskedBitString::parse(std::string_view text) {
  std::vector<Symbol> out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '0': out.push_back(kZero); break;
      case '1': out.push_back(kOne); break;
      case '*': out.push_back(kStar); break;
      default: throw std::invalid_argument("MaskedBitString: invalid character");
    }
  }
  return MaskedBitString(std::move(out));
}

MaskedBitString::Symbol MaskedBitString::at(std::size_t i) const {
  if (i < 1 || i > symbols_.size()) throw std::out_of_range("MaskedBitString::at");
  return symbols_[i - 1];
}

IndexSet MaskedBitString::masked_positions() const {
  std::vector<std::size_t> m;
  for (std::size_t i = 0; i < symbols_.size(); ++i) {
    if (symbols_[i] == kStar) m.push_back(i + 1);
  }
  return IndexSet(symbols_.size(), std::move(m));
}

std::string MaskedBitString::to_string() const {
  std::string s;
  s.reserve(symbols_.size());
  for (auto sym : symbols_) s.push_back(sym == kStar ? '*' : (sym == kOne ? '1' : '0'));
  return s;
}

std::size_t hamming_distance(const BitString& x, const BitString& z) {
  if (x.size() != z.size()) throw std::invalid_argument("hamming_distance: length mismatch");
  auto xv = x.view();
  auto zv = z.view();
  std::size_t d = 0;
  for (std::size_t i = 0; i < xv.size(); ++i) d += (xv[i] != zv[i]);
  return d;
}

BitString concat(const BitString& a, const BitString& b) {
  std::vector<std::uint8_t> out(a.view().begin(), a.view().end());
  out.insert(out.end(), b.view().begin(), b.view().end());
  return BitString(std::move(out));
}

MaskedBitString mask(const BitString& x, const IndexSet& m) {
  if (m.universe() != x.size()) throw std::invalid_argument("mask: universe mismatch");
  std::vector<MaskedBitString::Symbol> out(x.size());
  auto xv = x.view();
  for (std::size_t i = 0; i < xv.size(); ++i) {
    out[i] = xv[i] ? MaskedBitString::kOne : MaskedBitString::kZero;
  }
  for (auto i : m.members()) out[i - 1] = MaskedBitString::kStar;
  return MaskedBitString(std::move(out));
}

BitString negate(const BitString& x) {
  std::vector<std::uint8_t> out(x.view().begin(), x.view().end());
  for (auto& b : out) b ^= 1u;
  return BitString(std::move(out));
}

bool is_prefix(const BitString& a, const BitString& b) {
  if (a.size() > b.size()) return false;
  return std::equal(a.view().begin(), a.view().end(), b.view().begin());
}

}  // namespace hkdb
