#include "dblab/bits.hpp"

#include <numeric>

#include "dblab/errors.hpp"

namespace dblab {

BitString::BitString(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
  for (auto& b : bits_) b &= 1u;
}

BitString BitString::zeros(std::size_t len) {
  return BitString(std::vector<std::uint8_t>(len, 0u));
}

BitString BitString::ones(std::size_t len) {
  return BitString(std::vector<std::uint8_t>(len, 1u));
}

BitString BitString::parse(std::string_view text) {
  BitString out;
  for (char c : text) {
    if (c == '0' || c == '1') {
      out.append(c == '1' ? 1u : 0u);
    } else if (c == ' ' || c == '\t' || c == '_') {
      continue;
    } else {
      throw LayoutError("BitString::parse: unexpected character");
    }
  }
  return out;
}

BitString BitString::slice(std::size_t offset, std::size_t len) const {
  if (offset + len > bits_.size())
    throw LayoutError("BitString::slice: range exceeds length");
  return BitString(std::vector<std::uint8_t>(bits_.begin() + offset,
                                             bits_.begin() + offset + len));
}

std::string BitString::str() const {
  std::string s;
  s.reserve(bits_.size());
  for (auto b : bits_) s.push_back(b ? '1' : '0');
  return s;
}

BitString concat(const std::vector<BitString>& parts) {
  BitString out;
  for (const auto& p : parts)
    for (auto b : p.bits()) out.append(b);
  return out;
}

std::vector<BitString> split_registers(const BitString& bits,
                                       const std::vector<std::size_t>& layout) {
  const std::size_t total =
      std::accumulate(layout.begin(), layout.end(), std::size_t{0});
  if (total != bits.size())
    throw LayoutError("split_registers: layout does not cover the bit string");
  std::vector<BitString> out;
  out.reserve(layout.size());
  std::size_t offset = 0;
  for (std::size_t len : layout) {
    out.push_back(bits.slice(offset, len));
    offset += len;
  }
  return out;
}

}  // namespace dblab
