#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace dblab {

// Fixed-length sequence of bits. Protocol descriptions number bits 1-based
// (H_1 ... H_4n); this type is 0-based, so bit(i) corresponds to H_{i+1}.
class BitString {
 public:
  BitString() = default;
  explicit BitString(std::vector<std::uint8_t> bits);

  static BitString zeros(std::size_t len);
  static BitString ones(std::size_t len);
  // Parses "0101..."-style text; whitespace is skipped.
  static BitString parse(std::string_view text);

  std::size_t size() const { return bits_.size(); }
  bool empty() const { return bits_.empty(); }

  std::uint8_t bit(std::size_t i) const { return bits_[i]; }
  void set_bit(std::size_t i, std::uint8_t v) { bits_[i] = v & 1u; }
  void append(std::uint8_t v) { bits_.push_back(v & 1u); }

  BitString slice(std::size_t offset, std::size_t len) const;
  std::string str() const;
  const std::vector<std::uint8_t>& bits() const { return bits_; }

  friend bool operator==(const BitString&, const BitString&) = default;

 private:
  std::vector<std::uint8_t> bits_;
};

BitString concat(const std::vector<BitString>& parts);

// Cuts bits into consecutive registers; layout entries must sum to
// bits.size(), otherwise a LayoutError is thrown. Concatenating the result
// reproduces the input bit-for-bit.
std::vector<BitString> split_registers(const BitString& bits,
                                       const std::vector<std::size_t>& layout);

}  // namespace dblab
