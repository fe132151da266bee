#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mtjrng {

// Packed bit sequence with an explicit length.
//
// Bit i lives in word i / 64 at position i % 64 (least significant first), so
// the little-endian byte image of the word array is the LSB-first packed
// encoding used on disk. Storage bits at positions >= size() are always zero;
// every mutating member keeps that invariant.
class BitString {
 public:
  BitString() = default;
  explicit BitString(std::size_t length, bool value = false);

  static BitString zeros(std::size_t length) { return BitString(length, false); }
  static BitString ones(std::size_t length) { return BitString(length, true); }
  // Parses '0'/'1' characters. Any other character is rejected.
  static BitString from_string(std::string_view text);
  // LSB-first packed bytes; bits past `length` in the final byte are ignored.
  static BitString from_bytes(std::span<const std::uint8_t> bytes, std::size_t length);
  static BitString from_words(std::vector<std::uint64_t> words, std::size_t length);

  std::size_t size() const noexcept { return length_; }
  bool empty() const noexcept { return length_ == 0; }

  bool operator[](std::size_t i) const noexcept {
    return (words_[i >> 6] >> (i & 63)) & 1U;
  }
  bool at(std::size_t i) const;
  void set(std::size_t i, bool value) noexcept {
    const std::uint64_t mask = std::uint64_t{1} << (i & 63);
    if (value) {
      words_[i >> 6] |= mask;
    } else {
      words_[i >> 6] &= ~mask;
    }
  }
  void push_back(bool value);
  void reserve(std::size_t bits) { words_.reserve(word_count(bits)); }

  std::span<const std::uint64_t> words() const noexcept { return words_; }

  std::size_t count_ones() const;
  BitString slice(std::size_t offset, std::size_t length) const;
  // Bits [offset, offset + 64) as one word; positions past size() read as 0.
  std::uint64_t word_at_bit(std::size_t offset) const noexcept;

  std::vector<std::uint8_t> to_bytes() const;
  std::string to_string() const;

  friend bool operator==(const BitString& a, const BitString& b) noexcept {
    return a.length_ == b.length_ && a.words_ == b.words_;
  }

  static constexpr std::size_t word_count(std::size_t bits) noexcept { return (bits + 63) / 64; }

 private:
  void clear_tail() noexcept;

  std::vector<std::uint64_t> words_;
  std::size_t length_ = 0;
};

// Bitwise exclusive-or of two equal-length strings.
BitString operator^(const BitString& a, const BitString& b);
BitString bit_xor(const BitString& a, const BitString& b);

}  // namespace mtjrng
