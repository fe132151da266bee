#include "mtjrng/bit_string.hpp"

#include <string>

#include "mtjrng/error.hpp"
#include "mtjrng/kernels/kernels.hpp"

namespace mtjrng {

BitString::BitString(std::size_t length, bool value)
    : words_(word_count(length), value ? ~std::uint64_t{0} : 0), length_(length) {
  clear_tail();
}

BitString BitString::from_string(std::string_view text) {
  BitString out(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '1') {
      out.set(i, true);
    } else if (text[i] != '0') {
      throw ConfigError("bit string contains a character other than '0'/'1' at index " +
                        std::to_string(i));
    }
  }
  return out;
}

BitString BitString::from_bytes(std::span<const std::uint8_t> bytes, std::size_t length) {
  if (bytes.size() * 8 < length) {
    throw StageError("packed buffer holds " + std::to_string(bytes.size() * 8) +
                     " bits, expected at least " + std::to_string(length));
  }
  BitString out(length);
  const std::size_t used = (length + 7) / 8;
  for (std::size_t i = 0; i < used; ++i) {
    out.words_[i / 8] |= static_cast<std::uint64_t>(bytes[i]) << (8 * (i % 8));
  }
  out.clear_tail();
  return out;
}

BitString BitString::from_words(std::vector<std::uint64_t> words, std::size_t length) {
  if (words.size() < word_count(length)) throw ConfigError("word buffer shorter than length");
  words.resize(word_count(length));
  BitString out;
  out.words_ = std::move(words);
  out.length_ = length;
  out.clear_tail();
  return out;
}

bool BitString::at(std::size_t i) const {
  if (i >= length_) throw std::out_of_range("bit index out of range");
  return (*this)[i];
}

void BitString::push_back(bool value) {
  if ((length_ & 63) == 0) words_.push_back(0);
  ++length_;
  set(length_ - 1, value);
}

std::size_t BitString::count_ones() const {
  return static_cast<std::size_t>(kernels::kernels().popcount_words(words_));
}

std::uint64_t BitString::word_at_bit(std::size_t offset) const noexcept {
  const std::size_t w = offset >> 6;
  const unsigned shift = offset & 63;
  if (w >= words_.size()) return 0;
  std::uint64_t out = words_[w] >> shift;
  if (shift != 0 && w + 1 < words_.size()) out |= words_[w + 1] << (64 - shift);
  return out;
}

BitString BitString::slice(std::size_t offset, std::size_t length) const {
  if (offset > length_ || length > length_ - offset) {
    throw std::out_of_range("slice exceeds bit string");
  }
  BitString out(length);
  for (std::size_t w = 0; w < out.words_.size(); ++w) {
    out.words_[w] = word_at_bit(offset + 64 * w);
  }
  out.clear_tail();
  return out;
}

std::vector<std::uint8_t> BitString::to_bytes() const {
  std::vector<std::uint8_t> out((length_ + 7) / 8);
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = static_cast<std::uint8_t>(words_[i / 8] >> (8 * (i % 8)));
  }
  return out;
}

std::string BitString::to_string() const {
  std::string out(length_, '0');
  for (std::size_t i = 0; i < length_; ++i) {
    if ((*this)[i]) out[i] = '1';
  }
  return out;
}

void BitString::clear_tail() noexcept {
  const unsigned used = length_ & 63;
  if (used != 0) words_.back() &= (std::uint64_t{1} << used) - 1;
}

BitString bit_xor(const BitString& a, const BitString& b) {
  if (a.size() != b.size()) {
    throw ConfigError("xor of bit strings with lengths " + std::to_string(a.size()) + " and " +
                      std::to_string(b.size()));
  }
  std::vector<std::uint64_t> out(a.words().size());
  kernels::kernels().xor_words(a.words(), b.words(), out);
  return BitString::from_words(std::move(out), a.size());
}

BitString operator^(const BitString& a, const BitString& b) { return bit_xor(a, b); }

}  // namespace mtjrng
