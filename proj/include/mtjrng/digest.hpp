#pragma once

#include <cstdint>
#include <span>
#include <string>

#include "mtjrng/bit_string.hpp"

namespace mtjrng {

std::string sha256_hex(std::span<const std::uint8_t> bytes);
// SHA-256 over the 8-byte little-endian bit count followed by the packed bits.
std::string digest(const BitString& bits);

}  // namespace mtjrng
