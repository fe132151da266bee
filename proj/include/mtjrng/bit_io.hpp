#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>

#include "mtjrng/bit_string.hpp"

namespace mtjrng::io {

enum class Format { packed, ascii };

Format parse_format(std::string_view name);
std::string_view format_name(Format f);

// Flat "key = value" text with '#' comments. Duplicate keys are rejected.
std::map<std::string, std::string> parse_key_values(std::string_view text);
std::map<std::string, std::string> read_key_values(const std::filesystem::path& path);
std::string render_key_values(const std::map<std::string, std::string>& kv);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, std::string_view text);

// "<file>.meta"
std::filesystem::path sidecar_path(const std::filesystem::path& data);

// Bit payload: LSB-first packed bytes (final byte zero-padded) or one ASCII
// '0'/'1' per bit. The sidecar records bits, format and a config digest.
void write_bit_file(const std::filesystem::path& path, const BitString& bits, Format format,
                    const std::map<std::string, std::string>& metadata = {});
// Reads a payload written by write_bit_file, checking its size against the
// sidecar's bit count.
BitString read_bit_file(const std::filesystem::path& path);

struct ExtractionHeader {
  std::map<std::string, std::string> fields;  // n, k, m, epsilon, digests, ...
};

inline constexpr std::string_view kExtractionMagic = "MTJXTRC1";

// Magic, 4-byte little-endian header length, "key=value" header text, then
// the packed output bits.
void write_extraction_file(const std::filesystem::path& path, const ExtractionHeader& header,
                           const BitString& bits);
BitString read_extraction_file(const std::filesystem::path& path,
                               ExtractionHeader* header = nullptr);

// Bits from either an extraction file or a sidecar-described bit file.
BitString load_bits(const std::filesystem::path& path);

// Seed material: a sidecar-described bit file, or any other file taken as
// packed bytes (8 bits per byte).
BitString load_seed_file(const std::filesystem::path& path);

}  // namespace mtjrng::io
