#include "mtjrng/bit_io.hpp"

#include <fstream>
#include <iterator>
#include <sstream>
#include <vector>

#include "mtjrng/error.hpp"

namespace mtjrng::io {
namespace fs = std::filesystem;

Format parse_format(std::string_view name) {
  if (name == "packed") return Format::packed;
  if (name == "ascii") return Format::ascii;
  throw ConfigError("unknown bit format '" + std::string(name) + "' (packed or ascii)");
}

std::string_view format_name(Format f) { return f == Format::packed ? "packed" : "ascii"; }

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::uint8_t> read_bytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw StageError("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_bytes(const fs::path& path, std::string_view prefix,
                 const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw StageError("cannot write " + path.string());
  out.write(prefix.data(), static_cast<std::streamsize>(prefix.size()));
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw StageError("write failed for " + path.string());
}

}  // namespace

std::map<std::string, std::string> parse_key_values(std::string_view text) {
  std::map<std::string, std::string> out;
  std::istringstream in{std::string(text)};
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(number) + ": expected key = value");
    }
    const std::string key = trim(std::string_view(body).substr(0, eq));
    const std::string value = trim(std::string_view(body).substr(eq + 1));
    if (key.empty()) throw ConfigError("line " + std::to_string(number) + ": empty key");
    if (!out.emplace(key, value).second) {
      throw ConfigError("line " + std::to_string(number) + ": duplicate key '" + key + "'");
    }
  }
  return out;
}

std::map<std::string, std::string> read_key_values(const fs::path& path) {
  return parse_key_values(read_text(path));
}

std::string render_key_values(const std::map<std::string, std::string>& kv) {
  std::string out;
  for (const auto& [k, v] : kv) out += k + " = " + v + "\n";
  return out;
}

std::string read_text(const fs::path& path) {
  const auto bytes = read_bytes(path);
  return {bytes.begin(), bytes.end()};
}

void write_text(const fs::path& path, std::string_view text) {
  write_bytes(path, text, {});
}

fs::path sidecar_path(const fs::path& data) {
  fs::path p = data;
  p += ".meta";
  return p;
}

void write_bit_file(const fs::path& path, const BitString& bits, Format format,
                    const std::map<std::string, std::string>& metadata) {
  if (format == Format::packed) {
    write_bytes(path, {}, bits.to_bytes());
  } else {
    write_bytes(path, bits.to_string(), {});
  }
  auto meta = metadata;
  meta["bits"] = std::to_string(bits.size());
  meta["format"] = std::string(format_name(format));
  meta["bit_order"] = "lsb_first";
  write_text(sidecar_path(path), render_key_values(meta));
}

BitString read_bit_file(const fs::path& path) {
  const auto meta = read_key_values(sidecar_path(path));
  const auto bits_it = meta.find("bits");
  if (bits_it == meta.end()) throw StageError(sidecar_path(path).string() + " lacks 'bits'");
  std::size_t bits = 0;
  try {
    bits = std::stoull(bits_it->second);
  } catch (const std::exception&) {
    throw StageError("bad bit count in " + sidecar_path(path).string());
  }
  const Format format = meta.contains("format") ? parse_format(meta.at("format")) : Format::packed;
  const auto bytes = read_bytes(path);
  const std::size_t expected = format == Format::packed ? (bits + 7) / 8 : bits;
  if (bytes.size() != expected) {
    throw StageError(path.string() + " holds " + std::to_string(bytes.size()) +
                     " bytes but its metadata promises " + std::to_string(bits) + " bits (" +
                     std::to_string(expected) + " bytes)");
  }
  if (format == Format::packed) return BitString::from_bytes(bytes, bits);
  return BitString::from_string(std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
}

void write_extraction_file(const fs::path& path, const ExtractionHeader& header,
                           const BitString& bits) {
  auto fields = header.fields;
  fields["bits"] = std::to_string(bits.size());
  fields["bit_order"] = "lsb_first";
  std::string text;
  for (const auto& [k, v] : fields) text += k + "=" + v + "\n";
  std::string prefix(kExtractionMagic);
  const auto len = static_cast<std::uint32_t>(text.size());
  for (int i = 0; i < 4; ++i) prefix.push_back(static_cast<char>((len >> (8 * i)) & 0xff));
  prefix += text;
  write_bytes(path, prefix, bits.to_bytes());
}

BitString read_extraction_file(const fs::path& path, ExtractionHeader* header) {
  const auto bytes = read_bytes(path);
  const std::size_t fixed = kExtractionMagic.size() + 4;
  if (bytes.size() < fixed ||
      std::string_view(reinterpret_cast<const char*>(bytes.data()), kExtractionMagic.size()) !=
          kExtractionMagic) {
    throw StageError(path.string() + " is not an extraction output file");
  }
  std::uint32_t len = 0;
  for (int i = 0; i < 4; ++i) {
    len |= static_cast<std::uint32_t>(bytes[kExtractionMagic.size() + i]) << (8 * i);
  }
  if (bytes.size() < fixed + len) throw StageError(path.string() + ": truncated header");
  const std::string text(bytes.begin() + fixed, bytes.begin() + fixed + len);
  ExtractionHeader parsed;
  parsed.fields = parse_key_values(text);
  if (!parsed.fields.contains("bits")) throw StageError(path.string() + ": header lacks bits");
  const std::size_t bits = std::stoull(parsed.fields.at("bits"));
  const std::size_t payload = bytes.size() - fixed - len;
  if (payload != (bits + 7) / 8) {
    throw StageError(path.string() + ": payload holds " + std::to_string(payload) +
                     " bytes, header promises " + std::to_string(bits) + " bits");
  }
  if (header != nullptr) *header = std::move(parsed);
  return BitString::from_bytes(std::span(bytes).subspan(fixed + len), bits);
}

BitString load_bits(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw StageError("cannot open " + path.string());
  std::string magic(kExtractionMagic.size(), '\0');
  in.read(magic.data(), static_cast<std::streamsize>(magic.size()));
  if (in && magic == kExtractionMagic) return read_extraction_file(path);
  return read_bit_file(path);
}

BitString load_seed_file(const fs::path& path) {
  if (fs::exists(sidecar_path(path))) return read_bit_file(path);
  const auto bytes = read_bytes(path);
  return BitString::from_bytes(bytes, bytes.size() * 8);
}

}  // namespace mtjrng::io
